// Copyright 2026 The mixasr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mixasr/mixasr.h"

namespace {

struct ConfigHandle {
  mixasr_config* ptr = nullptr;
  ~ConfigHandle() { mixasr_config_free(ptr); }
};

struct Failure {
  mixasr_status status;
};

void check(mixasr_status s) {
  if (s != MIXASR_OK) throw Failure{s};
}

void print_line(const char* line, void*) {
  std::printf("%s\n", line);
  std::fflush(stdout);
}

// Options shared by the commands that take an experiment config.
struct CommonOptions {
  std::string config_file;
  std::vector<std::string> overrides;  // section.key=value
  std::optional<unsigned long long> seed;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_file, "experiment config file")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "override a config value, section.key=value");
  cmd->add_option("--seed", o.seed, "seed for this command's randomness");
}

void set(ConfigHandle& c, const std::string& key, const std::string& value) {
  check(mixasr_config_set(c.ptr, key.c_str(), value.c_str()));
}

void load_config(ConfigHandle& c, const CommonOptions& o, const std::string& fallback = {}) {
  if (!o.config_file.empty()) {
    check(mixasr_config_load(o.config_file.c_str(), &c.ptr));
  } else if (!fallback.empty() && std::filesystem::exists(fallback)) {
    check(mixasr_config_load(fallback.c_str(), &c.ptr));
  } else {
    check(mixasr_config_new(&c.ptr));
  }
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects section.key=value, got '%s'\n", kv.c_str());
      throw Failure{MIXASR_INVALID_ARGUMENT};
    }
    set(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-speaker joint CTC/attention recognizer on synthetic mixtures"};
  app.set_version_flag("--version", mixasr_version());
  app.require_subcommand(1);

  // mix-data
  CommonOptions mix_opts;
  std::string mix_out;
  bool mix_force = false;
  auto* mix = app.add_subcommand("mix-data", "generate the synthetic two-speaker corpus");
  add_common(mix, mix_opts);
  mix->add_option("--out", mix_out, "corpus output directory")->required();
  mix->add_flag("--force", mix_force, "overwrite a non-empty output directory");

  // train
  CommonOptions train_opts;
  std::string train_corpus, train_out, train_attention;
  std::optional<double> train_ss;
  std::optional<unsigned long long> train_epochs, train_batch, train_threads;
  bool train_no_lm = false;
  auto* tr = app.add_subcommand("train", "train the recognizer (and the fusion LM)");
  add_common(tr, train_opts);
  tr->add_option("--corpus", train_corpus, "corpus directory from mix-data")->required();
  tr->add_option("--out", train_out, "experiment output directory")->required();
  tr->add_option("--attention", train_attention, "attention mode")
      ->check(CLI::IsMember({"shared", "parallel"}));
  tr->add_option("--ss-prob", train_ss, "scheduled sampling probability");
  tr->add_option("--epochs", train_epochs, "number of epochs");
  tr->add_option("--batch-size", train_batch, "mixtures per update");
  tr->add_option("--threads", train_threads, "worker threads per batch");
  tr->add_flag("--no-lm", train_no_lm, "skip language model training");

  // decode
  CommonOptions dec_opts;
  std::string dec_model, dec_lm, dec_split, dec_out, dec_att, dec_scoring;
  std::optional<unsigned long long> dec_beam;
  std::optional<double> dec_ctc, dec_lmw;
  bool dec_no_lm = false;
  auto* de = app.add_subcommand("decode", "joint CTC/attention beam search");
  add_common(de, dec_opts);
  de->add_option("--model", dec_model, "checkpoint (model.bin)")->required()->check(CLI::ExistingFile);
  de->add_option("--lm", dec_lm, "language model (default: lm.bin next to the model)");
  de->add_flag("--no-lm", dec_no_lm, "decode without the language model");
  de->add_option("--split", dec_split, "split directory with manifest.tsv")->required();
  de->add_option("--out", dec_out, "decode output file")->required();
  de->add_option("--dump-attention", dec_att, "directory for attention CSV/PGM dumps");
  de->add_option("--beam", dec_beam, "beam width");
  de->add_option("--ctc-weight", dec_ctc, "CTC weight in the joint score");
  de->add_option("--lm-weight", dec_lmw, "language model weight");
  de->add_option("--ctc-scoring", dec_scoring, "how CTC enters the search")
      ->check(CLI::IsMember({"prefix", "rescore"}));

  // score
  std::string sc_decodes, sc_manifest, sc_vocab, sc_out, sc_boundary;
  auto* sc = app.add_subcommand("score", "permutation-minimum CER/WER");
  sc->add_option("--decodes", sc_decodes, "decode output file")->required()->check(CLI::ExistingFile);
  sc->add_option("--manifest", sc_manifest, "reference manifest.tsv")->required()->check(CLI::ExistingFile);
  sc->add_option("--vocab", sc_vocab, "vocab.txt of the corpus")->required()->check(CLI::ExistingFile);
  sc->add_option("--out", sc_out, "report file")->required();
  sc->add_option("--word-boundary", sc_boundary, "symbol separating words (default: none)");

  // plot-attention
  std::string pa_csv, pa_out;
  std::size_t pa_scale = 4;
  auto* pa = app.add_subcommand("plot-attention", "render an attention CSV dump as PGM");
  pa->add_option("--csv", pa_csv, "attention CSV")->required()->check(CLI::ExistingFile);
  pa->add_option("--out", pa_out, "output PGM")->required();
  pa->add_option("--scale", pa_scale, "pixels per cell")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (mix->parsed()) {
      ConfigHandle c;
      load_config(c, mix_opts);
      if (mix_opts.seed) set(c, "data.seed", std::to_string(*mix_opts.seed));
      check(mixasr_mix_data(c.ptr, mix_out.c_str(), mix_force ? 1 : 0));
      std::printf("wrote corpus to %s\n", mix_out.c_str());
    } else if (tr->parsed()) {
      ConfigHandle c;
      load_config(c, train_opts);
      if (train_opts.seed) set(c, "train.seed", std::to_string(*train_opts.seed));
      if (!train_attention.empty()) set(c, "model.attention", train_attention);
      if (train_ss) set(c, "train.ss_prob", real(*train_ss));
      if (train_epochs) set(c, "train.epochs", std::to_string(*train_epochs));
      if (train_batch) set(c, "train.batch_size", std::to_string(*train_batch));
      if (train_threads) set(c, "train.threads", std::to_string(*train_threads));
      if (train_no_lm) set(c, "lm.enabled", "false");
      check(mixasr_config_validate(c.ptr));
      std::printf("epoch\ttrain_loss\tdev_loss\tdev_ctc_cer\twallclock_s\n");
      check(mixasr_train(c.ptr, train_corpus.c_str(), train_out.c_str(), print_line, nullptr));
    } else if (de->parsed()) {
      const std::filesystem::path model_dir = std::filesystem::path(dec_model).parent_path();
      ConfigHandle c;
      load_config(c, dec_opts, (model_dir / "config.txt").string());
      if (dec_beam) set(c, "decode.beam", std::to_string(*dec_beam));
      if (dec_ctc) set(c, "decode.ctc_weight", real(*dec_ctc));
      if (dec_lmw) set(c, "decode.lm_weight", real(*dec_lmw));
      if (!dec_scoring.empty()) set(c, "decode.ctc_scoring", dec_scoring);
      check(mixasr_config_validate(c.ptr));
      std::string lm = dec_lm;
      if (lm.empty() && !dec_no_lm && std::filesystem::exists(model_dir / "lm.bin"))
        lm = (model_dir / "lm.bin").string();
      if (dec_no_lm) lm.clear();
      check(mixasr_decode(c.ptr, dec_model.c_str(), lm.empty() ? nullptr : lm.c_str(),
                          dec_split.c_str(), dec_out.c_str(),
                          dec_att.empty() ? nullptr : dec_att.c_str(), nullptr, nullptr));
      std::printf("wrote %s\n", dec_out.c_str());
    } else if (sc->parsed()) {
      double cer = 0.0, wer = 0.0;
      check(mixasr_score(sc_decodes.c_str(), sc_manifest.c_str(), sc_vocab.c_str(),
                         sc_out.c_str(), sc_boundary.empty() ? nullptr : sc_boundary.c_str(),
                         &cer, &wer));
      std::printf("CER\t%.2f\nWER\t%.2f\n", 100.0 * cer, 100.0 * wer);
    } else if (pa->parsed()) {
      check(mixasr_plot_attention(pa_csv.c_str(), pa_out.c_str(), pa_scale));
      std::printf("wrote %s\n", pa_out.c_str());
    }
  } catch (const Failure& f) {
    const char* msg = mixasr_last_error();
    if (msg && *msg) std::fprintf(stderr, "error: %s\n", msg);
    return mixasr_exit_code(f.status);
  }
  return 0;
}
