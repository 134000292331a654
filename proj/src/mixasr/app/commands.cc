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

#include "mixasr/app/commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mixasr/data/corpus.h"
#include "mixasr/decoding/beam_search.h"
#include "mixasr/error.h"
#include "mixasr/util/keyvalue.h"

namespace mixasr {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<TokenSeq> transcripts_of(const std::vector<MixtureSample>& samples) {
  std::vector<TokenSeq> out;
  for (const auto& s : samples)
    for (const auto& r : s.references) out.push_back(r);
  return out;
}

}  // namespace

std::string RunManifest::serialize() const {
  KeyValueDoc doc;
  doc.set("run", "command", command);
  doc.set("run", "config_hash", config_hash);
  for (const auto& [k, v] : seeds) doc.set("seeds", k, v);
  for (const auto& [k, v] : artifacts) doc.set("artifacts", k, v);
  for (const auto& [k, v] : metrics) doc.set("metrics", k, v);
  return doc.serialize();
}

void RunManifest::write(const fs::path& path) const { write_file_atomic(path, serialize()); }

void write_file_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::kIo, "cannot write " + tmp.string());
    out << text;
    out.flush();
    require(out.good(), ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  require(!ec, ErrorCode::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
}

void cmd_mix_data(const ExperimentConfig& config, const fs::path& out_dir, bool force) {
  config.validate();
  if (fs::exists(out_dir)) {
    require(fs::is_directory(out_dir), ErrorCode::kIo,
            out_dir.string() + " exists and is not a directory");
    if (!fs::is_empty(out_dir)) {
      require(force, ErrorCode::kIo,
              "output directory " + out_dir.string() + " is not empty (use --force)");
      for (const auto& entry : fs::directory_iterator(out_dir)) fs::remove_all(entry.path());
    }
  }
  const CorpusSplit corpus = build_corpus(config.data);
  write_corpus(out_dir, corpus);
  write_file_atomic(out_dir / "config.txt", config.serialize());

  RunManifest m;
  m.command = "mix-data";
  m.config_hash = config_hash(config);
  m.seeds = {{"data", std::to_string(config.data.seed)}};
  m.artifacts = {{"vocab", "vocab.txt"},
                 {"train", "train/manifest.tsv"},
                 {"dev", "dev/manifest.tsv"},
                 {"eval", "eval/manifest.tsv"}};
  m.metrics = {{"n_train", std::to_string(corpus.train.size())},
               {"n_dev", std::to_string(corpus.dev.size())},
               {"n_eval", std::to_string(corpus.eval.size())}};
  m.write(out_dir / "run_manifest.txt");
}

EpochRecord cmd_train(const ExperimentConfig& config, const fs::path& corpus_dir,
                      const fs::path& out_dir, const LogFn& log) {
  config.validate();
  const Vocabulary vocab = read_vocab(corpus_dir);
  const auto train_set = read_split(corpus_dir / "train", vocab);
  const auto dev_set = read_split(corpus_dir / "dev", vocab);
  require(!train_set.empty() && !dev_set.empty(), ErrorCode::kFormat,
          "corpus " + corpus_dir.string() + " has an empty train or dev split");
  require(train_set.front().mixture.cols() == config.data.dim, ErrorCode::kShapeMismatch,
          "corpus feature dim " + std::to_string(train_set.front().mixture.cols()) +
              " does not match data.dim " + std::to_string(config.data.dim));
  fs::create_directories(out_dir);

  std::string metrics = epoch_record_header() + "\n";
  TrainHooks hooks;
  hooks.on_epoch = [&](const EpochRecord& r) {
    metrics += format_epoch_record(r) + "\n";
    if (log) log(format_epoch_record(r));
  };
  hooks.warn = [&](const std::string& msg) {
    if (log) log("warning: " + msg);
  };
  const TrainResult result =
      train(config.model_config(vocab), config.train, train_set, dev_set, hooks);
  write_file_atomic(out_dir / "metrics.tsv", metrics);
  result.best.save(out_dir / "model.bin");
  write_file_atomic(out_dir / "config.txt", config.serialize());

  RunManifest m;
  m.command = "train";
  m.config_hash = config_hash(config);
  m.seeds = {{"train", std::to_string(config.train.seed)}};
  m.artifacts = {{"model", "model.bin"}, {"metrics", "metrics.tsv"}, {"config", "config.txt"}};
  if (config.use_lm) {
    const auto transcripts = transcripts_of(train_set);
    const TinyLm lm = train_lm(transcripts, vocab, config.lm);
    lm.save(out_dir / "lm.bin");
    m.seeds.push_back({"lm", std::to_string(config.lm.seed)});
    m.artifacts.push_back({"lm", "lm.bin"});
    m.metrics.push_back({"lm_dev_perplexity", format_real(lm_perplexity(lm, transcripts_of(dev_set)))});
  }
  const EpochRecord& best = result.log.at(result.best_epoch - 1);
  m.metrics.push_back({"initial_dev_loss", format_real(result.initial_dev_loss)});
  m.metrics.push_back({"best_epoch", std::to_string(result.best_epoch)});
  m.metrics.push_back({"best_dev_loss", format_real(best.dev_loss)});
  m.metrics.push_back({"best_dev_ctc_cer", format_real(best.dev_ctc_cer)});
  m.write(out_dir / "run_manifest.txt");
  return best;
}

void cmd_decode(const ExperimentConfig& config, const DecodeRequest& request, const LogFn& log) {
  config.decode.validate();
  const Model model = Model::load(request.model);
  std::optional<TinyLm> lm;
  if (request.lm) lm = TinyLm::load(*request.lm);
  const Vocabulary& vocab = model.vocab();
  const auto samples = read_split(request.split_dir, vocab);
  if (request.attention_dir) fs::create_directories(*request.attention_dir);

  std::string out;
  for (const auto& sample : samples) {
    const StreamSet streams = model.encoder().encode(model.params(), sample.mixture);
    const auto decodes = beam_search(model, streams, lm ? &*lm : nullptr, config.decode);
    for (std::size_t s = 0; s < decodes.size(); ++s) {
      out += sample.id + "\t" + std::to_string(s) + "\t" + format_real(decodes[s].score) + "\t" +
             vocab.join(decodes[s].tokens) + "\n";
      if (request.attention_dir) {
        const fs::path base = *request.attention_dir / (sample.id + ".s" + std::to_string(s));
        write_file_atomic(fs::path(base) += ".csv", attention_csv(decodes[s].attention));
        write_file_atomic(fs::path(base) += ".pgm", attention_pgm(decodes[s].attention));
      }
    }
    if (log) log("decoded " + sample.id);
  }
  if (request.output.has_parent_path()) fs::create_directories(request.output.parent_path());
  write_file_atomic(request.output, out);

  RunManifest m;
  m.command = "decode";
  m.config_hash = config_hash(config);
  m.artifacts = {{"model", request.model.string()},
                 {"split", request.split_dir.string()},
                 {"output", request.output.string()}};
  if (request.lm) m.artifacts.push_back({"lm", request.lm->string()});
  if (request.attention_dir) m.artifacts.push_back({"attention", request.attention_dir->string()});
  m.metrics = {{"utterances", std::to_string(samples.size())},
               {"beam", std::to_string(config.decode.beam)},
               {"ctc_weight", format_real(config.decode.ctc_weight)},
               {"lm_weight", format_real(request.lm ? config.decode.lm_weight : 0.0)}};
  fs::path manifest = request.output;
  manifest += ".manifest";
  m.write(manifest);
}

EvalReport cmd_score(const fs::path& decodes, const fs::path& manifest, const fs::path& vocab_file,
                     const fs::path& report, std::optional<std::string> word_boundary) {
  std::vector<std::string> symbols;
  {
    std::istringstream in(read_text(vocab_file));
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) symbols.push_back(line);
  }
  const Vocabulary vocab(std::move(symbols));
  std::optional<Token> boundary;
  if (word_boundary) {
    boundary = vocab.lookup(*word_boundary);
    require(boundary.has_value(), ErrorCode::kInvalidArgument,
            "word boundary '" + *word_boundary + "' is not in the vocabulary");
  }

  std::map<std::string, std::map<std::size_t, TokenSeq>> hyps;
  {
    std::istringstream in(read_text(decodes));
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<std::string> f;
      std::size_t start = 0;
      for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1)
        f.push_back(line.substr(start, tab - start));
      f.push_back(line.substr(start));
      require(f.size() == 4, ErrorCode::kFormat,
              decodes.string() + ":" + std::to_string(lineno) + ": expected 4 tab-separated fields");
      const std::size_t stream = parse_uint(f[1], "stream index");
      require(hyps[f[0]].emplace(stream, vocab.parse(f[3])).second, ErrorCode::kFormat,
              decodes.string() + ":" + std::to_string(lineno) + ": duplicate stream for " + f[0]);
    }
  }

  EvalReport result;
  for (const auto& entry : read_manifest(manifest, vocab)) {
    const auto it = hyps.find(entry.id);
    require(it != hyps.end(), ErrorCode::kFormat, "no decodes for utterance " + entry.id);
    std::vector<TokenSeq> h;
    for (std::size_t s = 0; s < entry.references.size(); ++s) {
      const auto hs = it->second.find(s);
      require(hs != it->second.end(), ErrorCode::kFormat,
              "utterance " + entry.id + " is missing stream " + std::to_string(s));
      h.push_back(hs->second);
    }
    require(it->second.size() == entry.references.size(), ErrorCode::kFormat,
            "utterance " + entry.id + " has more decoded streams than references");
    result.add(entry.id, h, entry.references, boundary);
  }
  if (report.has_parent_path()) fs::create_directories(report.parent_path());
  write_file_atomic(report, result.to_text(vocab));
  return result;
}

std::string attention_csv(const Tensor& weights) {
  std::string out;
  for (std::size_t r = 0; r < weights.rows(); ++r) {
    for (std::size_t c = 0; c < weights.cols(); ++c) {
      if (c) out += ',';
      out += format_real(weights(r, c));
    }
    out += '\n';
  }
  return out;
}

Tensor parse_attention_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      row.push_back(parse_double(line.substr(start, comma - start), "attention weight"));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    require(rows.empty() || row.size() == rows.front().size(), ErrorCode::kFormat,
            "attention csv rows differ in length");
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorCode::kFormat, "attention csv is empty");
  Tensor t = Tensor::matrix(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    std::copy(rows[r].begin(), rows[r].end(), t.row(r).begin());
  return t;
}

std::string attention_pgm(const Tensor& weights, std::size_t scale) {
  require(scale >= 1, ErrorCode::kInvalidArgument, "pgm scale must be >= 1");
  double peak = 0.0;
  for (double v : weights.values()) peak = std::max(peak, v);
  const std::size_t h = weights.rows() * scale;
  const std::size_t w = weights.cols() * scale;
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double v = peak > 0.0 ? weights(y / scale, x / scale) / peak : 0.0;
      out += static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
    }
  }
  return out;
}

void plot_attention(const fs::path& csv, const fs::path& pgm, std::size_t scale) {
  write_file_atomic(pgm, attention_pgm(parse_attention_csv(read_text(csv)), scale));
}

}  // namespace mixasr
