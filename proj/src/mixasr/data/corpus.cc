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

#include "mixasr/data/corpus.h"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mixasr/error.h"
#include "mixasr/numerics/rng.h"

namespace mixasr {

namespace {

constexpr std::uint64_t kPrototypeSeed = 0x70726f746f747970ULL;  // "prototyp"

const char* const kSplitNames[3] = {"train", "dev", "eval"};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

double parse_real(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size(), ErrorCode::kFormat,
          "not a number: '" + s + "'");
  return v;
}

}  // namespace

std::size_t MixtureSample::num_reference_tokens() const {
  std::size_t n = 0;
  for (const auto& r : references) n += r.size();
  return n;
}

void DataConfig::validate() const {
  require(num_symbols >= 4, ErrorCode::kInvalidArgument,
          "need at least 4 non-reserved symbols");
  require(min_label_len >= 1 && min_label_len <= max_label_len,
          ErrorCode::kInvalidArgument, "label length range is empty");
  require(frames_per_token >= 2, ErrorCode::kInvalidArgument,
          "frames_per_token must be >= 2");
  require(dim >= 2, ErrorCode::kInvalidArgument, "dim must be >= 2");
  require(noise_std >= 0.0 && std::isfinite(noise_std), ErrorCode::kInvalidArgument,
          "noise_std must be finite and >= 0");
  require(gain_min_db <= gain_max_db, ErrorCode::kInvalidArgument,
          "gain range is empty");
  require(n_train > 0 && n_dev > 0 && n_eval > 0, ErrorCode::kInvalidArgument,
          "every split needs at least one mixture");
}

Tensor symbol_prototypes(std::size_t num_symbols, std::size_t dim) {
  Tensor protos = Tensor::matrix(num_symbols, dim);
  for (std::size_t k = 0; k < num_symbols; ++k) {
    Rng rng(derive_seed(kPrototypeSeed, {k, dim}));
    auto row = protos.row(k);
    for (double& v : row) v = rng.gaussian();
    if (k < dim) {
      for (std::size_t j = 0; j < k; ++j) {
        auto prev = protos.row(j);
        double dot = 0.0;
        for (std::size_t d = 0; d < dim; ++d) dot += row[d] * prev[d];
        for (std::size_t d = 0; d < dim; ++d) row[d] -= dot * prev[d];
      }
    }
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : row) v /= norm;
  }
  return protos;
}

Utterance synth_source(const Vocabulary& vocab, const TokenSeq& labels,
                       std::uint64_t seed, std::size_t frames_per_token,
                       std::size_t dim, double noise_std, std::string id) {
  require(!labels.empty(), ErrorCode::kInvalidArgument, "synth_source: empty labels");
  require(frames_per_token >= 2, ErrorCode::kInvalidArgument,
          "synth_source: frames_per_token must be >= 2");
  require(dim >= 2, ErrorCode::kInvalidArgument, "synth_source: dim must be >= 2");
  for (Token t : labels)
    require(vocab.is_symbol(t), ErrorCode::kInvalidArgument,
            "synth_source: token " + std::to_string(t) + " is not a symbol");

  const Tensor protos = symbol_prototypes(vocab.num_symbols(), dim);
  Utterance u;
  u.id = std::move(id);
  u.labels = labels;
  u.features = make_features(labels.size() * frames_per_token, dim);
  Rng rng(seed);
  std::size_t t = 0;
  for (Token tok : labels) {
    auto proto = protos.row(static_cast<std::size_t>(tok - 1));
    for (std::size_t k = 0; k < frames_per_token; ++k, ++t) {
      auto frame = u.features.row(t);
      for (std::size_t d = 0; d < dim; ++d) frame[d] = proto[d] + noise_std * rng.gaussian();
    }
  }
  return u;
}

MixtureSample mix(const Utterance& a, const Utterance& b, double gain_db,
                  std::string id) {
  require(a.features.cols() == b.features.cols(), ErrorCode::kShapeMismatch,
          "mix: feature dimensions differ (" + std::to_string(a.features.cols()) +
              " vs " + std::to_string(b.features.cols()) + ")");
  const double scale = std::pow(10.0, gain_db / 20.0);
  const std::size_t dim = a.features.cols();
  const std::size_t frames = std::max(a.features.rows(), b.features.rows());
  MixtureSample m;
  m.id = std::move(id);
  m.gain_db = gain_db;
  m.references = {a.labels, b.labels};
  m.source_ids = {a.id, b.id};
  m.mixture = make_features(frames, dim);
  for (std::size_t t = 0; t < frames; ++t) {
    auto out = m.mixture.row(t);
    if (t < a.features.rows()) {
      auto fa = a.features.row(t);
      for (std::size_t d = 0; d < dim; ++d) out[d] = fa[d];
    }
    if (t < b.features.rows()) {
      auto fb = b.features.row(t);
      for (std::size_t d = 0; d < dim; ++d) out[d] += scale * fb[d];
    }
  }
  return m;
}

CorpusSplit build_corpus(const DataConfig& config) {
  config.validate();
  CorpusSplit corpus;
  corpus.vocab = Vocabulary::with_default_symbols(config.num_symbols);
  corpus.seed = config.seed;
  const std::size_t counts[3] = {config.n_train, config.n_dev, config.n_eval};
  std::vector<MixtureSample>* outs[3] = {&corpus.train, &corpus.dev, &corpus.eval};
  const std::size_t len_span = config.max_label_len - config.min_label_len + 1;

  for (std::size_t split = 0; split < 3; ++split) {
    outs[split]->reserve(counts[split]);
    for (std::size_t i = 0; i < counts[split]; ++i) {
      const std::uint64_t sample_seed = derive_seed(config.seed, {split, i});
      Rng rng(sample_seed);
      Utterance sources[2];
      for (std::size_t k = 0; k < 2; ++k) {
        const std::size_t len = config.min_label_len + rng.uniform_int(len_span);
        TokenSeq labels(len);
        for (auto& t : labels)
          t = static_cast<Token>(1 + rng.uniform_int(config.num_symbols));
        char id[64];
        std::snprintf(id, sizeof(id), "%s%05zu-src%zu", kSplitNames[split], i, k);
        sources[k] = synth_source(corpus.vocab, labels, derive_seed(sample_seed, {k}),
                                  config.frames_per_token, config.dim,
                                  config.noise_std, id);
      }
      const double gain = config.gain_min_db == config.gain_max_db
                              ? config.gain_min_db
                              : rng.uniform(config.gain_min_db, config.gain_max_db);
      char id[64];
      std::snprintf(id, sizeof(id), "%s%05zu", kSplitNames[split], i);
      outs[split]->push_back(mix(sources[0], sources[1], gain, id));
    }
  }
  return corpus;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string manifest_line(const Vocabulary& vocab, const MixtureSample& sample) {
  std::string line = sample.id + "\t" + format_real(sample.gain_db);
  for (const auto& ref : sample.references) line += "\t" + vocab.join(ref);
  return line;
}

void write_corpus(const std::filesystem::path& dir, const CorpusSplit& corpus) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream vocab(dir / "vocab.txt", std::ios::trunc);
    require(vocab.good(), ErrorCode::kIo, "cannot write vocab.txt in " + dir.string());
    for (const auto& s : corpus.vocab.symbols()) vocab << s << '\n';
  }
  const std::vector<MixtureSample>* splits[3] = {&corpus.train, &corpus.dev, &corpus.eval};
  for (std::size_t split = 0; split < 3; ++split) {
    const fs::path sdir = dir / kSplitNames[split];
    fs::create_directories(sdir);
    std::ofstream manifest(sdir / "manifest.tsv", std::ios::trunc);
    require(manifest.good(), ErrorCode::kIo, "cannot write manifest in " + sdir.string());
    for (const auto& sample : *splits[split]) {
      manifest << manifest_line(corpus.vocab, sample) << '\n';
      write_features(sdir / (sample.id + ".ftrs"), sample.mixture);
    }
  }
}

Vocabulary read_vocab(const std::filesystem::path& corpus_dir) {
  std::ifstream in(corpus_dir / "vocab.txt");
  require(in.good(), ErrorCode::kIo, "cannot open " + (corpus_dir / "vocab.txt").string());
  std::vector<std::string> symbols;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) symbols.push_back(line);
  return Vocabulary(std::move(symbols));
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path,
                                         const Vocabulary& vocab) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    require(fields.size() >= 4, ErrorCode::kFormat,
            path.string() + ":" + std::to_string(lineno) +
                ": expected id, gain and at least two label fields");
    ManifestEntry e;
    e.id = fields[0];
    e.gain_db = parse_real(fields[1]);
    for (std::size_t k = 2; k < fields.size(); ++k)
      e.references.push_back(vocab.parse(fields[k]));
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<MixtureSample> read_split(const std::filesystem::path& split_dir,
                                      const Vocabulary& vocab) {
  std::vector<MixtureSample> samples;
  for (auto& e : read_manifest(split_dir / "manifest.tsv", vocab)) {
    MixtureSample s;
    s.id = e.id;
    s.gain_db = e.gain_db;
    s.references = std::move(e.references);
    s.mixture = read_features(split_dir / (s.id + ".ftrs"));
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace mixasr
