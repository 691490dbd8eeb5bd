// Copyright 2026 The bitext Authors
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
//

#include "bitext/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bitext/error.hpp"
#include "bitext/parallel.hpp"
#include "bitext/text.hpp"

namespace bitext {

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ValidationError("cosine: dimension mismatch " + std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    dot += u[k] * v[k];
    uu += u[k] * u[k];
    vv += v[k] * v[k];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

void normalize_embedding(Embedding& v) {
  double norm2 = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw ProviderError("embedding has a non-finite component");
    norm2 += x * x;
  }
  if (norm2 == 0.0) return;
  const double norm = std::sqrt(norm2);
  for (double& x : v) x /= norm;
}

std::vector<ScoredPair> score_pairs(const Corpus& corpus, EmbeddingProvider& provider, const ScoreOptions& options) {
  if (options.batch_size == 0) throw ValidationError("score_pairs: batch_size must be positive");
  std::vector<ScoredPair> out(corpus.size());
  const Chunking batches{corpus.size(), options.batch_size};
  const unsigned workers = provider.concurrent() ? options.workers : 1;
  parallel_for(batches.count(), workers, [&](std::size_t b) {
    const std::size_t first = batches.begin(b);
    const std::size_t last = batches.end(b);
    std::vector<std::string> texts;
    texts.reserve(2 * (last - first));
    for (std::size_t k = first; k < last; ++k) {
      texts.push_back(corpus.pairs[k].src);
      texts.push_back(corpus.pairs[k].tgt);
    }
    std::vector<Embedding> vectors;
    try {
      vectors = provider.embed(texts);
    } catch (const Error& e) {
      throw ProviderError("embedding batch for pairs " + std::to_string(corpus.pairs[first].id) + ".." +
                          std::to_string(corpus.pairs[last - 1].id) + " failed: " + e.what());
    }
    if (vectors.size() != texts.size()) {
      throw ProviderError("provider returned " + std::to_string(vectors.size()) + " vectors for " +
                          std::to_string(texts.size()) + " texts");
    }
    for (std::size_t k = first; k < last; ++k) {
      const std::size_t slot = 2 * (k - first);
      out[k] = ScoredPair{corpus.pairs[k], cosine(vectors[slot], vectors[slot + 1])};
    }
  });
  return out;
}

Corpus filter_by_threshold(std::span<const ScoredPair> scored, double threshold, std::string name) {
  Corpus out;
  out.name = std::move(name);
  for (const auto& s : scored) {
    if (s.similarity >= threshold) out.add(s.pair.src, s.pair.tgt);
  }
  return out;
}

Calibration summarize_similarities(std::span<const double> similarities, double margin) {
  if (similarities.empty()) throw ValidationError("calibration: empty reference set");
  Calibration c;
  c.count = similarities.size();
  c.min = similarities.front();
  c.max = similarities.front();
  double sum = 0.0;
  for (double s : similarities) {
    sum += s;
    c.min = std::min(c.min, s);
    c.max = std::max(c.max, s);
  }
  c.mean = sum / static_cast<double>(c.count);
  double var = 0.0;
  for (double s : similarities) var += (s - c.mean) * (s - c.mean);
  c.stddev = std::sqrt(var / static_cast<double>(c.count));
  c.threshold = std::clamp(c.mean - margin, -1.0, 1.0);
  return c;
}

Calibration calibrate_threshold(const Corpus& reference, EmbeddingProvider& provider, double margin,
                                const ScoreOptions& options) {
  if (reference.empty()) throw ValidationError("calibration: empty reference corpus");
  const auto scored = score_pairs(reference, provider, options);
  std::vector<double> sims;
  sims.reserve(scored.size());
  for (const auto& s : scored) sims.push_back(s.similarity);
  return summarize_similarities(sims, margin);
}

void write_scored_pairs(std::span<const ScoredPair> scored, const std::filesystem::path& path, int decimals) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  for (const auto& s : scored) {
    if (s.pair.src.find('\t') != std::string::npos || s.pair.tgt.find('\t') != std::string::npos) {
      throw ValidationError("pair " + std::to_string(s.pair.id) + " contains a tab and cannot be dumped as TSV");
    }
    out << s.pair.id << '\t' << (decimals < 0 ? format_shortest(s.similarity) : format_fixed(s.similarity, decimals)) << '\t' << s.pair.src << '\t' << s.pair.tgt
        << '\n';
  }
  out.flush();
  if (!out) throw IoError(path.string(), "write failure");
}

std::vector<ScoredPair> read_scored_pairs(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<ScoredPair> out;
  out.reserve(lines.size());
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::vector<std::string_view> fields;
    std::string_view rest = lines[n];
    for (int k = 0; k < 3; ++k) {
      const auto tab = rest.find('\t');
      if (tab == std::string_view::npos) throw ParseError(path.string(), n + 1, "expected 4 tab-separated fields");
      fields.push_back(rest.substr(0, tab));
      rest.remove_prefix(tab + 1);
    }
    if (rest.find('\t') != std::string_view::npos) throw ParseError(path.string(), n + 1, "too many fields");
    const auto id = parse_int(fields[0]);
    const auto sim = parse_double(fields[1]);
    if (!id || *id < 0) throw ParseError(path.string(), n + 1, "bad id");
    if (!sim || !(*sim >= -1.0 && *sim <= 1.0)) throw ParseError(path.string(), n + 1, "similarity outside [-1,1]");
    out.push_back(ScoredPair{
        SentencePair{static_cast<std::size_t>(*id), std::string(fields[2]), std::string(rest)}, *sim});
  }
  return out;
}

std::vector<std::size_t> similarity_histogram(std::span<const ScoredPair> scored, std::size_t bins) {
  std::vector<std::size_t> hist(bins, 0);
  if (bins == 0) return hist;
  for (const auto& s : scored) {
    const double pos = (std::clamp(s.similarity, -1.0, 1.0) + 1.0) / 2.0 * static_cast<double>(bins);
    const auto bin = std::min(bins - 1, static_cast<std::size_t>(pos));
    ++hist[bin];
  }
  return hist;
}

}  // namespace bitext
