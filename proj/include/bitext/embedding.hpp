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

// Cross-lingual embedding similarity: cosine scoring of sentence pairs,
// threshold filtering and threshold calibration on a trusted reference set.
// Embeddings come from an EmbeddingProvider; see providers.hpp.

#ifndef BITEXT_EMBEDDING_HPP
#define BITEXT_EMBEDDING_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bitext/corpus.hpp"

namespace bitext {

using Embedding = std::vector<double>;

/// dot(u, v) / (|u| |v|) clamped to [-1, 1]; 0 when either vector is zero.
/// Throws ValidationError on a dimension mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

/// Scales `v` to unit norm (zero vectors stay zero). Throws ProviderError on
/// NaN or infinite components.
void normalize_embedding(Embedding& v);

enum class ProviderKind { mock, file, service };

/// Source of sentence embeddings. Implementations return one unit-norm (or
/// zero, for empty text) vector per input text, in input order, and map the
/// same text to the same vector for the lifetime of the instance.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual ProviderKind kind() const = 0;
  virtual std::size_t dim() const = 0;
  /// False when the backend can only take one request at a time.
  virtual bool concurrent() const { return true; }
  /// Stable identity used in stage cache keys.
  virtual std::string fingerprint() const = 0;
  virtual std::vector<Embedding> embed(std::span<const std::string> texts) = 0;
};

struct ScoredPair {
  SentencePair pair;
  double similarity = 0.0;

  friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

struct ScoreOptions {
  std::size_t batch_size = 32;
  unsigned workers = 1;
};

/// One ScoredPair per input pair, in input order. Batches of `batch_size`
/// pairs are embedded together; provider failures are rethrown as
/// ProviderError naming the pair-id range of the failed batch.
std::vector<ScoredPair> score_pairs(const Corpus& corpus, EmbeddingProvider& provider, const ScoreOptions& options = {});

/// Pairs with similarity >= threshold, in input order.
Corpus filter_by_threshold(std::span<const ScoredPair> scored, double threshold, std::string name = "filtered");

struct Calibration {
  double threshold = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

/// Summary statistics over precomputed similarities; threshold is
/// mean - margin clamped to [-1, 1]. Throws ValidationError when empty.
Calibration summarize_similarities(std::span<const double> similarities, double margin = 0.0);
Calibration calibrate_threshold(const Corpus& reference, EmbeddingProvider& provider, double margin = 0.0,
                                const ScoreOptions& options = {});

/// "id<TAB>similarity<TAB>src<TAB>tgt" lines, similarity at `decimals`
/// (negative: shortest round-trip form).
void write_scored_pairs(std::span<const ScoredPair> scored, const std::filesystem::path& path, int decimals = 6);
std::vector<ScoredPair> read_scored_pairs(const std::filesystem::path& path);

/// 20-bin histogram over [-1, 1]; a similarity of exactly 1 lands in the
/// last bin.
std::vector<std::size_t> similarity_histogram(std::span<const ScoredPair> scored, std::size_t bins = 20);

}  // namespace bitext

#endif  // BITEXT_EMBEDDING_HPP
