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

#ifndef BITEXT_PIPELINE_HPP
#define BITEXT_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bitext/alignment.hpp"
#include "bitext/config.hpp"
#include "bitext/corpus.hpp"
#include "bitext/embedding.hpp"
#include "bitext/lexical_table.hpp"
#include "bitext/phrase_table.hpp"

namespace bitext {

/// Reads one manifest entry (TSV or src/tgt pair), then normalizes and
/// deduplicates as requested. The weight is carried, not applied.
/// `raw_pairs` receives the pair count as read.
Corpus load_source(const CorpusSource& source, bool normalize, bool dedup, std::size_t* raw_pairs = nullptr);

/// All manifest entries of `role`, weighted and concatenated in manifest
/// order. Empty corpus when there are none.
Corpus load_role(const PipelineConfig& config, CorpusRole role, std::size_t* raw_pairs = nullptr);

/// Builds the configured provider. With `normalize`, registered mock pairs
/// get the same text normalization as the corpora.
std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& config, bool normalize);

/// Content-addressed store for intermediate artifacts. Disabled when the
/// directory is empty. Files are written to a temporary name and renamed.
class StageCache {
 public:
  explicit StageCache(std::filesystem::path dir = {});

  bool enabled() const { return !dir_.empty(); }
  std::filesystem::path slot(const std::string& kind, std::uint64_t key) const;
  bool has(const std::string& kind, std::uint64_t key) const;
  /// Calls `write(tmp_path)` and renames the result into place. Failures
  /// to cache are swallowed: the cache is an optimization.
  template <typename Writer>
  void store(const std::string& kind, std::uint64_t key, Writer&& write) const {
    if (!enabled()) return;
    const auto final_path = slot(kind, key);
    auto tmp = final_path;
    tmp += ".tmp";
    try {
      std::filesystem::create_directories(dir_);
      write(tmp);
      std::filesystem::rename(tmp, final_path);
    } catch (const std::exception&) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
    }
  }

 private:
  std::filesystem::path dir_;
};

/// Digest of a corpus' content (texts in order; ids and name excluded).
std::uint64_t corpus_digest(const Corpus& corpus);

/// score_pairs, reusing cached similarities keyed by provider fingerprint
/// and corpus content. `hit` reports whether the cache answered.
std::vector<ScoredPair> score_cached(const Corpus& corpus, EmbeddingProvider& provider, const ScoreOptions& options,
                                     const StageCache& cache, bool* hit = nullptr);

struct PhraseMiningOptions {
  unsigned em_iterations = 5;
  bool use_null = true;
  Symmetrization symmetrization = Symmetrization::grow_diag_final_and;
  std::size_t max_len = kDefaultMaxPhraseLength;
  PhraseScoreWeights weights{.threshold = 0.95};
  unsigned workers = 1;
};

struct PhraseMiningResult {
  LexicalTable lex_fwd{Direction::src_to_tgt};
  LexicalTable lex_rev{Direction::tgt_to_src};
  std::vector<AlignmentMatrix> alignments;  // symmetrized, (src, tgt)
  std::vector<PhraseTableEntry> table;
  std::size_t above_threshold = 0;
  std::vector<PhraseTableEntry> selected;   // score_filter, then longest_unique
  bool lex_cached = false;
  bool table_cached = false;
};

/// Word-aligns both directions (IBM Model 1 + Viterbi), symmetrizes, builds
/// and scores the phrase table and keeps the longest unique survivors.
PhraseMiningResult mine_phrases(const Corpus& corpus, const PhraseMiningOptions& options,
                                const StageCache& cache = StageCache());

/// Symmetrized Viterbi alignments of every pair, computed in parallel.
std::vector<AlignmentMatrix> align_corpus(const Corpus& corpus, const LexicalTable& lex_fwd,
                                          const LexicalTable& lex_rev, bool use_null, Symmetrization heuristic,
                                          unsigned workers);

struct StageRecord {
  std::string name;
  std::size_t input = 0;
  std::size_t output = 0;
};

struct RunReport {
  std::string recipe;
  std::string provider;  // fingerprint, empty when unused
  double tau_sentence = 0.0;
  double tau_phrase_score = 0.0;
  double tau_phrase_labse = 0.0;
  std::vector<StageRecord> stages;
  std::vector<std::pair<std::string, std::size_t>> components;  // concatenation order
  std::size_t output_count = 0;
  std::string output_digest;
  std::filesystem::path output_src;
  std::filesystem::path output_tgt;
  std::vector<std::size_t> sentence_histogram;  // 20 bins over [-1,1]
  std::vector<std::size_t> phrase_histogram;
  std::optional<Calibration> calibration;
  // Run-dependent facts, kept apart so the rest is reproducible.
  std::vector<std::pair<std::string, double>> seconds;
  std::vector<std::pair<std::string, std::string>> cache_events;

  /// key=value lines grouped in [sections]; timing last.
  std::string format(bool with_timing = true) const;
};

struct RunResult {
  Corpus output;
  RunReport report;
};

/// Validates, runs the stages the recipe needs, concatenates
/// (parallel, filtered sentences, phrases) and writes the output files when
/// the config names them. `provider` overrides the configured one.
RunResult run_recipe(const PipelineConfig& config, EmbeddingProvider* provider = nullptr);

struct CorpusStats {
  std::string name;
  std::size_t pairs = 0;
  std::size_t src_tokens = 0;
  std::size_t tgt_tokens = 0;
  // Bucket label -> pair count; all empty for an empty corpus.
  std::vector<std::pair<std::string, std::size_t>> src_lengths;
  std::vector<std::pair<std::string, std::size_t>> tgt_lengths;
  std::vector<std::pair<std::string, std::size_t>> length_ratios;  // src/tgt tokens
};

CorpusStats corpus_stats(const Corpus& corpus);
std::string format_stats(const CorpusStats& stats);

}  // namespace bitext

#endif  // BITEXT_PIPELINE_HPP
