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

// Phrase-pair mining: consistent phrase extraction from word-aligned pairs,
// relative-frequency and lexical scoring, weighted-average filtering, and
// the longest-unique selection over a whole table.

#ifndef BITEXT_PHRASE_TABLE_HPP
#define BITEXT_PHRASE_TABLE_HPP

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bitext/alignment.hpp"
#include "bitext/corpus.hpp"
#include "bitext/lexical_table.hpp"

namespace bitext {

inline constexpr std::size_t kDefaultMaxPhraseLength = 7;

/// Half-open token spans [src_begin, src_end) x [tgt_begin, tgt_end).
struct PhraseSpan {
  std::uint32_t src_begin = 0;
  std::uint32_t src_end = 0;
  std::uint32_t tgt_begin = 0;
  std::uint32_t tgt_end = 0;

  friend auto operator<=>(const PhraseSpan&, const PhraseSpan&) = default;
};

/// All span pairs that are consistent with `alignment`:
///  - at least one link lies inside,
///  - every link touching either span lands inside the other,
///  - the first and last word of both spans is aligned (no expansion over
///    unaligned boundary words),
///  - both spans are at most max_len long.
/// Output is sorted. Throws ValidationError when the alignment grid does not
/// match the tokenized pair.
std::vector<PhraseSpan> extract_phrases(const SentencePair& pair, const AlignmentMatrix& alignment,
                                        std::size_t max_len);
std::vector<PhraseSpan> extract_phrases(const AlignmentMatrix& alignment, std::size_t max_len);

struct PhraseTableEntry {
  std::vector<std::string> src;
  std::vector<std::string> tgt;
  double phi_ts = 0.0;  // phi(tgt | src)
  double phi_st = 0.0;  // phi(src | tgt)
  double lex_ts = 0.0;  // lex(tgt | src)
  double lex_st = 0.0;  // lex(src | tgt)
  std::uint64_t joint_count = 1;
  AlignmentMatrix alignment;  // within-phrase, (src, tgt)

  friend bool operator==(const PhraseTableEntry&, const PhraseTableEntry&) = default;
};

/// lex(emitted | conditioning) = prod_j avg_{i linked to j} t(e_j | c_i),
/// with t(e_j | NULL) for unlinked e_j. `direction` selects the emitted
/// side: src_to_tgt scores the target phrase given the source phrase, using
/// the (src, tgt) alignment as-is; tgt_to_src scores the source phrase.
/// Unseen events score `floor`. The result is clamped to [0, 1].
double lexical_weight(std::span<const std::string> src_phrase, std::span<const std::string> tgt_phrase,
                      const AlignmentMatrix& alignment, const LexicalTable& lex, Direction direction,
                      double floor = 1e-12);

struct PhraseTableOptions {
  std::size_t max_len = kDefaultMaxPhraseLength;
  double floor = 1e-12;
  unsigned workers = 1;
};

/// Builds the scored phrase table, one entry per distinct (src, tgt) phrase
/// pair, sorted by (src, tgt). Each entry carries the alignment of its first
/// occurrence in corpus order.
std::vector<PhraseTableEntry> build_phrase_table(const Corpus& corpus, std::span<const AlignmentMatrix> alignments,
                                                 const LexicalTable& lex_fwd, const LexicalTable& lex_rev,
                                                 const PhraseTableOptions& options = {});

struct PhraseScoreWeights {
  double phi_ts = 1.0;
  double phi_st = 1.0;
  double lex_ts = 1.0;
  double lex_st = 1.0;
  double threshold = 0.0;

  /// Throws ValidationError on negative or all-zero weights, or a threshold
  /// outside [0, 1].
  void validate() const;
  double score(const PhraseTableEntry& entry) const;
};

/// Keeps entries whose weighted average is >= threshold, in input order.
std::vector<PhraseTableEntry> score_filter(std::span<const PhraseTableEntry> entries,
                                           const PhraseScoreWeights& weights);

/// True when `outer` != `inner` and both of outer's phrases contain the
/// corresponding phrase of `inner` as a contiguous token run.
bool dominates(const PhraseTableEntry& outer, const PhraseTableEntry& inner);

/// Drops repeated (src, tgt) phrase pairs (first kept), then every entry
/// dominated by another entry of the table. Input order is preserved.
std::vector<PhraseTableEntry> longest_unique(std::span<const PhraseTableEntry> entries);

/// Phrase pairs as a corpus of joined token strings.
Corpus to_corpus(std::span<const PhraseTableEntry> entries, std::string name = "phrases");

/// "src ||| tgt ||| phi_ts lex_ts phi_st lex_st ||| i-j ... ||| count",
/// probabilities with 6 decimals (`exact`: shortest form that parses back
/// bit-identically).
std::string format_phrase_entry(const PhraseTableEntry& entry, bool exact = false);
/// Throws ValidationError describing the problem.
PhraseTableEntry parse_phrase_entry(std::string_view line);

void write_phrase_table(std::span<const PhraseTableEntry> entries, std::ostream& out, bool exact = false);
void write_phrase_table(std::span<const PhraseTableEntry> entries, const std::filesystem::path& path,
                        bool exact = false);
std::vector<PhraseTableEntry> read_phrase_table(std::istream& in, const std::string& source = "<stream>");
std::vector<PhraseTableEntry> read_phrase_table(const std::filesystem::path& path);

}  // namespace bitext

#endif  // BITEXT_PHRASE_TABLE_HPP
