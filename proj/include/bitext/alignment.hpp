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

#ifndef BITEXT_ALIGNMENT_HPP
#define BITEXT_ALIGNMENT_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/lexical_table.hpp"

namespace bitext {

struct Link {
  std::uint32_t src = 0;
  std::uint32_t tgt = 0;

  friend auto operator<=>(const Link&, const Link&) = default;
};

/// A set of word links over a src_len x tgt_len grid. Links are kept sorted
/// by (src, tgt) without duplicates.
class AlignmentMatrix {
 public:
  AlignmentMatrix() = default;
  /// Throws ValidationError when a link falls outside the grid.
  AlignmentMatrix(std::size_t src_len, std::size_t tgt_len, std::vector<Link> links = {});

  std::size_t src_len() const { return src_len_; }
  std::size_t tgt_len() const { return tgt_len_; }
  const std::vector<Link>& links() const { return links_; }
  bool empty() const { return links_.empty(); }
  std::size_t size() const { return links_.size(); }

  bool contains(std::size_t i, std::size_t j) const;
  /// Returns false if the link was already present.
  bool add(std::size_t i, std::size_t j);
  AlignmentMatrix transposed() const;

  friend bool operator==(const AlignmentMatrix&, const AlignmentMatrix&) = default;

 private:
  std::size_t src_len_ = 0;
  std::size_t tgt_len_ = 0;
  std::vector<Link> links_;
};

/// "i-j i-j ..." with links in sorted order.
std::string to_pharaoh(const AlignmentMatrix& alignment);
/// Throws ValidationError on malformed or out-of-range links.
AlignmentMatrix parse_pharaoh(std::string_view text, std::size_t src_len, std::size_t tgt_len);

/// One Pharaoh line per corpus pair, dimensions taken from the tokenized pair.
std::vector<AlignmentMatrix> read_alignments(const std::filesystem::path& path, const Corpus& corpus);
void write_alignments(const std::vector<AlignmentMatrix>& alignments, const std::filesystem::path& path);

struct ViterbiOptions {
  bool use_null = true;
  double floor = 1e-12;  // probability of unseen (conditioning, emitted) events
};

/// Links each emitted word to its most probable conditioning word. The result
/// is oriented (conditioning index, emitted index): for a src_to_tgt table
/// that is (src, tgt); for tgt_to_src it is (tgt, src). Ties go to the lowest
/// conditioning index. With use_null, a word stays unlinked when
/// t(word | NULL) strictly beats every real candidate; out-of-vocabulary
/// words then stay unlinked too.
AlignmentMatrix viterbi_align(const SentencePair& pair, const LexicalTable& table, const ViterbiOptions& options = {});

enum class Symmetrization { intersection, union_, grow_diag_final_and };

Symmetrization parse_symmetrization(std::string_view name);
std::string_view to_string(Symmetrization heuristic);

/// Combines a (src, tgt) forward alignment with a (tgt, src) reverse
/// alignment. The reverse matrix is transposed before combining; mismatched
/// dimensions throw ValidationError.
AlignmentMatrix symmetrize(const AlignmentMatrix& forward, const AlignmentMatrix& reverse, Symmetrization heuristic);

}  // namespace bitext

#endif  // BITEXT_ALIGNMENT_HPP
