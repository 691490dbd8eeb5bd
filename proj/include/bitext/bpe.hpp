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

#ifndef BITEXT_BPE_HPP
#define BITEXT_BPE_HPP

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bitext {

inline constexpr std::string_view kEndOfWord = "</w>";
inline constexpr std::string_view kContinuation = "@@";
inline constexpr std::size_t kDefaultMerges = 16000;

struct MergeRule {
  std::string left;
  std::string right;

  friend auto operator<=>(const MergeRule&, const MergeRule&) = default;
};

/// Merge rules in learning order. Rank 0 is the first learned merge.
class MergeList {
 public:
  MergeList() = default;
  /// Throws ValidationError on a repeated rule.
  explicit MergeList(std::vector<MergeRule> rules);

  void add(MergeRule rule);
  std::optional<std::size_t> rank(std::string_view left, std::string_view right) const;

  const std::vector<MergeRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

  /// The first `n` rules.
  MergeList prefix(std::size_t n) const;

  friend bool operator==(const MergeList& a, const MergeList& b) { return a.rules_ == b.rules_; }

 private:
  std::vector<MergeRule> rules_;
  std::unordered_map<std::string, std::size_t> ranks_;
};

/// Greedy BPE over whitespace-separated words, each word a sequence of
/// code points followed by a separate end-of-word symbol. Each step merges
/// the most frequent adjacent pair (ties: smaller (left, right) bytewise);
/// learning stops after `n_merges` rules or when no pair occurs twice.
/// Throws ValidationError if the text contains a reserved symbol.
MergeList learn_bpe(std::span<const std::string> lines, std::size_t n_merges);

/// Segments one word into subword units (without continuation markers).
std::vector<std::string> segment_word(std::string_view word, const MergeList& merges);

/// Segments every word of a line; every unit but the last of a word gets the
/// "@@" continuation suffix. Words are re-joined with single spaces.
std::string apply_bpe(std::string_view line, const MergeList& merges);
std::string decode_bpe(std::string_view segmented);

/// First line "#version: 0.2", then one "left right" rule per line.
void write_merges(const MergeList& merges, const std::filesystem::path& path);
MergeList read_merges(const std::filesystem::path& path);

}  // namespace bitext

#endif  // BITEXT_BPE_HPP
