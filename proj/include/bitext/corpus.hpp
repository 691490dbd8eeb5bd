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

#ifndef BITEXT_CORPUS_HPP
#define BITEXT_CORPUS_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bitext {

/// One aligned source/target line pair. Neither side contains a line break.
struct SentencePair {
  std::size_t id = 0;
  std::string src;
  std::string tgt;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

/// An ordered, finite sequence of pairs plus the integer repetition factor
/// applied when it is concatenated with other corpora.
struct Corpus {
  std::string name;
  std::vector<SentencePair> pairs;
  unsigned weight = 1;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }

  /// Appends a pair, assigning the next id.
  void add(std::string src, std::string tgt);
};

struct NormalizationRules {
  bool compose = true;             // Unicode NFC
  bool collapse_whitespace = true; // also trims both ends
};

/// Reads two line-aligned UTF-8 files. Lines are split on LF; a single
/// trailing CR per line is dropped. Throws IoError when a file cannot be
/// opened and ParseError on invalid UTF-8 or a line-count mismatch.
Corpus read_parallel(const std::filesystem::path& src_path, const std::filesystem::path& tgt_path);

/// Reads "src<TAB>tgt[<TAB>extra...]" lines.
Corpus read_tsv(const std::filesystem::path& path);

SentencePair normalize(const SentencePair& pair, const NormalizationRules& rules = {});
std::string normalize_text(const std::string& text, const NormalizationRules& rules = {});
Corpus normalize(const Corpus& corpus, const NormalizationRules& rules = {});

/// Drops exact (src, tgt) repeats, keeping first occurrences in order.
/// Surviving pairs keep their ids.
Corpus dedup(const Corpus& corpus);

/// Each corpus repeated `weight` times, in list order; ids reassigned 0..n-1.
/// Throws ValidationError on an empty list or a zero weight.
Corpus concat_weighted(std::span<const Corpus> corpora);

/// Throws ValidationError if a side contains a line break, IoError on write
/// failure.
void write_parallel(const Corpus& corpus, const std::filesystem::path& src_path,
                    const std::filesystem::path& tgt_path);

/// Reads all lines of one UTF-8 text file (same rules as read_parallel).
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_lines(std::span<const std::string> lines, const std::filesystem::path& path);

}  // namespace bitext

#endif  // BITEXT_CORPUS_HPP
