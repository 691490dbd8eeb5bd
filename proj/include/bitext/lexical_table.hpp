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

#ifndef BITEXT_LEXICAL_TABLE_HPP
#define BITEXT_LEXICAL_TABLE_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bitext/corpus.hpp"

namespace bitext {

enum class Direction {
  src_to_tgt,  // t(tgt word | src word)
  tgt_to_src,  // t(src word | tgt word)
};

Direction reversed(Direction d);

/// Reserved conditioning token for the empty word.
inline constexpr std::string_view kNullWord = "NULL";

/// Word-translation probabilities t(emitted | conditioning). Rows are kept in
/// sorted order so iteration (and serialization) is deterministic.
class LexicalTable {
 public:
  using Row = std::map<std::string, double, std::less<>>;
  using Rows = std::map<std::string, Row, std::less<>>;

  explicit LexicalTable(Direction direction = Direction::src_to_tgt, bool has_null = false)
      : direction_(direction), has_null_(has_null) {}

  Direction direction() const { return direction_; }
  bool has_null() const { return has_null_; }

  /// 0 for unseen events.
  double prob(std::string_view conditioning, std::string_view emitted) const;
  void set(std::string_view conditioning, std::string_view emitted, double p);

  const Rows& rows() const { return rows_; }
  std::size_t entry_count() const;

  friend bool operator==(const LexicalTable&, const LexicalTable&) = default;

 private:
  Direction direction_;
  bool has_null_;
  Rows rows_;
};

/// "conditioning emitted probability" lines, probability at 10 significant
/// digits (`exact`: shortest form that parses back bit-identically), lines
/// sorted bytewise.
void write_lexical_table(const LexicalTable& table, std::ostream& out, bool exact = false);
void write_lexical_table(const LexicalTable& table, const std::filesystem::path& path, bool exact = false);
LexicalTable read_lexical_table(std::istream& in, Direction direction, const std::string& source = "<stream>");
LexicalTable read_lexical_table(const std::filesystem::path& path, Direction direction);

struct Model1Options {
  unsigned iterations = 5;
  bool use_null = false;
  unsigned workers = 1;
};

struct Model1Result {
  LexicalTable table;
  // Corpus log-likelihood after each iteration's update.
  std::vector<double> likelihood;
  // Pairs skipped because one side had no tokens.
  std::size_t skipped_pairs = 0;
};

/// IBM Model 1 EM. Initialization is uniform over the emitted words that
/// co-occur with each conditioning word. The E-step runs over fixed-size
/// corpus chunks whose partial counts are merged in chunk order, so the
/// result is bit-identical for every worker count.
///
/// `on_iteration`, when set, is called after each M-step with the 1-based
/// iteration number and the current table.
Model1Result train_model1(const Corpus& corpus, Direction direction, const Model1Options& options,
                          const std::function<void(unsigned, const LexicalTable&)>& on_iteration = {});

}  // namespace bitext

#endif  // BITEXT_LEXICAL_TABLE_HPP
