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


#include <doctest.h>

#include "../test_util.hpp"
#include "bitext/bpe.hpp"
#include "bitext/error.hpp"
#include "bitext/text.hpp"

using namespace bitext;
using bitext::testing::Random;
using bitext::testing::TempDir;

namespace {

std::vector<std::string> classic_corpus() {
  std::vector<std::string> lines;
  for (int k = 0; k < 5; ++k) lines.emplace_back("low");
  for (int k = 0; k < 2; ++k) lines.emplace_back("lower");
  for (int k = 0; k < 6; ++k) lines.emplace_back("newest");
  for (int k = 0; k < 3; ++k) lines.emplace_back("widest");
  return lines;
}

std::vector<std::string> random_lines(std::uint64_t seed, std::size_t n) {
  Random rng(seed);
  std::vector<std::string> lines;
  for (std::size_t k = 0; k < n; ++k) lines.push_back(rng.sentence(0, 10));
  return lines;
}

}  // namespace

TEST_SUITE("bpe") {
  TEST_CASE("first merges on the low/lower/newest/widest vocabulary") {
    const auto merges = learn_bpe(classic_corpus(), 10);
    REQUIRE(merges.size() >= 2);
    CHECK(merges.rules()[0] == MergeRule{"e", "s"});
    CHECK(merges.rules()[1] == MergeRule{"es", "t"});
    CHECK(merges.rules()[2] == MergeRule{"est", "</w>"});
    CHECK(learn_bpe(classic_corpus(), 10) == merges);  // deterministic
  }

  TEST_CASE("learning stops when no pair occurs twice") {
    const std::vector<std::string> lines = {"ab"};
    CHECK(learn_bpe(lines, 100).empty());
    const std::vector<std::string> twice = {"ab ab"};
    const auto m = learn_bpe(twice, 100);
    CHECK(m.size() == 2);  // a b, then ab </w>
  }

  TEST_CASE("zero merges segment into characters") {
    const MergeList none = learn_bpe(classic_corpus(), 0);
    CHECK(none.empty());
    CHECK(apply_bpe("ab", none) == "a@@ b");
    CHECK(apply_bpe("नम", none) == "न@@ म");
    CHECK(apply_bpe("", none) == "");
  }

  TEST_CASE("a word seen during learning becomes one token") {
    const std::vector<std::string> lines = {"translation translation translation"};
    const auto merges = learn_bpe(lines, 100);
    CHECK(apply_bpe("translation", merges) == "translation");
    CHECK(apply_bpe("translations", merges) != "translations");
    CHECK(segment_word("translation", merges) == std::vector<std::string>{"translation"});
  }

  TEST_CASE("reserved symbols are rejected") {
    const std::vector<std::string> bad = {"a@@b"};
    CHECK_THROWS_AS(learn_bpe(bad, 10), ValidationError);
    const std::vector<std::string> eow = {"x</w>"};
    CHECK_THROWS_AS(learn_bpe(eow, 10), ValidationError);
    CHECK_THROWS_AS(apply_bpe("a@@", MergeList{}), ValidationError);
  }

  TEST_CASE("merge lists reject duplicate rules") {
    MergeList m;
    m.add({"a", "b"});
    CHECK_THROWS_AS(m.add({"a", "b"}), ValidationError);
    CHECK(m.rank("a", "b") == 0);
    CHECK_FALSE(m.rank("b", "a").has_value());
  }

  TEST_CASE("decode undoes apply on 10K random strings") {
    const auto train = random_lines(1, 2000);
    const auto merges = learn_bpe(train, 500);
    CHECK(merges.size() == 500);
    const auto probe = random_lines(2, 10000);
    std::size_t failures = 0;
    for (const auto& s : probe) {
      if (decode_bpe(apply_bpe(s, merges)) != s) ++failures;
      if (decode_bpe(apply_bpe(s, MergeList{})) != s) ++failures;
    }
    CHECK(failures == 0);
    CHECK(decode_bpe("a@@ b c@@") == "ab c");
  }

  TEST_CASE("more merges never produce more tokens") {
    const auto merges = learn_bpe(random_lines(3, 1000), 300);
    Random rng(4);
    std::vector<std::string> probe;
    for (int k = 0; k < 60; ++k) probe.push_back(rng.word(1, 12));
    std::vector<std::size_t> previous(probe.size(), SIZE_MAX);
    for (std::size_t n = 0; n <= merges.size(); n += 5) {
      const auto prefix = merges.prefix(n);
      for (std::size_t k = 0; k < probe.size(); ++k) {
        const auto tokens = segment_word(probe[k], prefix).size();
        CHECK(tokens <= previous[k]);
        previous[k] = tokens;
      }
    }
  }

  TEST_CASE("16000 merge operations are accepted") {
    CHECK(kDefaultMerges == 16000);
    const auto lines = random_lines(5, 3000);
    const auto merges = learn_bpe(lines, kDefaultMerges);
    CHECK(merges.size() <= kDefaultMerges);
    CHECK(merges.size() > 1000);
    CHECK(learn_bpe(lines, kDefaultMerges) == merges);
    for (const auto& s : random_lines(6, 200)) CHECK(decode_bpe(apply_bpe(s, merges)) == s);
  }

  TEST_CASE("merge file layout and 10K-rule round-trip") {
    TempDir dir;
    write_merges(learn_bpe(classic_corpus(), 2), dir / "codes");
    CHECK(testing::read_file(dir / "codes") == "#version: 0.2\ne s\nes t\n");

    Random rng(8);
    MergeList m;
    while (m.size() < 10000) {
      MergeRule r{rng.word(1, 4), rng.word(1, 4)};
      if (rng.coin(0.2)) r.right += std::string(kEndOfWord);
      if (!m.rank(r.left, r.right)) m.add(std::move(r));
    }
    write_merges(m, dir / "big");
    CHECK(read_merges(dir / "big") == m);

    testing::write_file(dir / "bad", "#version: 0.2\na b\nc\n");
    try {
      read_merges(dir / "bad");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    testing::write_file(dir / "dup", "a b\na b\n");
    CHECK_THROWS_AS(read_merges(dir / "dup"), ParseError);
  }
}
