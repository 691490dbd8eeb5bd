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

#include <cmath>
#include <sstream>

#include "../test_util.hpp"
#include "bitext/error.hpp"
#include "bitext/lexical_table.hpp"
#include "bitext/text.hpp"

using namespace bitext;
using bitext::testing::Random;
using bitext::testing::TempDir;

namespace {

Corpus toy_corpus() {
  Corpus c;
  c.add("das haus", "the house");
  c.add("das buch", "the book");
  c.add("ein buch", "a book");
  return c;
}

Corpus random_corpus(std::uint64_t seed, std::size_t n, std::size_t vocab) {
  Random rng(seed);
  Corpus c;
  for (std::size_t k = 0; k < n; ++k) {
    std::string s, t;
    const std::size_t ls = rng.uniform(1, 8), lt = rng.uniform(1, 8);
    for (std::size_t i = 0; i < ls; ++i) s += (i ? " " : "") + rng.vocab_word(vocab);
    for (std::size_t j = 0; j < lt; ++j) t += (j ? " " : "") + std::string("v") + rng.vocab_word(vocab);
    c.add(s, t);
  }
  return c;
}

void check_rows_normalized(const LexicalTable& table) {
  for (const auto& [cond, row] : table.rows()) {
    double total = 0.0;
    for (const auto& [emitted, p] : row) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      total += p;
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
}

void check_non_decreasing(const std::vector<double>& trace) {
  for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] >= trace[k - 1] - 1e-9);
}

}  // namespace

TEST_SUITE("lexical") {
  TEST_CASE("a single pair forces t(x|a) = 1") {
    Corpus c;
    c.add("a", "x");
    const auto r = train_model1(c, Direction::src_to_tgt, {.iterations = 1, .use_null = false});
    CHECK(r.table.prob("a", "x") == 1.0);
    CHECK(r.table.prob("a", "y") == 0.0);
  }

  // Expected values come from tests/oracles/model1_oracle.py, an independent
  // implementation of the same EM updates.
  TEST_CASE("EM on the three-pair toy corpus matches the reference implementation") {
    const auto c = toy_corpus();
    const auto r = train_model1(c, Direction::src_to_tgt, {.iterations = 20, .use_null = false});
    const double the = r.table.prob("das", "the");
    const double house = r.table.prob("das", "house");
    CHECK(the >= 0.9);
    CHECK(the > house);
    CHECK(the == doctest::Approx(0.9999880092588216).epsilon(1e-12));
    CHECK(house == doctest::Approx(9.207163450651914e-06).epsilon(1e-9));
    REQUIRE(r.likelihood.size() == 20);
    CHECK(r.likelihood[0] == doctest::Approx(-5.31235674079074).epsilon(1e-12));
    CHECK(r.likelihood[1] == doctest::Approx(-5.004557063855653).epsilon(1e-12));
    CHECK(r.likelihood[2] == doctest::Approx(-4.746016095194698).epsilon(1e-12));
    CHECK(r.likelihood[19] == doctest::Approx(-4.160883371640737).epsilon(1e-12));
    check_non_decreasing(r.likelihood);
    check_rows_normalized(r.table);
  }

  TEST_CASE("EM with the NULL word matches the reference implementation") {
    const auto c = toy_corpus();
    const auto r = train_model1(c, Direction::src_to_tgt, {.iterations = 20, .use_null = true});
    CHECK(r.table.has_null());
    CHECK(r.table.prob("das", "the") == doctest::Approx(0.9988722825183671).epsilon(1e-12));
    CHECK(r.table.prob("das", "house") == doctest::Approx(0.001126118370004298).epsilon(1e-9));
    CHECK(r.likelihood[0] == doctest::Approx(-6.028094223240389).epsilon(1e-12));
    CHECK(r.likelihood[19] == doctest::Approx(-4.97126935802024).epsilon(1e-12));
    check_non_decreasing(r.likelihood);
  }

  TEST_CASE("reverse direction conditions on target words") {
    const auto r = train_model1(toy_corpus(), Direction::tgt_to_src, {.iterations = 20, .use_null = false});
    CHECK(r.table.direction() == Direction::tgt_to_src);
    CHECK(r.table.prob("the", "das") > 0.9);
    CHECK(reversed(Direction::tgt_to_src) == Direction::src_to_tgt);
  }

  TEST_CASE("distributions normalize after every iteration and the likelihood never decreases") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto c = random_corpus(seed, 100, 25);
      for (bool use_null : {false, true}) {
        for (auto dir : {Direction::src_to_tgt, Direction::tgt_to_src}) {
          unsigned seen = 0;
          const auto r = train_model1(c, dir, {.iterations = 10, .use_null = use_null},
                                      [&](unsigned iteration, const LexicalTable& t) {
                                        CHECK(iteration == ++seen);
                                        check_rows_normalized(t);
                                      });
          CHECK(seen == 10);
          check_non_decreasing(r.likelihood);
        }
      }
    }
    const auto toy = train_model1(toy_corpus(), Direction::src_to_tgt, {.iterations = 20, .use_null = false});
    check_non_decreasing(toy.likelihood);
  }

  TEST_CASE("worker count never changes the trained table") {
    const auto c = random_corpus(9, 5000, 200);
    const auto one = train_model1(c, Direction::src_to_tgt, {.iterations = 3, .use_null = true, .workers = 1});
    const auto many = train_model1(c, Direction::src_to_tgt, {.iterations = 3, .use_null = true, .workers = 8});
    CHECK(one.table == many.table);
    CHECK(one.likelihood == many.likelihood);
    const auto again = train_model1(c, Direction::src_to_tgt, {.iterations = 3, .use_null = true, .workers = 1});
    CHECK(one.table == again.table);
  }

  TEST_CASE("usage errors and skipped pairs") {
    Corpus empty;
    CHECK_THROWS_AS(train_model1(empty, Direction::src_to_tgt, {}), ValidationError);
    Corpus c;
    c.add("a", "x");
    c.add("", "y");
    c.add("b", "   ");
    const auto r = train_model1(c, Direction::src_to_tgt, {.iterations = 1});
    CHECK(r.skipped_pairs == 2);
    CHECK_THROWS_AS(train_model1(c, Direction::src_to_tgt, {.iterations = 0}), ValidationError);
  }

  TEST_CASE("serialization: 10 significant digits, sorted lines") {
    LexicalTable t(Direction::src_to_tgt);
    t.set("b", "y", 1.0 / 3.0);
    t.set("a", "x", 0.5);
    std::ostringstream out;
    write_lexical_table(t, out);
    CHECK(out.str() == "a x 0.5\nb y 0.3333333333\n");

    std::ostringstream exact;
    write_lexical_table(t, exact, true);
    CHECK(exact.str() == "a x 0.5\nb y 0.3333333333333333\n");

    std::istringstream bad("a x\n");
    CHECK_THROWS_AS(read_lexical_table(bad, Direction::src_to_tgt), ParseError);
    std::istringstream out_of_range("a x 1.5\n");
    CHECK_THROWS_AS(read_lexical_table(out_of_range, Direction::src_to_tgt), ParseError);
  }

  TEST_CASE("10K-entry round-trip") {
    Random rng(42);
    LexicalTable printed(Direction::tgt_to_src, true);
    LexicalTable exact(Direction::tgt_to_src, true);
    while (printed.entry_count() < 10000) {
      const std::string cond = rng.coin(0.05) ? std::string(kNullWord) : rng.word(1, 6);
      const std::string emitted = rng.word(1, 6);
      const double p = rng.real(0.0, 1.0);
      // at the format's precision the printed value is the value itself
      printed.set(cond, emitted, *parse_double(format_significant(p, 10)));
      exact.set(cond, emitted, p);
    }
    TempDir dir;
    write_lexical_table(printed, dir / "t2s");
    CHECK(read_lexical_table(dir / "t2s", Direction::tgt_to_src) == printed);
    write_lexical_table(exact, dir / "t2s.exact", true);
    CHECK(read_lexical_table(dir / "t2s.exact", Direction::tgt_to_src) == exact);
  }
}
