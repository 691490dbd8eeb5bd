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
#include <limits>

#include "bitext/text.hpp"

using namespace bitext;

TEST_SUITE("text") {
  TEST_CASE("fnv1a64 matches the published offset basis and test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
    CHECK(hex64(1) == "0000000000000001");
  }

  TEST_CASE("invalid UTF-8 is located by byte offset") {
    CHECK_FALSE(find_invalid_utf8("plain ascii").has_value());
    CHECK_FALSE(find_invalid_utf8("नमस्ते école").has_value());
    CHECK(find_invalid_utf8("ab\xff").value() == 2);
    CHECK(find_invalid_utf8("\xc3").value() == 0);           // truncated sequence
    CHECK(find_invalid_utf8("x\xc0\xaf").value() == 1);       // overlong encoding
    CHECK(find_invalid_utf8("\xed\xa0\x80").value() == 0);    // surrogate
  }

  TEST_CASE("NFC composition") {
    CHECK(compose_nfc("e\xcc\x81") == "\xc3\xa9");  // e + combining acute -> é
    CHECK(compose_nfc("\xc3\xa9") == "\xc3\xa9");
    CHECK(compose_nfc("A\xcc\x8a") == "\xc3\x85");  // A + ring -> Å
    CHECK(compose_nfc("") == "");
    // Devanagari already in NFC stays put
    CHECK(compose_nfc("नमस्ते") == "नमस्ते");
  }

  TEST_CASE("whitespace collapse and tokenization") {
    CHECK(collapse_whitespace("  a  b ") == "a b");
    CHECK(collapse_whitespace("\ta\t\tb\n") == "a b");
    CHECK(collapse_whitespace("") == "");
    CHECK(tokenize(" a  b c ") == std::vector<std::string>{"a", "b", "c"});
    CHECK(tokenize("   ").empty());
    const std::vector<std::string> tokens = {"x", "y"};
    CHECK(join(tokens) == "x y");
    CHECK(join(tokens, "|") == "x|y");
  }

  TEST_CASE("count formatting follows the K/M convention of the corpus statistics table") {
    CHECK(format_count(604000) == "604K");
    CHECK(format_count(248000) == "248K");
    CHECK(format_count(123000) == "123K");
    CHECK(format_count(1980000) == "1.98M");
    CHECK(format_count(3280000) == "3.28M");
    CHECK(format_count(1020000) == "1.02M");
    CHECK(format_count(960000) == "960K");
    CHECK(format_count(2600000) == "2.6M");
    CHECK(format_count(350000) == "350K");
    CHECK(format_count(166000) == "166K");
    CHECK(format_count(0) == "0");
    CHECK(format_count(999) == "999");
    CHECK(format_count(1000) == "1K");
    CHECK(format_count(1500) == "1.5K");
    CHECK(format_count(999999) == "1M");
    CHECK(format_count(2000000000) == "2B");
  }

  TEST_CASE("number formatting") {
    CHECK(format_fixed(1.0, 6) == "1.000000");
    CHECK(format_fixed(0.8888888, 6) == "0.888889");
    CHECK(format_significant(0.123456789012345, 10) == "0.123456789");
    CHECK(format_shortest(0.1) == "0.1");
    for (double x : {0.1, 1.0 / 3.0, 9.207163450651914e-06, 1e-300, 0.9999880092588216}) {
      CHECK(parse_double(format_shortest(x)).value() == x);
    }
    CHECK(parse_double("1.5").value() == 1.5);
    CHECK_FALSE(parse_double("1.5x").has_value());
    CHECK_FALSE(parse_double("").has_value());
    CHECK(parse_int("-42").value() == -42);
    CHECK_FALSE(parse_int("4.2").has_value());
  }

  TEST_CASE("line break detection") {
    CHECK(contains_line_break("a\nb"));
    CHECK(contains_line_break("a\rb"));
    CHECK_FALSE(contains_line_break("a\tb"));
  }
}
