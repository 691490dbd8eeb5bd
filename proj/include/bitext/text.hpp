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

// Small text helpers shared by every module: UTF-8 checks, Unicode
// composition, whitespace handling, hashing and number formatting.

#ifndef BITEXT_TEXT_HPP
#define BITEXT_TEXT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bitext {

// Byte offset of the first invalid UTF-8 sequence, or nullopt when valid.
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

// Unicode canonical composition (NFC). Input must be valid UTF-8.
std::string compose_nfc(std::string_view text);

// Collapses interior whitespace runs to one ASCII space and trims both ends.
// Whitespace is the Unicode White_Space property.
std::string collapse_whitespace(std::string_view text);

// Splits on ASCII blanks (space, tab). Empty tokens are never produced.
std::vector<std::string> tokenize(std::string_view text);
std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

// printf-style fixed and significant-digit formatting.
std::string format_fixed(double value, int decimals);
std::string format_significant(double value, int digits);
// Shortest representation that parses back to the identical double.
std::string format_shortest(double value);
// Human-readable count: 3 significant digits with a K/M/B suffix, trailing
// zeros dropped (604000 -> "604K", 1980000 -> "1.98M"); below 1000 verbatim.
std::string format_count(std::uint64_t n);

// Strict parsers; return nullopt unless the whole string is consumed.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

bool contains_line_break(std::string_view text);

}  // namespace bitext

#endif  // BITEXT_TEXT_HPP
