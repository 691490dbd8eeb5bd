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


// Helpers shared by the unit and acceptance tests: scratch directories,
// seeded random data and small file utilities.

#ifndef BITEXT_TESTS_TEST_UTIL_HPP
#define BITEXT_TESTS_TEST_UTIL_HPP

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bitext/corpus.hpp"

namespace bitext::testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "bitext-test-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Seeded generator for reproducible random inputs.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  std::mt19937_64& engine() { return engine_; }

  // A word over a mixed-script alphabet (ASCII, Latin-1, Devanagari, CJK);
  // every symbol is already in NFC.
  std::string word(std::size_t min_len = 1, std::size_t max_len = 8) {
    static const std::vector<std::string> alphabet = {
        "a", "b", "c", "d", "e", "k", "m", "n", "o", "r", "s", "t", "x", "z", "é", "ü", "ß", "ñ",
        "क", "म", "र", "स", "ह", "न", "ा", "ि", "中", "文", "日", "本", "Ω", "ж", "9", "'", "-"};
    const std::size_t n = uniform(min_len, max_len);
    std::string w;
    for (std::size_t k = 0; k < n; ++k) w += alphabet[uniform(0, alphabet.size() - 1)];
    return w;
  }

  // A word from a small vocabulary, so that words repeat across sentences.
  std::string vocab_word(std::size_t vocab_size) { return "w" + std::to_string(uniform(0, vocab_size - 1)); }

  std::string sentence(std::size_t min_words, std::size_t max_words) {
    const std::size_t n = uniform(min_words, max_words);
    std::string s;
    for (std::size_t k = 0; k < n; ++k) s += (k ? " " : "") + word();
    return s;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bitext::testing

#endif  // BITEXT_TESTS_TEST_UTIL_HPP
