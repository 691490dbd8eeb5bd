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

#include "bitext/corpus.hpp"

#include <fstream>
#include <string_view>
#include <unordered_set>

#include "bitext/error.hpp"
#include "bitext/text.hpp"

namespace bitext {

namespace fs = std::filesystem;

void Corpus::add(std::string src, std::string tgt) {
  pairs.push_back(SentencePair{pairs.size(), std::move(src), std::move(tgt)});
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto bad = find_invalid_utf8(line)) {
      throw ParseError(path.string(), lines.size() + 1,
                       "invalid UTF-8 at byte " + std::to_string(*bad));
    }
    if (line.find('\r') != std::string::npos) {
      throw ParseError(path.string(), lines.size() + 1, "embedded carriage return");
    }
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw IoError(path.string(), "read failure");
  return lines;
}

void write_lines(std::span<const std::string> lines, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  for (const auto& line : lines) {
    if (contains_line_break(line)) throw ValidationError("line break inside record written to " + path.string());
    out << line << '\n';
  }
  out.flush();
  if (!out) throw IoError(path.string(), "write failure");
}

Corpus read_parallel(const fs::path& src_path, const fs::path& tgt_path) {
  auto src = read_lines(src_path);
  auto tgt = read_lines(tgt_path);
  if (src.size() != tgt.size()) {
    throw ParseError(src_path.string() + " / " + tgt_path.string(), 0,
                     "line count mismatch: " + std::to_string(src.size()) + " vs " +
                         std::to_string(tgt.size()));
  }
  Corpus corpus;
  corpus.name = src_path.stem().string();
  corpus.pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) corpus.add(std::move(src[i]), std::move(tgt[i]));
  return corpus;
}

Corpus read_tsv(const fs::path& path) {
  const auto lines = read_lines(path);
  Corpus corpus;
  corpus.name = path.stem().string();
  corpus.pairs.reserve(lines.size());
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = lines[n];
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(path.string(), n + 1, "expected at least 2 tab-separated fields");
    const auto rest = line.substr(tab + 1);
    const auto tab2 = rest.find('\t');
    corpus.add(std::string(line.substr(0, tab)), std::string(rest.substr(0, tab2)));
  }
  return corpus;
}

std::string normalize_text(const std::string& text, const NormalizationRules& rules) {
  std::string out = rules.compose ? compose_nfc(text) : text;
  if (rules.collapse_whitespace) out = collapse_whitespace(out);
  return out;
}

SentencePair normalize(const SentencePair& pair, const NormalizationRules& rules) {
  return SentencePair{pair.id, normalize_text(pair.src, rules), normalize_text(pair.tgt, rules)};
}

Corpus normalize(const Corpus& corpus, const NormalizationRules& rules) {
  Corpus out{corpus.name, {}, corpus.weight};
  out.pairs.reserve(corpus.size());
  for (const auto& p : corpus.pairs) out.pairs.push_back(normalize(p, rules));
  return out;
}

Corpus dedup(const Corpus& corpus) {
  struct KeyHash {
    std::size_t operator()(const std::pair<std::string_view, std::string_view>& k) const {
      return fnv1a64(k.second, fnv1a64(k.first) ^ 0x9e3779b97f4a7c15ULL);
    }
  };
  std::unordered_set<std::pair<std::string_view, std::string_view>, KeyHash> seen;
  seen.reserve(corpus.size());
  Corpus out{corpus.name, {}, corpus.weight};
  for (const auto& p : corpus.pairs) {
    if (seen.emplace(p.src, p.tgt).second) out.pairs.push_back(p);
  }
  return out;
}

Corpus concat_weighted(std::span<const Corpus> corpora) {
  if (corpora.empty()) throw ValidationError("concat_weighted: empty corpus list");
  Corpus out;
  std::size_t total = 0;
  for (const auto& c : corpora) {
    if (c.weight < 1) throw ValidationError("corpus '" + c.name + "' has weight 0");
    total += c.weight * c.size();
    if (!out.name.empty()) out.name += "+";
    out.name += c.name;
  }
  out.pairs.reserve(total);
  for (const auto& c : corpora) {
    for (unsigned r = 0; r < c.weight; ++r) {
      for (const auto& p : c.pairs) out.add(p.src, p.tgt);
    }
  }
  return out;
}

void write_parallel(const Corpus& corpus, const fs::path& src_path, const fs::path& tgt_path) {
  std::ofstream src(src_path, std::ios::binary | std::ios::trunc);
  if (!src) throw IoError(src_path.string(), "cannot open for writing");
  std::ofstream tgt(tgt_path, std::ios::binary | std::ios::trunc);
  if (!tgt) throw IoError(tgt_path.string(), "cannot open for writing");
  for (const auto& p : corpus.pairs) {
    if (contains_line_break(p.src) || contains_line_break(p.tgt)) {
      throw ValidationError("pair " + std::to_string(p.id) + " contains a line break");
    }
    src << p.src << '\n';
    tgt << p.tgt << '\n';
  }
  src.flush();
  tgt.flush();
  if (!src) throw IoError(src_path.string(), "write failure");
  if (!tgt) throw IoError(tgt_path.string(), "write failure");
}

}  // namespace bitext
