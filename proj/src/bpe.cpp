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

#include "bitext/bpe.hpp"

#include <unicode/utf8.h>

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include "bitext/corpus.hpp"
#include "bitext/error.hpp"
#include "bitext/text.hpp"

namespace bitext {

namespace {

std::string rule_key(std::string_view left, std::string_view right) {
  std::string k;
  k.reserve(left.size() + right.size() + 1);
  k.append(left);
  k.push_back(' ');
  k.append(right);
  return k;
}

std::vector<std::string> code_points(std::string_view word) {
  std::vector<std::string> out;
  const auto* s = reinterpret_cast<const std::uint8_t*>(word.data());
  const auto length = static_cast<std::int32_t>(word.size());
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.emplace_back(word.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(i - start)));
  }
  return out;
}

void check_reserved(std::string_view text) {
  if (text.find(kContinuation) != std::string_view::npos || text.find(kEndOfWord) != std::string_view::npos) {
    throw ValidationError("text contains a reserved subword symbol ('@@' or '</w>'): " + std::string(text.substr(0, 80)));
  }
}

}  // namespace

MergeList::MergeList(std::vector<MergeRule> rules) {
  for (auto& r : rules) add(std::move(r));
}

void MergeList::add(MergeRule rule) {
  auto key = rule_key(rule.left, rule.right);
  if (!ranks_.emplace(std::move(key), rules_.size()).second) {
    throw ValidationError("duplicate merge rule '" + rule.left + " " + rule.right + "'");
  }
  rules_.push_back(std::move(rule));
}

std::optional<std::size_t> MergeList::rank(std::string_view left, std::string_view right) const {
  const auto it = ranks_.find(rule_key(left, right));
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

MergeList MergeList::prefix(std::size_t n) const {
  MergeList out;
  for (std::size_t k = 0; k < n && k < rules_.size(); ++k) out.add(rules_[k]);
  return out;
}

MergeList learn_bpe(std::span<const std::string> lines, std::size_t n_merges) {
  std::map<std::string, long long> word_counts;
  for (const auto& line : lines) {
    check_reserved(line);
    for (auto& w : tokenize(line)) ++word_counts[std::move(w)];
  }

  std::vector<std::string> names;
  std::unordered_map<std::string, int> ids;
  auto intern = [&](const std::string& s) {
    const auto [it, inserted] = ids.emplace(s, static_cast<int>(names.size()));
    if (inserted) names.push_back(s);
    return it->second;
  };

  struct Word {
    std::vector<int> symbols;
    long long freq;
  };
  std::vector<Word> words;
  words.reserve(word_counts.size());
  const int eow = intern(std::string(kEndOfWord));
  for (const auto& [w, freq] : word_counts) {
    Word word{{}, freq};
    for (const auto& cp : code_points(w)) word.symbols.push_back(intern(cp));
    word.symbols.push_back(eow);
    words.push_back(std::move(word));
  }

  auto pair_key = [](int l, int r) { return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(l)) << 32) | static_cast<std::uint32_t>(r); };

  // Highest count first, then the bytewise-smaller (left, right).
  struct Candidate {
    long long count;
    int left;
    int right;
  };
  auto better = [&names](const Candidate& a, const Candidate& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.left != b.left) {
      if (const int c = names[a.left].compare(names[b.left]); c != 0) return c < 0;
    }
    if (a.right != b.right) return names[a.right] < names[b.right];
    return false;
  };
  std::set<Candidate, decltype(better)> queue(better);
  std::unordered_map<std::uint64_t, long long> counts;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> where;

  auto adjust = [&](int l, int r, long long delta) {
    const auto key = pair_key(l, r);
    auto& c = counts[key];
    if (c > 0) queue.erase(Candidate{c, l, r});
    c += delta;
    if (c > 0) queue.insert(Candidate{c, l, r});
  };

  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto& s = words[w].symbols;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
      adjust(s[k], s[k + 1], words[w].freq);
      auto& list = where[pair_key(s[k], s[k + 1])];
      if (list.empty() || list.back() != w) list.push_back(w);
    }
  }

  MergeList merges;
  std::unordered_set<std::uint64_t> emitted;
  while (merges.size() < n_merges && !queue.empty()) {
    const Candidate best = *queue.begin();
    if (best.count < 2) break;
    const int merged = intern(names[best.left] + names[best.right]);
    const auto key = pair_key(best.left, best.right);
    if (emitted.insert(key).second) merges.add(MergeRule{names[best.left], names[best.right]});

    const auto affected = where[key];
    for (const std::size_t w : affected) {
      auto& word = words[w];
      auto& s = word.symbols;
      bool present = false;
      for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        if (s[k] == best.left && s[k + 1] == best.right) {
          present = true;
          break;
        }
      }
      if (!present) continue;
      for (std::size_t k = 0; k + 1 < s.size(); ++k) adjust(s[k], s[k + 1], -word.freq);
      std::vector<int> next;
      next.reserve(s.size());
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (k + 1 < s.size() && s[k] == best.left && s[k + 1] == best.right) {
          next.push_back(merged);
          ++k;
        } else {
          next.push_back(s[k]);
        }
      }
      s = std::move(next);
      for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        adjust(s[k], s[k + 1], word.freq);
        auto& list = where[pair_key(s[k], s[k + 1])];
        if (list.empty() || list.back() != w) list.push_back(w);
      }
    }
  }
  return merges;
}

std::vector<std::string> segment_word(std::string_view word, const MergeList& merges) {
  std::vector<std::string> symbols = code_points(word);
  symbols.emplace_back(kEndOfWord);
  for (;;) {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k + 1 < symbols.size(); ++k) {
      const auto r = merges.rank(symbols[k], symbols[k + 1]);
      if (r && (!best || *r < *best)) best = r;
    }
    if (!best) break;
    const auto& rule = merges.rules()[*best];
    std::vector<std::string> next;
    next.reserve(symbols.size());
    for (std::size_t k = 0; k < symbols.size(); ++k) {
      if (k + 1 < symbols.size() && symbols[k] == rule.left && symbols[k + 1] == rule.right) {
        next.push_back(symbols[k] + symbols[k + 1]);
        ++k;
      } else {
        next.push_back(std::move(symbols[k]));
      }
    }
    symbols = std::move(next);
  }
  auto& last = symbols.back();
  if (last == kEndOfWord) {
    symbols.pop_back();
  } else if (last.ends_with(kEndOfWord)) {
    last.resize(last.size() - kEndOfWord.size());
  }
  return symbols;
}

std::string apply_bpe(std::string_view line, const MergeList& merges) {
  check_reserved(line);
  std::string out;
  for (const auto& word : tokenize(line)) {
    const auto units = segment_word(word, merges);
    for (std::size_t k = 0; k < units.size(); ++k) {
      if (!out.empty()) out.push_back(' ');
      out += units[k];
      if (k + 1 < units.size()) out.append(kContinuation);
    }
  }
  return out;
}

std::string decode_bpe(std::string_view segmented) {
  std::string out;
  out.reserve(segmented.size());
  const std::string joiner = std::string(kContinuation) + " ";
  std::size_t i = 0;
  while (i < segmented.size()) {
    if (segmented.compare(i, joiner.size(), joiner) == 0) {
      i += joiner.size();
      continue;
    }
    if (i + kContinuation.size() == segmented.size() && segmented.substr(i) == kContinuation) break;
    out.push_back(segmented[i++]);
  }
  return out;
}

void write_merges(const MergeList& merges, const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(merges.size() + 1);
  lines.emplace_back("#version: 0.2");
  for (const auto& r : merges.rules()) lines.push_back(r.left + " " + r.right);
  write_lines(lines, path);
}

MergeList read_merges(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  MergeList merges;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (n == 0 && lines[n].starts_with("#version")) continue;
    if (lines[n].empty()) continue;
    const auto fields = tokenize(lines[n]);
    if (fields.size() != 2) throw ParseError(path.string(), n + 1, "expected 'left right'");
    try {
      merges.add(MergeRule{fields[0], fields[1]});
    } catch (const ValidationError& e) {
      throw ParseError(path.string(), n + 1, e.what());
    }
  }
  return merges;
}

}  // namespace bitext
