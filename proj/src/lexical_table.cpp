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

#include "bitext/lexical_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "bitext/error.hpp"
#include "bitext/parallel.hpp"
#include "bitext/text.hpp"

namespace bitext {

Direction reversed(Direction d) {
  return d == Direction::src_to_tgt ? Direction::tgt_to_src : Direction::src_to_tgt;
}

double LexicalTable::prob(std::string_view conditioning, std::string_view emitted) const {
  const auto row = rows_.find(conditioning);
  if (row == rows_.end()) return 0.0;
  const auto cell = row->second.find(emitted);
  return cell == row->second.end() ? 0.0 : cell->second;
}

void LexicalTable::set(std::string_view conditioning, std::string_view emitted, double p) {
  auto row = rows_.find(conditioning);
  if (row == rows_.end()) row = rows_.emplace(std::string(conditioning), Row{}).first;
  row->second.insert_or_assign(std::string(emitted), p);
}

std::size_t LexicalTable::entry_count() const {
  std::size_t n = 0;
  for (const auto& [_, row] : rows_) n += row.size();
  return n;
}

void write_lexical_table(const LexicalTable& table, std::ostream& out, bool exact) {
  std::vector<std::string> lines;
  lines.reserve(table.entry_count());
  for (const auto& [cond, row] : table.rows()) {
    for (const auto& [emitted, p] : row) {
      lines.push_back(cond + ' ' + emitted + ' ' + (exact ? format_shortest(p) : format_significant(p, 10)));
    }
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& line : lines) out << line << '\n';
}

void write_lexical_table(const LexicalTable& table, const std::filesystem::path& path, bool exact) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  write_lexical_table(table, out, exact);
  out.flush();
  if (!out) throw IoError(path.string(), "write failure");
}

LexicalTable read_lexical_table(std::istream& in, Direction direction, const std::string& source) {
  LexicalTable table(direction);
  bool has_null = false;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = tokenize(line);
    if (fields.size() != 3) throw ParseError(source, n, "expected 'conditioning emitted probability'");
    const auto p = parse_double(fields[2]);
    if (!p || !(*p >= 0.0 && *p <= 1.0)) throw ParseError(source, n, "probability outside [0,1]: " + fields[2]);
    if (fields[0] == kNullWord) has_null = true;
    table.set(fields[0], fields[1], *p);
  }
  LexicalTable out(direction, has_null);
  for (const auto& [cond, row] : table.rows()) {
    for (const auto& [emitted, p] : row) out.set(cond, emitted, p);
  }
  return out;
}

LexicalTable read_lexical_table(const std::filesystem::path& path, Direction direction) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  return read_lexical_table(in, direction, path.string());
}

namespace {

struct Vocab {
  std::vector<std::string> words;
  std::unordered_map<std::string, std::uint32_t> ids;

  std::uint32_t intern(const std::string& w) {
    const auto [it, inserted] = ids.emplace(w, static_cast<std::uint32_t>(words.size()));
    if (inserted) words.push_back(w);
    return it->second;
  }
};

struct EncodedPair {
  std::vector<std::uint32_t> cond;
  std::vector<std::uint32_t> emitted;
  std::size_t cell_offset = 0;  // first slot in the flattened cond x emitted cell arrays
};

// Sentences per parallel E-step block. Posteriors for one block are buffered
// and then added to the count vector sequentially in corpus order.
constexpr std::size_t kBlockSize = 4096;
constexpr std::size_t kTaskSize = 64;

}  // namespace

Model1Result train_model1(const Corpus& corpus, Direction direction, const Model1Options& options,
                          const std::function<void(unsigned, const LexicalTable&)>& on_iteration) {
  if (corpus.empty()) throw ValidationError("train_model1: empty corpus");
  if (options.iterations == 0) throw ValidationError("train_model1: iterations must be positive");

  Vocab cond_vocab, emit_vocab;
  if (options.use_null) cond_vocab.intern(std::string(kNullWord));

  Model1Result result{LexicalTable(direction, options.use_null), {}, 0};
  std::vector<EncodedPair> pairs;
  pairs.reserve(corpus.size());
  std::size_t cells = 0;
  for (const auto& p : corpus.pairs) {
    const auto src = tokenize(p.src);
    const auto tgt = tokenize(p.tgt);
    if (src.empty() || tgt.empty()) {
      ++result.skipped_pairs;
      continue;
    }
    const auto& cond_tokens = direction == Direction::src_to_tgt ? src : tgt;
    const auto& emit_tokens = direction == Direction::src_to_tgt ? tgt : src;
    EncodedPair e;
    if (options.use_null) e.cond.push_back(0);
    for (const auto& w : cond_tokens) e.cond.push_back(cond_vocab.intern(w));
    for (const auto& w : emit_tokens) e.emitted.push_back(emit_vocab.intern(w));
    e.cell_offset = cells;
    cells += e.cond.size() * e.emitted.size();
    pairs.push_back(std::move(e));
  }
  if (pairs.empty()) throw ValidationError("train_model1: no pair has tokens on both sides");

  // Parameters exist only for co-occurring (cond, emitted) word pairs, laid
  // out sorted by (cond id, emitted id) so each conditioning row is contiguous.
  auto key_of = [](std::uint32_t c, std::uint32_t e) { return (std::uint64_t{c} << 32) | e; };
  std::vector<std::uint64_t> keys;
  keys.reserve(cells);
  for (const auto& e : pairs) {
    for (auto c : e.cond) {
      for (auto w : e.emitted) keys.push_back(key_of(c, w));
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<std::uint32_t> cell_param(cells);
  for (const auto& e : pairs) {
    std::size_t k = e.cell_offset;
    for (auto c : e.cond) {
      for (auto w : e.emitted) {
        cell_param[k++] = static_cast<std::uint32_t>(
            std::lower_bound(keys.begin(), keys.end(), key_of(c, w)) - keys.begin());
      }
    }
  }

  // row_begin[r] .. row_begin[r+1] spans the parameters of the r-th distinct
  // conditioning word in key order.
  std::vector<std::size_t> row_begin;
  for (std::size_t p = 0; p < keys.size(); ++p) {
    if (p == 0 || (keys[p] >> 32) != (keys[p - 1] >> 32)) row_begin.push_back(p);
  }
  row_begin.push_back(keys.size());

  std::vector<double> t(keys.size());
  for (std::size_t r = 0; r + 1 < row_begin.size(); ++r) {
    const double uniform = 1.0 / static_cast<double>(row_begin[r + 1] - row_begin[r]);
    std::fill(t.begin() + static_cast<std::ptrdiff_t>(row_begin[r]),
              t.begin() + static_cast<std::ptrdiff_t>(row_begin[r + 1]), uniform);
  }

  auto to_table = [&] {
    LexicalTable table(direction, options.use_null);
    for (std::size_t p = 0; p < keys.size(); ++p) {
      table.set(cond_vocab.words[keys[p] >> 32], emit_vocab.words[keys[p] & 0xffffffffu], t[p]);
    }
    return table;
  };

  std::vector<double> counts(keys.size());
  std::vector<double> posterior;
  std::vector<double> sentence_ll(pairs.size());

  for (unsigned iter = 0;; ++iter) {
    const bool last_pass = iter == options.iterations;
    std::fill(counts.begin(), counts.end(), 0.0);
    const Chunking blocks{pairs.size(), kBlockSize};
    for (std::size_t b = 0; b < blocks.count(); ++b) {
      const std::size_t first = blocks.begin(b);
      const std::size_t last = blocks.end(b);
      const std::size_t base = pairs[first].cell_offset;
      const std::size_t span =
          pairs[last - 1].cell_offset + pairs[last - 1].cond.size() * pairs[last - 1].emitted.size() - base;
      posterior.assign(span, 0.0);
      const Chunking tasks{last - first, kTaskSize};
      parallel_for(tasks.count(), options.workers, [&](std::size_t task) {
        for (std::size_t s = first + tasks.begin(task); s < first + tasks.end(task); ++s) {
          const auto& e = pairs[s];
          const std::size_t l = e.cond.size();
          const std::size_t m = e.emitted.size();
          double ll = 0.0;
          for (std::size_t j = 0; j < m; ++j) {
            double denom = 0.0;
            for (std::size_t i = 0; i < l; ++i) denom += t[cell_param[e.cell_offset + i * m + j]];
            ll += std::log(denom / static_cast<double>(l));
            for (std::size_t i = 0; i < l; ++i) {
              const std::size_t cell = e.cell_offset + i * m + j;
              posterior[cell - base] = t[cell_param[cell]] / denom;
            }
          }
          sentence_ll[s] = ll;
        }
      });
      if (!last_pass) {
        for (std::size_t k = 0; k < span; ++k) counts[cell_param[base + k]] += posterior[k];
      }
    }
    if (iter > 0) {
      double ll = 0.0;
      for (double v : sentence_ll) ll += v;
      result.likelihood.push_back(ll);
    }
    if (last_pass) break;

    for (std::size_t r = 0; r + 1 < row_begin.size(); ++r) {
      double total = 0.0;
      for (std::size_t p = row_begin[r]; p < row_begin[r + 1]; ++p) total += counts[p];
      if (total <= 0.0) continue;
      for (std::size_t p = row_begin[r]; p < row_begin[r + 1]; ++p) t[p] = counts[p] / total;
    }
    if (on_iteration) on_iteration(iter + 1, to_table());
  }

  result.table = to_table();
  return result;
}

}  // namespace bitext
