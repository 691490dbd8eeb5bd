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

#include "bitext/alignment.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "bitext/error.hpp"
#include "bitext/text.hpp"

namespace bitext {

AlignmentMatrix::AlignmentMatrix(std::size_t src_len, std::size_t tgt_len, std::vector<Link> links)
    : src_len_(src_len), tgt_len_(tgt_len), links_(std::move(links)) {
  for (const auto& l : links_) {
    if (l.src >= src_len_ || l.tgt >= tgt_len_) {
      throw ValidationError("alignment link " + std::to_string(l.src) + "-" + std::to_string(l.tgt) +
                            " outside " + std::to_string(src_len_) + "x" + std::to_string(tgt_len_));
    }
  }
  std::sort(links_.begin(), links_.end());
  links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
}

bool AlignmentMatrix::contains(std::size_t i, std::size_t j) const {
  const Link l{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
  return std::binary_search(links_.begin(), links_.end(), l);
}

bool AlignmentMatrix::add(std::size_t i, std::size_t j) {
  if (i >= src_len_ || j >= tgt_len_) throw ValidationError("alignment link outside grid");
  const Link l{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
  const auto pos = std::lower_bound(links_.begin(), links_.end(), l);
  if (pos != links_.end() && *pos == l) return false;
  links_.insert(pos, l);
  return true;
}

AlignmentMatrix AlignmentMatrix::transposed() const {
  std::vector<Link> t;
  t.reserve(links_.size());
  for (const auto& l : links_) t.push_back(Link{l.tgt, l.src});
  return AlignmentMatrix(tgt_len_, src_len_, std::move(t));
}

std::string to_pharaoh(const AlignmentMatrix& alignment) {
  std::string out;
  for (const auto& l : alignment.links()) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(l.src);
    out.push_back('-');
    out += std::to_string(l.tgt);
  }
  return out;
}

AlignmentMatrix parse_pharaoh(std::string_view text, std::size_t src_len, std::size_t tgt_len) {
  std::vector<Link> links;
  for (const auto& tok : tokenize(text)) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos) throw ValidationError("malformed alignment point '" + tok + "'");
    const auto i = parse_int(std::string_view(tok).substr(0, dash));
    const auto j = parse_int(std::string_view(tok).substr(dash + 1));
    if (!i || !j || *i < 0 || *j < 0) throw ValidationError("malformed alignment point '" + tok + "'");
    links.push_back(Link{static_cast<std::uint32_t>(*i), static_cast<std::uint32_t>(*j)});
  }
  return AlignmentMatrix(src_len, tgt_len, std::move(links));
}

std::vector<AlignmentMatrix> read_alignments(const std::filesystem::path& path, const Corpus& corpus) {
  const auto lines = read_lines(path);
  if (lines.size() != corpus.size()) {
    throw ParseError(path.string(), 0,
                     "alignment count " + std::to_string(lines.size()) + " does not match corpus size " +
                         std::to_string(corpus.size()));
  }
  std::vector<AlignmentMatrix> out;
  out.reserve(lines.size());
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto& p = corpus.pairs[n];
    try {
      out.push_back(parse_pharaoh(lines[n], tokenize(p.src).size(), tokenize(p.tgt).size()));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(path.string(), n + 1, e.what());
    }
  }
  return out;
}

void write_alignments(const std::vector<AlignmentMatrix>& alignments, const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(alignments.size());
  for (const auto& a : alignments) lines.push_back(to_pharaoh(a));
  write_lines(lines, path);
}

AlignmentMatrix viterbi_align(const SentencePair& pair, const LexicalTable& table, const ViterbiOptions& options) {
  const auto src = tokenize(pair.src);
  const auto tgt = tokenize(pair.tgt);
  const bool forward = table.direction() == Direction::src_to_tgt;
  const auto& cond = forward ? src : tgt;
  const auto& emitted = forward ? tgt : src;

  AlignmentMatrix out(cond.size(), emitted.size());
  if (cond.empty()) return out;
  for (std::size_t j = 0; j < emitted.size(); ++j) {
    std::size_t best = 0;
    double best_p = -1.0;
    for (std::size_t i = 0; i < cond.size(); ++i) {
      const double p = std::max(table.prob(cond[i], emitted[j]), options.floor);
      if (p > best_p) {
        best_p = p;
        best = i;
      }
    }
    if (options.use_null) {
      const double null_p = std::max(table.prob(kNullWord, emitted[j]), options.floor);
      const bool oov = best_p <= options.floor;
      if (oov || null_p > best_p) continue;
    }
    out.add(best, j);
  }
  return out;
}

Symmetrization parse_symmetrization(std::string_view name) {
  if (name == "intersection" || name == "intersect") return Symmetrization::intersection;
  if (name == "union") return Symmetrization::union_;
  if (name == "grow-diag-final-and" || name == "gdfa") return Symmetrization::grow_diag_final_and;
  throw ValidationError("unknown symmetrization heuristic '" + std::string(name) +
                        "' (expected intersection, union, grow-diag-final-and)");
}

std::string_view to_string(Symmetrization heuristic) {
  switch (heuristic) {
    case Symmetrization::intersection: return "intersection";
    case Symmetrization::union_: return "union";
    case Symmetrization::grow_diag_final_and: return "grow-diag-final-and";
  }
  return "?";
}

namespace {

class Grid {
 public:
  Grid(std::size_t n, std::size_t m) : n_(n), m_(m), cells_(n * m, false), row_(n, 0), col_(m, 0) {}

  bool at(std::size_t i, std::size_t j) const { return cells_[i * m_ + j]; }
  void set(std::size_t i, std::size_t j) {
    if (cells_[i * m_ + j]) return;
    cells_[i * m_ + j] = true;
    ++row_[i];
    ++col_[j];
  }
  bool src_aligned(std::size_t i) const { return row_[i] > 0; }
  bool tgt_aligned(std::size_t j) const { return col_[j] > 0; }

  AlignmentMatrix to_matrix() const {
    std::vector<Link> links;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) {
        if (at(i, j)) links.push_back(Link{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
      }
    }
    return AlignmentMatrix(n_, m_, std::move(links));
  }

 private:
  std::size_t n_, m_;
  std::vector<bool> cells_;
  std::vector<std::size_t> row_, col_;
};

}  // namespace

AlignmentMatrix symmetrize(const AlignmentMatrix& forward, const AlignmentMatrix& reverse, Symmetrization heuristic) {
  if (forward.src_len() != reverse.tgt_len() || forward.tgt_len() != reverse.src_len()) {
    throw ValidationError("symmetrize: forward is " + std::to_string(forward.src_len()) + "x" +
                          std::to_string(forward.tgt_len()) + " but reverse is " + std::to_string(reverse.src_len()) +
                          "x" + std::to_string(reverse.tgt_len()));
  }
  const AlignmentMatrix rev = reverse.transposed();
  const std::size_t n = forward.src_len();
  const std::size_t m = forward.tgt_len();

  std::vector<Link> inter;
  std::set_intersection(forward.links().begin(), forward.links().end(), rev.links().begin(), rev.links().end(),
                        std::back_inserter(inter));
  if (heuristic == Symmetrization::intersection) return AlignmentMatrix(n, m, std::move(inter));

  std::vector<Link> uni;
  std::set_union(forward.links().begin(), forward.links().end(), rev.links().begin(), rev.links().end(),
                 std::back_inserter(uni));
  if (heuristic == Symmetrization::union_) return AlignmentMatrix(n, m, std::move(uni));

  Grid in_union(n, m);
  for (const auto& l : uni) in_union.set(l.src, l.tgt);
  Grid current(n, m);
  for (const auto& l : inter) current.set(l.src, l.tgt);

  static constexpr std::array<std::array<int, 2>, 8> kNeighbors{
      {{-1, 0}, {0, -1}, {1, 0}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};

  // grow-diag: repeat until a full sweep adds nothing
  for (bool added = true; added;) {
    added = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (!current.at(i, j)) continue;
        for (const auto& d : kNeighbors) {
          const auto ni = static_cast<std::ptrdiff_t>(i) + d[0];
          const auto nj = static_cast<std::ptrdiff_t>(j) + d[1];
          if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(n) || nj >= static_cast<std::ptrdiff_t>(m)) continue;
          const auto ui = static_cast<std::size_t>(ni);
          const auto uj = static_cast<std::size_t>(nj);
          if (current.at(ui, uj) || !in_union.at(ui, uj)) continue;
          if (!current.src_aligned(ui) || !current.tgt_aligned(uj)) {
            current.set(ui, uj);
            added = true;
          }
        }
      }
    }
  }

  // final-and: forward first, then reverse
  for (const auto* directional : {&forward, &rev}) {
    for (const auto& l : directional->links()) {
      if (!current.src_aligned(l.src) && !current.tgt_aligned(l.tgt)) current.set(l.src, l.tgt);
    }
  }
  return current.to_matrix();
}

}  // namespace bitext
