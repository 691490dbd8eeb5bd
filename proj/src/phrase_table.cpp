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

#include "bitext/phrase_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "bitext/error.hpp"
#include "bitext/parallel.hpp"
#include "bitext/text.hpp"

namespace bitext {

std::vector<PhraseSpan> extract_phrases(const AlignmentMatrix& alignment, std::size_t max_len) {
  if (max_len == 0) throw ValidationError("extract_phrases: max_len must be positive");
  const std::size_t n = alignment.src_len();
  const std::size_t m = alignment.tgt_len();
  std::vector<std::vector<std::uint32_t>> by_src(n), by_tgt(m);
  for (const auto& l : alignment.links()) {
    by_src[l.src].push_back(l.tgt);
    by_tgt[l.tgt].push_back(l.src);
  }

  std::vector<PhraseSpan> out;
  for (std::size_t s1 = 0; s1 < n; ++s1) {
    if (by_src[s1].empty()) continue;
    std::size_t tmin = m, tmax = 0;
    for (std::size_t s2 = s1; s2 < n && s2 < s1 + max_len; ++s2) {
      for (auto t : by_src[s2]) {
        tmin = std::min<std::size_t>(tmin, t);
        tmax = std::max<std::size_t>(tmax, t);
      }
      // the target span only widens as s2 grows
      if (tmax - tmin + 1 > max_len) break;
      if (by_src[s2].empty()) continue;
      bool consistent = true;
      for (std::size_t t = tmin; t <= tmax && consistent; ++t) {
        for (auto s : by_tgt[t]) {
          if (s < s1 || s > s2) {
            consistent = false;
            break;
          }
        }
      }
      if (consistent) {
        out.push_back(PhraseSpan{static_cast<std::uint32_t>(s1), static_cast<std::uint32_t>(s2 + 1),
                                 static_cast<std::uint32_t>(tmin), static_cast<std::uint32_t>(tmax + 1)});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PhraseSpan> extract_phrases(const SentencePair& pair, const AlignmentMatrix& alignment,
                                        std::size_t max_len) {
  const auto src_len = tokenize(pair.src).size();
  const auto tgt_len = tokenize(pair.tgt).size();
  if (alignment.src_len() != src_len || alignment.tgt_len() != tgt_len) {
    throw ValidationError("pair " + std::to_string(pair.id) + " has " + std::to_string(src_len) + "x" +
                          std::to_string(tgt_len) + " tokens but alignment is " +
                          std::to_string(alignment.src_len()) + "x" + std::to_string(alignment.tgt_len()));
  }
  return extract_phrases(alignment, max_len);
}

double lexical_weight(std::span<const std::string> src_phrase, std::span<const std::string> tgt_phrase,
                      const AlignmentMatrix& alignment, const LexicalTable& lex, Direction direction,
                      double floor) {
  if (alignment.src_len() != src_phrase.size() || alignment.tgt_len() != tgt_phrase.size()) {
    throw ValidationError("lexical_weight: alignment does not match phrase lengths");
  }
  const bool forward = direction == Direction::src_to_tgt;
  const auto cond = forward ? src_phrase : tgt_phrase;
  const auto emitted = forward ? tgt_phrase : src_phrase;

  std::vector<std::vector<std::uint32_t>> linked(emitted.size());
  for (const auto& l : alignment.links()) {
    if (forward) {
      linked[l.tgt].push_back(l.src);
    } else {
      linked[l.src].push_back(l.tgt);
    }
  }

  double weight = 1.0;
  for (std::size_t j = 0; j < emitted.size(); ++j) {
    if (linked[j].empty()) {
      weight *= std::max(lex.prob(kNullWord, emitted[j]), floor);
      continue;
    }
    double sum = 0.0;
    for (auto i : linked[j]) sum += std::max(lex.prob(cond[i], emitted[j]), floor);
    weight *= sum / static_cast<double>(linked[j].size());
  }
  return std::clamp(weight, 0.0, 1.0);
}

namespace {

struct PhraseKey {
  std::string src;
  std::string tgt;
  friend auto operator<=>(const PhraseKey&, const PhraseKey&) = default;
};

struct Aggregate {
  std::uint64_t count = 0;
  std::vector<std::string> src;
  std::vector<std::string> tgt;
  AlignmentMatrix alignment;
};

using AggregateMap = std::map<PhraseKey, Aggregate>;

constexpr std::size_t kPairsPerChunk = 1024;

void collect(const SentencePair& pair, const AlignmentMatrix& alignment, std::size_t max_len, AggregateMap& into) {
  const auto src = tokenize(pair.src);
  const auto tgt = tokenize(pair.tgt);
  if (alignment.src_len() != src.size() || alignment.tgt_len() != tgt.size()) {
    throw ValidationError("pair " + std::to_string(pair.id) + " has " + std::to_string(src.size()) + "x" +
                          std::to_string(tgt.size()) + " tokens but alignment is " +
                          std::to_string(alignment.src_len()) + "x" + std::to_string(alignment.tgt_len()));
  }
  for (const auto& span : extract_phrases(alignment, max_len)) {
    std::vector<std::string> sp(src.begin() + span.src_begin, src.begin() + span.src_end);
    std::vector<std::string> tp(tgt.begin() + span.tgt_begin, tgt.begin() + span.tgt_end);
    PhraseKey key{join(sp), join(tp)};
    auto [it, inserted] = into.try_emplace(std::move(key));
    ++it->second.count;
    if (!inserted) continue;
    std::vector<Link> local;
    for (const auto& l : alignment.links()) {
      if (l.src >= span.src_begin && l.src < span.src_end) {
        local.push_back(Link{l.src - span.src_begin, l.tgt - span.tgt_begin});
      }
    }
    it->second.alignment = AlignmentMatrix(sp.size(), tp.size(), std::move(local));
    it->second.src = std::move(sp);
    it->second.tgt = std::move(tp);
  }
}

}  // namespace

std::vector<PhraseTableEntry> build_phrase_table(const Corpus& corpus, std::span<const AlignmentMatrix> alignments,
                                                 const LexicalTable& lex_fwd, const LexicalTable& lex_rev,
                                                 const PhraseTableOptions& options) {
  if (alignments.size() != corpus.size()) {
    throw ValidationError("build_phrase_table: " + std::to_string(alignments.size()) + " alignments for " +
                          std::to_string(corpus.size()) + " pairs");
  }
  const Chunking chunks{corpus.size(), kPairsPerChunk};
  std::vector<AggregateMap> partial(chunks.count());
  parallel_for(chunks.count(), options.workers, [&](std::size_t c) {
    for (std::size_t k = chunks.begin(c); k < chunks.end(c); ++k) {
      collect(corpus.pairs[k], alignments[k], options.max_len, partial[c]);
    }
  });

  // Chunks merge in corpus order so the first occurrence wins.
  AggregateMap merged;
  for (auto& part : partial) {
    for (auto& [key, agg] : part) {
      auto [it, inserted] = merged.try_emplace(key);
      if (inserted) {
        it->second = std::move(agg);
      } else {
        it->second.count += agg.count;
      }
    }
    part.clear();
  }

  std::unordered_map<std::string_view, std::uint64_t> src_totals, tgt_totals;
  for (const auto& [key, agg] : merged) {
    src_totals[key.src] += agg.count;
    tgt_totals[key.tgt] += agg.count;
  }

  std::vector<PhraseTableEntry> out;
  out.reserve(merged.size());
  for (auto& [key, agg] : merged) {
    PhraseTableEntry e;
    e.phi_ts = static_cast<double>(agg.count) / static_cast<double>(src_totals.at(key.src));
    e.phi_st = static_cast<double>(agg.count) / static_cast<double>(tgt_totals.at(key.tgt));
    e.joint_count = agg.count;
    e.src = std::move(agg.src);
    e.tgt = std::move(agg.tgt);
    e.alignment = std::move(agg.alignment);
    out.push_back(std::move(e));
  }
  parallel_for(out.size(), options.workers, [&](std::size_t k) {
    auto& e = out[k];
    e.lex_ts = lexical_weight(e.src, e.tgt, e.alignment, lex_fwd, Direction::src_to_tgt, options.floor);
    e.lex_st = lexical_weight(e.src, e.tgt, e.alignment, lex_rev, Direction::tgt_to_src, options.floor);
  });
  return out;
}

void PhraseScoreWeights::validate() const {
  for (double w : {phi_ts, phi_st, lex_ts, lex_st}) {
    if (!(w >= 0.0) || std::isinf(w)) throw ValidationError("phrase score weights must be finite and non-negative");
  }
  if (phi_ts + phi_st + lex_ts + lex_st <= 0.0) throw ValidationError("phrase score weights are all zero");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("phrase score threshold out of range [0,1]: " + format_significant(threshold, 6));
  }
}

double PhraseScoreWeights::score(const PhraseTableEntry& e) const {
  const double num = phi_ts * e.phi_ts + phi_st * e.phi_st + lex_ts * e.lex_ts + lex_st * e.lex_st;
  return num / (phi_ts + phi_st + lex_ts + lex_st);
}

std::vector<PhraseTableEntry> score_filter(std::span<const PhraseTableEntry> entries,
                                           const PhraseScoreWeights& weights) {
  weights.validate();
  std::vector<PhraseTableEntry> out;
  for (const auto& e : entries) {
    if (weights.score(e) >= weights.threshold) out.push_back(e);
  }
  return out;
}

namespace {

bool contains_run(std::span<const std::string> outer, std::span<const std::string> inner) {
  if (inner.size() > outer.size()) return false;
  return std::search(outer.begin(), outer.end(), inner.begin(), inner.end()) != outer.end();
}

std::string key_of(const PhraseTableEntry& e) { return join(e.src) + " ||| " + join(e.tgt); }

}  // namespace

bool dominates(const PhraseTableEntry& outer, const PhraseTableEntry& inner) {
  if (outer.src == inner.src && outer.tgt == inner.tgt) return false;
  return contains_run(outer.src, inner.src) && contains_run(outer.tgt, inner.tgt);
}

std::vector<PhraseTableEntry> longest_unique(std::span<const PhraseTableEntry> entries) {
  std::vector<const PhraseTableEntry*> unique;
  std::unordered_set<std::string> keys;
  for (const auto& e : entries) {
    if (keys.insert(key_of(e)).second) unique.push_back(&e);
  }

  // Domination is containment on both sides, a partial order on distinct
  // keys, so the survivors are exactly the maximal elements. An entry is
  // dominated iff its key equals a proper contiguous sub-pair of another
  // entry; enumerate each entry's sub-pairs and look them up.
  std::unordered_set<std::string> dominated;
  for (const auto* e : unique) {
    const std::size_t ns = e->src.size();
    const std::size_t nt = e->tgt.size();
    for (std::size_t sb = 0; sb < ns; ++sb) {
      for (std::size_t se = sb + 1; se <= ns; ++se) {
        const std::string sub_src = join(std::span(e->src).subspan(sb, se - sb));
        for (std::size_t tb = 0; tb < nt; ++tb) {
          for (std::size_t te = tb + 1; te <= nt; ++te) {
            if (sb == 0 && se == ns && tb == 0 && te == nt) continue;
            std::string k = sub_src + " ||| " + join(std::span(e->tgt).subspan(tb, te - tb));
            if (keys.contains(k)) dominated.insert(std::move(k));
          }
        }
      }
    }
  }

  std::vector<PhraseTableEntry> out;
  for (const auto* e : unique) {
    if (!dominated.contains(key_of(*e))) out.push_back(*e);
  }
  return out;
}

Corpus to_corpus(std::span<const PhraseTableEntry> entries, std::string name) {
  Corpus c;
  c.name = std::move(name);
  c.pairs.reserve(entries.size());
  for (const auto& e : entries) c.add(join(e.src), join(e.tgt));
  return c;
}

std::string format_phrase_entry(const PhraseTableEntry& e, bool exact) {
  for (const auto* side : {&e.src, &e.tgt}) {
    for (const auto& tok : *side) {
      if (tok == "|||" || tok.find_first_of(" \t\r\n") != std::string::npos || tok.empty()) {
        throw ValidationError("phrase token '" + tok + "' cannot be serialized");
      }
    }
  }
  std::string line = join(e.src);
  line += " ||| ";
  line += join(e.tgt);
  line += " ||| ";
  const auto number = [exact](double p) { return exact ? format_shortest(p) : format_fixed(p, 6); };
  line += number(e.phi_ts) + ' ' + number(e.lex_ts) + ' ' + number(e.phi_st) + ' ' + number(e.lex_st);
  line += " ||| ";
  line += to_pharaoh(e.alignment);
  line += " ||| ";
  line += std::to_string(e.joint_count);
  return line;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find("|||", start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 3;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

PhraseTableEntry parse_phrase_entry(std::string_view line) {
  const auto fields = split_fields(line);
  if (fields.size() != 5) {
    throw ValidationError("expected 5 '|||'-separated fields, found " + std::to_string(fields.size()));
  }
  PhraseTableEntry e;
  e.src = tokenize(fields[0]);
  e.tgt = tokenize(fields[1]);
  if (e.src.empty() || e.tgt.empty()) throw ValidationError("empty phrase");

  const auto probs = tokenize(fields[2]);
  if (probs.size() != 4) throw ValidationError("expected 4 probabilities, found " + std::to_string(probs.size()));
  double* slots[4] = {&e.phi_ts, &e.lex_ts, &e.phi_st, &e.lex_st};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto v = parse_double(probs[k]);
    if (!v || !(*v >= 0.0 && *v <= 1.0)) throw ValidationError("probability outside [0,1]: " + probs[k]);
    *slots[k] = *v;
  }
  e.alignment = parse_pharaoh(fields[3], e.src.size(), e.tgt.size());
  const auto count = parse_int(trim(fields[4]));
  if (!count || *count < 1) throw ValidationError("joint count must be a positive integer");
  e.joint_count = static_cast<std::uint64_t>(*count);
  return e;
}

void write_phrase_table(std::span<const PhraseTableEntry> entries, std::ostream& out, bool exact) {
  for (const auto& e : entries) out << format_phrase_entry(e, exact) << '\n';
}

void write_phrase_table(std::span<const PhraseTableEntry> entries, const std::filesystem::path& path, bool exact) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  write_phrase_table(entries, out, exact);
  out.flush();
  if (!out) throw IoError(path.string(), "write failure");
}

std::vector<PhraseTableEntry> read_phrase_table(std::istream& in, const std::string& source) {
  std::vector<PhraseTableEntry> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      out.push_back(parse_phrase_entry(line));
    } catch (const ValidationError& e) {
      throw ParseError(source, n, e.what());
    }
  }
  return out;
}

std::vector<PhraseTableEntry> read_phrase_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  return read_phrase_table(in, path.string());
}

}  // namespace bitext
