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


// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Each check is end-to-end and independent of the unit
// tests; the oracles it compares against live in oracles.hpp.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bitext/alignment.hpp"
#include "bitext/bpe.hpp"
#include "bitext/config.hpp"
#include "bitext/corpus.hpp"
#include "bitext/embedding.hpp"
#include "bitext/lexical_table.hpp"
#include "bitext/phrase_table.hpp"
#include "bitext/pipeline.hpp"
#include "bitext/providers.hpp"
#include "bitext/text.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

#ifndef BITEXT_CLI_PATH
#define BITEXT_CLI_PATH "bitext"
#endif

using namespace bitext;
using namespace bitext::testing;

namespace {

// A failed expectation; the message becomes the FAIL detail.
struct Unmet {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Unmet{what};
}

std::string num(double v) { return format_shortest(v); }

// ---------------------------------------------------------------------------

std::string phrase_extraction() {
  Random rng(20261016);
  const auto start = std::chrono::steady_clock::now();
  std::size_t phrases = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = rng.uniform(1, 8), m = rng.uniform(1, 8);
    const auto a = random_alignment(rng, n, m);
    const auto got = extract_phrases(a, kDefaultMaxPhraseLength);
    expect(got == brute_force_phrases(a, kDefaultMaxPhraseLength),
           "pair " + std::to_string(k) + " (" + to_pharaoh(a) + ") differs from brute force");
    phrases += got.size();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(seconds < 10.0, "took " + num(seconds) + " s");
  return "1000 pairs, " + std::to_string(phrases) + " phrases, " + format_fixed(seconds, 2) + " s";
}

// Distributions sum to one and the trace never decreases, checked after
// every EM iteration.
void check_em_run(const Corpus& corpus, Direction direction, bool use_null, const std::string& label) {
  unsigned seen = 0;
  const auto r = train_model1(corpus, direction, {.iterations = 20, .use_null = use_null},
                              [&](unsigned iteration, const LexicalTable& table) {
                                ++seen;
                                for (const auto& [e, row] : table.rows()) {
                                  double total = 0;
                                  for (const auto& [_, p] : row) total += p;
                                  expect(std::abs(total - 1.0) <= 1e-9, label + ": row " + e + " sums to " + num(total) +
                                                                            " after iteration " +
                                                                            std::to_string(iteration));
                                }
                              });
  expect(seen == 20, label + ": " + std::to_string(seen) + " iterations observed");
  for (std::size_t k = 1; k < r.likelihood.size(); ++k) {
    expect(r.likelihood[k] >= r.likelihood[k - 1] - 1e-9,
           label + ": log-likelihood decreased at iteration " + std::to_string(k + 1));
  }
}

std::string em_correctness() {
  Corpus toy;
  toy.add("das haus", "the house");
  toy.add("das buch", "the book");
  toy.add("ein buch", "a book");
  const auto r = train_model1(toy, Direction::src_to_tgt, {.iterations = 20, .use_null = false});
  const double the = r.table.prob("das", "the"), house = r.table.prob("das", "house");
  expect(the >= 0.9, "t(the|das) = " + num(the));
  expect(the > house, "t(the|das) <= t(house|das)");
  // frozen from the independent Python implementation
  expect(std::abs(the - 0.9999880092588216) <= 1e-12, "t(the|das) differs from the reference: " + num(the));
  expect(std::abs(r.likelihood.back() - -4.160883371640737) <= 1e-12, "final log-likelihood differs");

  std::vector<std::pair<std::string, Corpus>> corpora = {{"toy", toy}};
  Random rng(303);
  for (int c = 0; c < 5; ++c) {
    Corpus random;
    for (int k = 0; k < 200; ++k) random.add(rng.sentence(1, 8), rng.sentence(1, 8));
    corpora.emplace_back("random" + std::to_string(c), std::move(random));
  }
  for (const auto& [name, corpus] : corpora) {
    for (bool use_null : {false, true}) {
      for (auto direction : {Direction::src_to_tgt, Direction::tgt_to_src}) {
        check_em_run(corpus, direction, use_null, name);
      }
    }
  }
  return "t(the|das)=" + format_fixed(the, 6) + " t(house|das)=" + format_significant(house, 3) + ", " +
         std::to_string(corpora.size() * 4) + " traces monotone";
}

std::string lexical_weight_example() {
  LexicalTable fwd(Direction::src_to_tgt);
  fwd.set("a", "y", 0.6);
  fwd.set("b", "y", 0.2);
  const std::vector<std::string> ab = {"a", "b"}, y = {"y"};
  const double w = lexical_weight(ab, y, AlignmentMatrix(2, 1, {{0, 0}, {1, 0}}), fwd, Direction::src_to_tgt);
  expect(std::abs(w - 0.4) <= 1e-12, "lex = " + num(w));

  // the same value reaches the phrase table
  Corpus c;
  c.add("a b", "y");
  const std::vector<AlignmentMatrix> al = {AlignmentMatrix(2, 1, {{0, 0}, {1, 0}})};
  LexicalTable rev(Direction::tgt_to_src);
  rev.set("y", "a", 0.5);
  rev.set("y", "b", 0.5);
  const auto table = build_phrase_table(c, al, fwd, rev);
  const auto it = std::find_if(table.begin(), table.end(), [](const auto& e) { return e.src.size() == 2; });
  expect(it != table.end(), "phrase 'a b ||| y' missing");
  expect(std::abs(it->lex_ts - 0.4) <= 1e-12, "table lex_ts = " + num(it->lex_ts));
  return "lex(y|a b) = " + num(w);
}

std::string filter_laws() {
  Random rng(404);
  // sentence filter
  std::vector<ScoredPair> scored;
  for (std::size_t k = 0; k < 1000; ++k) {
    const double s = rng.coin(0.3) ? static_cast<double>(rng.uniform(0, 20)) / 10.0 - 1.0 : rng.real(-1, 1);
    scored.push_back({SentencePair{k, "s" + std::to_string(k), "t" + std::to_string(k)}, s});
  }
  std::vector<double> taus = {-1.0, 0.0, 0.8, 0.85, 0.9, 0.95, 1.0};
  for (int k = 0; k < 20; ++k) taus.push_back(rng.real(-1, 1));
  std::sort(taus.begin(), taus.end());
  std::size_t previous = SIZE_MAX;
  std::set<std::size_t> previous_ids;
  for (double tau : taus) {
    const auto kept = filter_by_threshold(scored, tau);
    std::set<std::size_t> ids;
    for (const auto& p : kept.pairs) ids.insert(std::stoul(p.src.substr(1)));
    for (const auto& p : scored) expect(ids.contains(p.pair.id) == (p.similarity >= tau), "sentence filter at " + num(tau));
    expect(kept.size() <= previous, "sentence filter not monotone at " + num(tau));
    if (previous != SIZE_MAX) expect(std::includes(previous_ids.begin(), previous_ids.end(), ids.begin(), ids.end()), "not nested");
    std::vector<ScoredPair> again;
    for (const auto& p : scored)
      if (ids.contains(p.pair.id)) again.push_back(p);
    expect(filter_by_threshold(again, tau).pairs == kept.pairs, "sentence filter not idempotent");
    previous = kept.size();
    previous_ids = ids;
  }
  // phrase score filter
  std::vector<PhraseTableEntry> table;
  for (int k = 0; k < 1000; ++k) table.push_back(random_entry(rng, 30, 4));
  std::vector<PhraseTableEntry> before = table;
  for (double tau : {0.0, 0.3, 0.5, 0.8, 0.95, 1.0}) {
    const PhraseScoreWeights w{.threshold = tau};
    const auto kept = score_filter(table, w);
    expect(is_sub_table(kept, before), "phrase filter not monotone at " + num(tau));
    expect(score_filter(kept, w) == kept, "phrase filter not idempotent");
    for (const auto& e : table) {
      const double mean = (e.phi_ts + e.phi_st + e.lex_ts + e.lex_st) / 4.0;
      const bool in = std::find(kept.begin(), kept.end(), e) != kept.end();
      expect(in == (mean >= tau), "phrase filter disagrees with the mean score at " + num(tau));
    }
    before = kept;
  }
  const std::vector<PhraseTableEntry> edge = {phrase_entry("a", "x", 0.9, 0.7, 0.9, 0.7)};
  expect(score_filter(edge, {.threshold = 0.8}).size() == 1, "mean 0.8 dropped at tau 0.8");
  expect(score_filter(edge, {.threshold = 0.95}).empty(), "mean 0.8 kept at tau 0.95");
  return std::to_string(taus.size()) + " sentence thresholds, 6 phrase thresholds";
}

std::string longest_unique_audit() {
  const std::vector<PhraseTableEntry> example = {phrase_entry("a b", "x y"), phrase_entry("a", "x"),
                                                 phrase_entry("c", "z")};
  const auto selected = longest_unique(example);
  expect(phrase_keys(selected) == std::multiset<std::string>{"a b ||| x y", "c ||| z"}, "worked example");
  Random rng(505);
  std::size_t entries = 0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<PhraseTableEntry> table;
    const std::size_t size = rng.uniform(1, 50);
    for (std::size_t e = 0; e < size; ++e) table.push_back(random_entry(rng, 4, 3));
    entries += size;
    const auto problem = audit_longest_unique(table, [](std::span<const PhraseTableEntry> t) { return longest_unique(t); });
    expect(problem.empty(), "table " + std::to_string(k) + ": " + problem);
  }
  return "1000 tables, " + std::to_string(entries) + " entries";
}

std::size_t component(const RunReport& r, const std::string& name) {
  for (const auto& [n, count] : r.components)
    if (n == name) return count;
  return 0;
}

std::string synthetic_recovery() {
  TempDir dir;
  const auto s = make_synthetic(dir.path(), {.parallel = 100, .clean = 500, .noise = 500, .dim = 256, .seed = 11});
  auto config = [&](const std::string& recipe) {
    return load_config(s.config, {{"recipe.name", recipe}, {"recipe.output_src", ""}, {"recipe.output_tgt", ""}});
  };
  const auto labse = run_recipe(config("baseline_labse"));
  expect(labse.output.size() == 100 + 500, "baseline_labse kept " + std::to_string(labse.output.size()) + " pairs");
  std::set<std::pair<std::string, std::string>> kept;
  for (std::size_t k = 100; k < labse.output.size(); ++k) kept.emplace(labse.output.pairs[k].src, labse.output.pairs[k].tgt);
  expect(kept == s.clean, "kept set differs from the clean set");

  const auto full = run_recipe(config("baseline_labse_ppi_labse"));
  const auto pl = run_recipe(config("baseline_ppi_labse"));
  const std::size_t P = component(full.report, "parallel"), L = component(full.report, "sentences"),
                    PL = component(full.report, "filtered_phrases");
  expect(P == 100, "P = " + std::to_string(P));
  expect(L == 500, "L(S) = " + std::to_string(L));
  expect(PL == pl.output.size() - 100, "PL(S) differs between recipes");
  expect(full.output.size() == P + L + PL, "count identity: " + std::to_string(full.output.size()) +
                                                " != " + std::to_string(P + L + PL));
  return "recovered 500/500 clean, |out| = " + std::to_string(P) + "+" + std::to_string(L) + "+" +
         std::to_string(PL) + " = " + std::to_string(full.output.size());
}

// Drops [timing] and the output paths, which echo the per-run --set values.
std::string comparable(const std::string& report) {
  const auto at = report.find("[timing]");
  std::istringstream in(at == std::string::npos ? report : report.substr(0, at));
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.starts_with("output_src=") || line.starts_with("output_tgt=")) continue;
    out += line + '\n';
  }
  return out;
}

std::string determinism() {
  TempDir dir;
  const auto s = make_synthetic(dir.path(), {.parallel = 300, .clean = 300, .noise = 300, .seed = 12},
                                "baseline_labse_ppi_labse");
  struct Run {
    std::string src, tgt, report;
  };
  auto run = [&](const std::string& tag, unsigned workers) {
    const auto out_src = dir / (tag + ".src"), out_tgt = dir / (tag + ".tgt"), report = dir / (tag + ".report");
    const std::string cmd = std::string("\"") + BITEXT_CLI_PATH + "\" --workers " + std::to_string(workers) +
                            " --set recipe.output_src=" + out_src.string() + " --set recipe.output_tgt=" +
                            out_tgt.string() + " --report " + report.string() + " recipe run " + s.config.string() +
                            " > " + (dir / (tag + ".stdout")).string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    expect(status == 0, "'" + cmd + "' exited with " + std::to_string(status) + ": " + read_file(dir / (tag + ".stdout")));
    return Run{read_file(out_src), read_file(out_tgt), comparable(read_file(report))};
  };
  const Run a = run("w1", 1), b = run("w8", 8), c = run("w1b", 1);
  for (const auto* other : {&b, &c}) {
    expect(other->src == a.src && other->tgt == a.tgt, "output bytes differ");
    expect(other->report == a.report, "reports differ outside [timing]");
  }
  expect(!a.src.empty(), "empty output");
  return "workers 1, 8 and a rerun: " + std::to_string(std::count(a.src.begin(), a.src.end(), '\n')) +
         " identical pairs";
}

std::string round_trips() {
  TempDir dir;
  Random rng(808);
  constexpr std::size_t N = 10000;

  std::vector<PhraseTableEntry> table;
  for (std::size_t k = 0; k < N; ++k) table.push_back(random_entry(rng, 50, 5));
  write_phrase_table(table, dir / "pt", true);
  expect(read_phrase_table(dir / "pt") == table, "phrase table");

  LexicalTable lex(Direction::src_to_tgt, true);
  for (std::size_t k = 0; k < N; ++k) {
    lex.set(k % 10 == 0 ? std::string(kNullWord) : rng.word(1, 6), rng.word(1, 6), rng.real(0, 1));
  }
  write_lexical_table(lex, dir / "lex", true);
  expect(read_lexical_table(dir / "lex", Direction::src_to_tgt) == lex, "lexical table");

  std::vector<std::string> lines;
  for (std::size_t k = 0; k < 2000; ++k) lines.push_back(rng.sentence(1, 12));
  const auto merges = learn_bpe(lines, N);
  MergeList many;
  for (std::size_t k = 0; many.size() < N; ++k) many.add({"l" + std::to_string(k), "r" + std::to_string(k % 97)});
  for (const MergeList* m : {&merges, static_cast<const MergeList*>(&many)}) {
    write_merges(*m, dir / "codes");
    expect(read_merges(dir / "codes") == *m, "merge file");
  }

  EmbeddingFile file;
  file.dim = 16;
  for (std::size_t k = 0; k < N; ++k) {
    Embedding v(file.dim);
    for (auto& x : v) x = rng.real(-1, 1);
    file.records.emplace_back(text_hash("text " + std::to_string(k)), std::move(v));
  }
  write_embedding_file(file, dir / "vec");
  expect(read_embedding_file(dir / "vec") == file, "embedding file");

  Corpus corpus;
  for (std::size_t k = 0; k < N; ++k) corpus.add(rng.sentence(0, 10), rng.sentence(0, 10));
  write_parallel(corpus, dir / "c.src", dir / "c.tgt");
  const auto back = read_parallel(dir / "c.src", dir / "c.tgt");
  expect(back.pairs == corpus.pairs, "corpus");
  return "phrase, lexical, merge (" + std::to_string(merges.size()) + " learned + " + std::to_string(N) +
         "), embedding, corpus";
}

std::string bpe() {
  std::vector<std::string> classic;
  for (const auto& [word, count] : {std::pair{"low", 5}, {"lower", 2}, {"newest", 6}, {"widest", 3}}) {
    for (int k = 0; k < count; ++k) classic.emplace_back(word);
  }
  const auto first = learn_bpe(classic, 10);
  expect(first.size() >= 2 && first.rules()[0] == MergeRule{"e", "s"} && first.rules()[1] == MergeRule{"es", "t"},
         "first merges on low/lower/newest/widest");
  Random rng(909);
  std::vector<std::string> train, probe;
  for (int k = 0; k < 3000; ++k) train.push_back(rng.sentence(0, 10));
  for (int k = 0; k < 10000; ++k) probe.push_back(rng.sentence(0, 10));
  const auto merges = learn_bpe(train, kDefaultMerges);
  expect(merges.size() > 1000 && merges.size() <= kDefaultMerges, std::to_string(merges.size()) + " merges");
  expect(learn_bpe(train, kDefaultMerges) == merges, "learning is not deterministic");
  for (const auto& s : probe) {
    expect(decode_bpe(apply_bpe(s, merges)) == s, "decode(apply(x)) != x for '" + s + "'");
    expect(decode_bpe(apply_bpe(s, MergeList{})) == s, "zero-merge round trip fails for '" + s + "'");
  }
  std::vector<std::string> words;
  for (int k = 0; k < 100; ++k) words.push_back(rng.word(1, 12));
  std::vector<std::size_t> previous(words.size(), SIZE_MAX);
  for (std::size_t n = 0; n <= merges.size(); n += std::max<std::size_t>(1, merges.size() / 50)) {
    const auto prefix = merges.prefix(n);
    for (std::size_t k = 0; k < words.size(); ++k) {
      const auto tokens = segment_word(words[k], prefix).size();
      expect(tokens <= previous[k], "more merges gave more tokens for '" + words[k] + "'");
      previous[k] = tokens;
    }
  }
  return std::to_string(merges.size()) + " merges, 10000 round trips";
}

std::string cosine_properties() {
  Random rng(1010);
  const std::vector<double> a = {1, 2, 2}, b = {2, 1, 2};
  expect(std::abs(cosine(a, b) - 8.0 / 9.0) <= 1e-12, "cos = " + num(cosine(a, b)));
  const std::vector<double> zero = {0, 0, 0};
  expect(cosine(zero, a) == 0.0 && cosine(zero, zero) == 0.0, "zero vector");
  for (int k = 0; k < 10000; ++k) {
    const std::size_t dim = rng.uniform(1, 128);
    Embedding u(dim), v(dim);
    for (auto& x : u) x = rng.real(-1, 1);
    for (auto& x : v) x = rng.real(-1, 1);
    const double c = cosine(u, v);
    expect(c == cosine(v, u), "not symmetric");
    expect(c >= -1.0 && c <= 1.0, "out of range: " + num(c));
    const double scale = std::exp(rng.real(-10, 10));
    Embedding su(u);
    for (auto& x : su) x *= scale;
    expect(std::abs(cosine(su, v) - c) <= 1e-9, "not scale invariant");
  }
  return "10000 random pairs";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"phrase-extraction-matches-brute-force", phrase_extraction},
      {"em-correctness", em_correctness},
      {"lexical-weight-example", lexical_weight_example},
      {"filter-laws", filter_laws},
      {"longest-unique-audit", longest_unique_audit},
      {"synthetic-recovery-and-count-identity", synthetic_recovery},
      {"determinism-across-workers", determinism},
      {"format-round-trips-10k", round_trips},
      {"bpe-round-trip-and-monotonicity", bpe},
      {"cosine-properties", cosine_properties},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    try {
      const std::string detail = check();
      std::cout << "PASS " << name << " (" << detail << ")\n";
    } catch (const Unmet& u) {
      ++failed;
      std::cout << "FAIL " << name << ": " << u.what << '\n';
    } catch (const std::exception& e) {
      ++failed;
      std::cout << "FAIL " << name << ": exception: " << e.what() << '\n';
    }
    std::cout.flush();
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
