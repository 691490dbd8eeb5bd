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

#include "commands.hpp"

#include <sstream>

#include "bitext/alignment.hpp"
#include "bitext/bpe.hpp"
#include "bitext/error.hpp"
#include "bitext/lexical_table.hpp"
#include "bitext/parallel.hpp"
#include "bitext/phrase_table.hpp"
#include "bitext/pipeline.hpp"
#include "bitext/text.hpp"

namespace bitext::commands {

namespace fs = std::filesystem;

namespace {

ScoreOptions score_options(const PipelineConfig& s) {
  return ScoreOptions{.batch_size = s.provider.batch_size, .workers = s.workers};
}

Model1Options model1_options(const PipelineConfig& s) {
  return Model1Options{.iterations = s.em_iterations, .use_null = s.use_null, .workers = s.workers};
}

void put_histogram(std::ostringstream& out, const std::vector<std::size_t>& hist) {
  out << "[histogram]\nbins=" << hist.size() << "\nlower=-1\nupper=1\ncounts=";
  for (std::size_t k = 0; k < hist.size(); ++k) out << (k ? " " : "") << hist[k];
  out << '\n';
}

void require_threshold(double tau, double lo, double hi, const char* name) {
  if (!(tau >= lo && tau <= hi)) {
    throw ValidationError(std::string(name) + ": threshold out of range [" + format_significant(lo, 3) + "," +
                          format_significant(hi, 3) + "]: " + format_significant(tau, 6));
  }
}

struct LexPair {
  LexicalTable fwd;
  LexicalTable rev;
};

LexPair train_both(const PipelineConfig& s, const Corpus& corpus) {
  const auto options = model1_options(s);
  return {train_model1(corpus, Direction::src_to_tgt, options).table,
          train_model1(corpus, Direction::tgt_to_src, options).table};
}

}  // namespace

std::string stats(const Corpus& corpus) { return format_stats(corpus_stats(corpus)); }

std::string calibrate(const PipelineConfig& settings, const Corpus& reference, EmbeddingProvider& provider,
                      double margin) {
  const auto c = calibrate_threshold(reference, provider, margin, score_options(settings));
  std::ostringstream out;
  out << "[calibration]\n";
  out << "provider=" << provider.fingerprint() << '\n';
  out << "count=" << c.count << '\n';
  out << "mean=" << format_fixed(c.mean, 6) << '\n';
  out << "stddev=" << format_fixed(c.stddev, 6) << '\n';
  out << "min=" << format_fixed(c.min, 6) << '\n';
  out << "max=" << format_fixed(c.max, 6) << '\n';
  out << "margin=" << format_shortest(margin) << '\n';
  out << "threshold=" << format_fixed(c.threshold, 6) << '\n';
  return out.str();
}

std::string filter_embed(const PipelineConfig& settings, const Corpus& corpus, EmbeddingProvider& provider,
                         const std::optional<fs::path>& scores_path, Corpus& kept) {
  require_threshold(settings.tau_sentence, -1.0, 1.0, "thresholds.sentence");
  const StageCache cache(settings.cache_dir);
  const auto scored = score_cached(corpus, provider, score_options(settings), cache);
  kept = filter_by_threshold(scored, settings.tau_sentence, corpus.name + ".filtered");
  if (scores_path) write_scored_pairs(scored, *scores_path);
  std::ostringstream out;
  out << "[filter]\n";
  out << "provider=" << provider.fingerprint() << '\n';
  out << "threshold=" << format_shortest(settings.tau_sentence) << '\n';
  out << "input=" << corpus.size() << '\n';
  out << "kept=" << kept.size() << '\n';
  out << "dropped=" << corpus.size() - kept.size() << '\n';
  put_histogram(out, similarity_histogram(scored));
  return out.str();
}

std::string align(const PipelineConfig& settings, const Corpus& corpus, const fs::path& out_path,
                  const std::optional<fs::path>& lex_prefix) {
  const auto lex = train_both(settings, corpus);
  const auto alignments =
      align_corpus(corpus, lex.fwd, lex.rev, settings.use_null, settings.symmetrization, settings.workers);
  write_alignments(alignments, out_path);
  if (lex_prefix) {
    write_lexical_table(lex.fwd, fs::path(lex_prefix->string() + ".s2t"));
    write_lexical_table(lex.rev, fs::path(lex_prefix->string() + ".t2s"));
  }
  std::size_t links = 0;
  for (const auto& a : alignments) links += a.size();
  std::ostringstream out;
  out << "[align]\n";
  out << "pairs=" << corpus.size() << '\n';
  out << "links=" << links << '\n';
  out << "em_iterations=" << settings.em_iterations << '\n';
  out << "use_null=" << (settings.use_null ? "true" : "false") << '\n';
  out << "symmetrize=" << to_string(settings.symmetrization) << '\n';
  out << "lex_s2t_entries=" << lex.fwd.entry_count() << '\n';
  out << "lex_t2s_entries=" << lex.rev.entry_count() << '\n';
  return out.str();
}

std::string phrase_table(const PipelineConfig& settings, const Corpus& corpus,
                         const std::optional<fs::path>& alignments_path, const fs::path& out_path) {
  const auto lex = train_both(settings, corpus);
  const auto alignments =
      alignments_path ? read_alignments(*alignments_path, corpus)
                      : align_corpus(corpus, lex.fwd, lex.rev, settings.use_null, settings.symmetrization,
                                     settings.workers);
  const auto table = build_phrase_table(corpus, alignments, lex.fwd, lex.rev,
                                        PhraseTableOptions{.max_len = settings.max_len, .workers = settings.workers});
  write_phrase_table(table, out_path);
  std::ostringstream out;
  out << "[phrase_table]\n";
  out << "pairs=" << corpus.size() << '\n';
  out << "alignments=" << (alignments_path ? "file" : "computed") << '\n';
  out << "max_len=" << settings.max_len << '\n';
  out << "entries=" << table.size() << '\n';
  return out.str();
}

std::string ppi(const PipelineConfig& settings, const Corpus* corpus, const std::optional<fs::path>& table_path,
                Corpus& phrases) {
  settings.phrase_weights.validate();
  std::size_t entries = 0, above = 0;
  std::vector<PhraseTableEntry> selected;
  if (table_path) {
    const auto table = read_phrase_table(*table_path);
    const auto filtered = score_filter(table, settings.phrase_weights);
    entries = table.size();
    above = filtered.size();
    selected = longest_unique(filtered);
  } else {
    if (corpus == nullptr) throw ValidationError("ppi needs a phrase table or a corpus");
    const PhraseMiningOptions options{.em_iterations = settings.em_iterations,
                                      .use_null = settings.use_null,
                                      .symmetrization = settings.symmetrization,
                                      .max_len = settings.max_len,
                                      .weights = settings.phrase_weights,
                                      .workers = settings.workers};
    auto mined = mine_phrases(*corpus, options, StageCache(settings.cache_dir));
    entries = mined.table.size();
    above = mined.above_threshold;
    selected = std::move(mined.selected);
  }
  phrases = to_corpus(selected, "phrases");
  const auto& w = settings.phrase_weights;
  std::ostringstream out;
  out << "[ppi]\n";
  out << "threshold=" << format_shortest(w.threshold) << '\n';
  out << "weights=" << format_shortest(w.phi_ts) << ' ' << format_shortest(w.phi_st) << ' '
      << format_shortest(w.lex_ts) << ' ' << format_shortest(w.lex_st) << '\n';
  out << "table_entries=" << entries << '\n';
  out << "above_threshold=" << above << '\n';
  out << "longest_unique=" << selected.size() << '\n';
  return out.str();
}

std::string recipe_validate(const PipelineConfig& config, bool& valid) {
  const auto problems = validate_config(config);
  valid = problems.empty();
  std::ostringstream out;
  out << "[validate]\n";
  if (!config.origin.empty()) out << "config=" << config.origin.string() << '\n';
  out << "recipe=" << config.recipe << '\n';
  out << "valid=" << (valid ? "true" : "false") << '\n';
  out << "problems=" << problems.size() << '\n';
  for (const auto& p : problems) out << "problem=" << p << '\n';
  return out.str();
}

std::string recipe_run(const PipelineConfig& config) { return run_recipe(config).report.format(); }

std::string bpe_learn(std::span<const fs::path> inputs, std::size_t n_merges, const fs::path& merges_path) {
  if (inputs.empty()) throw ValidationError("bpe learn: no input files");
  std::vector<std::string> lines;
  for (const auto& p : inputs) {
    auto part = read_lines(p);
    lines.insert(lines.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  if (lines.empty()) throw ValidationError("bpe learn: empty input");
  const auto merges = learn_bpe(lines, n_merges);
  write_merges(merges, merges_path);
  std::ostringstream out;
  out << "[bpe_learn]\n";
  out << "inputs=" << inputs.size() << '\n';
  out << "mode=" << (inputs.size() > 1 ? "joint" : "single") << '\n';
  out << "lines=" << lines.size() << '\n';
  out << "requested_merges=" << n_merges << '\n';
  out << "merges=" << merges.size() << '\n';
  return out.str();
}

std::string bpe_apply(const PipelineConfig& settings, const std::optional<fs::path>& merges_path,
                      const fs::path& in_path, const fs::path& out_path, bool decode) {
  MergeList merges;
  if (!decode) {
    if (!merges_path) throw ValidationError("bpe apply: merge file required");
    merges = read_merges(*merges_path);
  }
  const auto lines = read_lines(in_path);
  std::vector<std::string> result(lines.size());
  const Chunking chunks{lines.size(), 4096};
  parallel_for(chunks.count(), settings.workers, [&](std::size_t c) {
    for (std::size_t k = chunks.begin(c); k < chunks.end(c); ++k) {
      result[k] = decode ? decode_bpe(lines[k]) : apply_bpe(lines[k], merges);
    }
  });
  write_lines(result, out_path);
  std::size_t tokens = 0;
  for (const auto& l : result) tokens += tokenize(l).size();
  std::ostringstream out;
  out << "[bpe_apply]\n";
  out << "mode=" << (decode ? "decode" : "encode") << '\n';
  if (!decode) out << "merges=" << merges.size() << '\n';
  out << "lines=" << lines.size() << '\n';
  out << "tokens=" << tokens << '\n';
  return out.str();
}

}  // namespace bitext::commands
