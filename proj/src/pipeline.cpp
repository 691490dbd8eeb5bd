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

#include "bitext/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "bitext/error.hpp"
#include "bitext/parallel.hpp"
#include "bitext/providers.hpp"
#include "bitext/text.hpp"

namespace bitext {

namespace fs = std::filesystem;

Corpus load_source(const CorpusSource& source, bool normalize_text_, bool dedup_pairs, std::size_t* raw_pairs) {
  Corpus c = source.tsv.empty() ? read_parallel(source.src, source.tgt) : read_tsv(source.tsv);
  if (raw_pairs) *raw_pairs = c.size();
  if (normalize_text_) c = normalize(c);
  if (dedup_pairs) c = dedup(c);
  c.name = source.name;
  c.weight = source.weight;
  return c;
}

Corpus load_role(const PipelineConfig& config, CorpusRole role, std::size_t* raw_pairs) {
  std::vector<Corpus> parts;
  if (raw_pairs) *raw_pairs = 0;
  for (const auto& source : config.corpora) {
    if (source.role != role) continue;
    std::size_t raw = 0;
    parts.push_back(load_source(source, config.normalize, config.dedup, &raw));
    if (raw_pairs) *raw_pairs += raw;
  }
  if (parts.empty()) {
    Corpus empty;
    empty.name = std::string(to_string(role));
    return empty;
  }
  return concat_weighted(parts);
}

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& config, bool normalize_pairs) {
  if (config.kind == "mock") {
    auto mock = std::make_unique<MockEmbedder>(config.dim, config.seed);
    if (!config.pairs.empty()) {
      Corpus pairs = read_tsv(config.pairs);
      if (normalize_pairs) pairs = normalize(pairs);
      mock->register_pairs(pairs);
    }
    return mock;
  }
  if (config.kind == "file") return std::make_unique<FileEmbedder>(config.path);
  if (config.kind == "service") {
    return std::make_unique<ServiceEmbedder>(config.endpoint,
                                             ServiceOptions{.timeout_ms = config.timeout_ms, .retries = config.retries});
  }
  throw ValidationError("unknown provider kind '" + config.kind + "'");
}

StageCache::StageCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path StageCache::slot(const std::string& kind, std::uint64_t key) const {
  return dir_ / (kind + "-" + hex64(key) + ".txt");
}

bool StageCache::has(const std::string& kind, std::uint64_t key) const {
  if (!enabled()) return false;
  std::error_code ec;
  return fs::is_regular_file(slot(kind, key), ec);
}

std::uint64_t corpus_digest(const Corpus& corpus) {
  std::uint64_t h = fnv1a64(std::to_string(corpus.size()));
  for (const auto& p : corpus.pairs) {
    h = fnv1a64(p.src, h);
    h = fnv1a64("\t", h);
    h = fnv1a64(p.tgt, h);
    h = fnv1a64("\n", h);
  }
  return h;
}

std::vector<ScoredPair> score_cached(const Corpus& corpus, EmbeddingProvider& provider, const ScoreOptions& options,
                                     const StageCache& cache, bool* hit) {
  if (hit) *hit = false;
  const std::uint64_t key = fnv1a64(provider.fingerprint(), corpus_digest(corpus));
  if (cache.has("similarity", key)) {
    try {
      auto cached = read_scored_pairs(cache.slot("similarity", key));
      bool same = cached.size() == corpus.size();
      for (std::size_t k = 0; same && k < cached.size(); ++k) {
        same = cached[k].pair.src == corpus.pairs[k].src && cached[k].pair.tgt == corpus.pairs[k].tgt;
        cached[k].pair.id = corpus.pairs[k].id;
      }
      if (same) {
        if (hit) *hit = true;
        return cached;
      }
    } catch (const Error&) {
      // unreadable cache entry: recompute and overwrite
    }
  }
  auto scored = score_pairs(corpus, provider, options);
  cache.store("similarity", key, [&](const fs::path& p) { write_scored_pairs(scored, p, -1); });
  return scored;
}

std::vector<AlignmentMatrix> align_corpus(const Corpus& corpus, const LexicalTable& lex_fwd,
                                          const LexicalTable& lex_rev, bool use_null, Symmetrization heuristic,
                                          unsigned workers) {
  std::vector<AlignmentMatrix> out(corpus.size());
  const ViterbiOptions options{.use_null = use_null};
  const Chunking chunks{corpus.size(), 1024};
  parallel_for(chunks.count(), workers, [&](std::size_t c) {
    for (std::size_t k = chunks.begin(c); k < chunks.end(c); ++k) {
      const auto& pair = corpus.pairs[k];
      out[k] = symmetrize(viterbi_align(pair, lex_fwd, options), viterbi_align(pair, lex_rev, options), heuristic);
    }
  });
  return out;
}

PhraseMiningResult mine_phrases(const Corpus& corpus, const PhraseMiningOptions& options, const StageCache& cache) {
  options.weights.validate();
  PhraseMiningResult r;
  if (corpus.empty()) return r;

  const std::uint64_t lex_key =
      fnv1a64("model1|iterations=" + std::to_string(options.em_iterations) + "|null=" + (options.use_null ? "1" : "0"),
              corpus_digest(corpus));
  if (cache.has("lex-s2t", lex_key) && cache.has("lex-t2s", lex_key)) {
    try {
      r.lex_fwd = read_lexical_table(cache.slot("lex-s2t", lex_key), Direction::src_to_tgt);
      r.lex_rev = read_lexical_table(cache.slot("lex-t2s", lex_key), Direction::tgt_to_src);
      r.lex_cached = true;
    } catch (const Error&) {
      r.lex_cached = false;
    }
  }
  if (!r.lex_cached) {
    const Model1Options m1{.iterations = options.em_iterations, .use_null = options.use_null, .workers = options.workers};
    r.lex_fwd = train_model1(corpus, Direction::src_to_tgt, m1).table;
    r.lex_rev = train_model1(corpus, Direction::tgt_to_src, m1).table;
    cache.store("lex-s2t", lex_key, [&](const fs::path& p) { write_lexical_table(r.lex_fwd, p, true); });
    cache.store("lex-t2s", lex_key, [&](const fs::path& p) { write_lexical_table(r.lex_rev, p, true); });
  }

  r.alignments = align_corpus(corpus, r.lex_fwd, r.lex_rev, options.use_null, options.symmetrization, options.workers);

  const std::uint64_t table_key = fnv1a64(
      "phrases|sym=" + std::string(to_string(options.symmetrization)) + "|max_len=" + std::to_string(options.max_len),
      lex_key);
  if (cache.has("phrases", table_key)) {
    try {
      r.table = read_phrase_table(cache.slot("phrases", table_key));
      r.table_cached = true;
    } catch (const Error&) {
      r.table_cached = false;
    }
  }
  if (!r.table_cached) {
    r.table = build_phrase_table(corpus, r.alignments, r.lex_fwd, r.lex_rev,
                                 PhraseTableOptions{.max_len = options.max_len, .workers = options.workers});
    cache.store("phrases", table_key, [&](const fs::path& p) { write_phrase_table(r.table, p, true); });
  }

  const auto above = score_filter(r.table, options.weights);
  r.above_threshold = above.size();
  r.selected = longest_unique(above);
  return r;
}

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void put_histogram(std::ostringstream& out, const char* name, const std::vector<std::size_t>& hist) {
  out << "[histogram." << name << "]\n";
  out << "bins=" << hist.size() << "\nlower=-1\nupper=1\ncounts=";
  for (std::size_t k = 0; k < hist.size(); ++k) out << (k ? " " : "") << hist[k];
  out << '\n';
}

}  // namespace

std::string RunReport::format(bool with_timing) const {
  std::ostringstream out;
  out << "[run]\n";
  out << "recipe=" << recipe << '\n';
  out << "output_count=" << output_count << '\n';
  out << "output_count_human=" << format_count(output_count) << '\n';
  out << "output_digest=" << output_digest << '\n';
  if (!output_src.empty()) out << "output_src=" << output_src.string() << "\noutput_tgt=" << output_tgt.string() << '\n';
  if (!provider.empty()) out << "provider=" << provider << '\n';

  out << "[thresholds]\n";
  out << "sentence=" << format_shortest(tau_sentence) << '\n';
  out << "phrase_score=" << format_shortest(tau_phrase_score) << '\n';
  out << "phrase_labse=" << format_shortest(tau_phrase_labse) << '\n';

  out << "[stages]\n";
  for (const auto& s : stages) {
    out << s.name << ".input=" << s.input << '\n';
    out << s.name << ".output=" << s.output << '\n';
  }

  out << "[composition]\n";
  std::size_t total = 0;
  std::string formula;
  for (const auto& [name, n] : components) {
    out << name << '=' << n << '\n';
    total += n;
    formula += (formula.empty() ? "" : "+") + std::to_string(n);
  }
  out << "sum=" << formula << '=' << total << '\n';
  out << "identity=" << (total == output_count ? "ok" : "VIOLATED") << '\n';

  if (!sentence_histogram.empty()) put_histogram(out, "sentence", sentence_histogram);
  if (!phrase_histogram.empty()) put_histogram(out, "phrase", phrase_histogram);

  if (calibration) {
    out << "[calibration]\n";
    out << "count=" << calibration->count << '\n';
    out << "mean=" << format_fixed(calibration->mean, 6) << '\n';
    out << "stddev=" << format_fixed(calibration->stddev, 6) << '\n';
    out << "min=" << format_fixed(calibration->min, 6) << '\n';
    out << "max=" << format_fixed(calibration->max, 6) << '\n';
    out << "threshold=" << format_fixed(calibration->threshold, 6) << '\n';
  }

  if (with_timing) {
    out << "[timing]\n";
    for (const auto& [stage, s] : seconds) out << stage << ".seconds=" << format_fixed(s, 6) << '\n';
    for (const auto& [stage, event] : cache_events) out << "cache." << stage << '=' << event << '\n';
  }
  return out.str();
}

RunResult run_recipe(const PipelineConfig& config, EmbeddingProvider* provider) {
  require_valid(config);
  const Recipe recipe = *parse_recipe(config.recipe);
  const RecipeParts parts = parts_of(recipe);
  const StageCache cache(config.cache_dir);

  RunResult result;
  RunReport& report = result.report;
  report.recipe = config.recipe;
  report.tau_sentence = config.tau_sentence;
  report.tau_phrase_score = config.phrase_weights.threshold;
  report.tau_phrase_labse = config.tau_phrase_labse;

  auto timed_load = [&](CorpusRole role) {
    const Stopwatch sw;
    std::size_t raw = 0;
    Corpus c = load_role(config, role, &raw);
    report.seconds.emplace_back(std::string(to_string(role)), sw.seconds());
    report.stages.push_back({std::string(to_string(role)), raw, c.size()});
    c.weight = 1;
    return c;
  };

  Corpus parallel = timed_load(CorpusRole::parallel);
  Corpus pseudo;
  if (parts.needs_pseudo()) pseudo = timed_load(CorpusRole::pseudo);

  const bool has_calibration = std::any_of(config.corpora.begin(), config.corpora.end(),
                                           [](const CorpusSource& s) { return s.role == CorpusRole::calibration; });
  std::unique_ptr<EmbeddingProvider> owned;
  if (provider == nullptr && (parts.needs_provider() || has_calibration)) {
    const Stopwatch sw;
    owned = make_provider(config.provider, config.normalize);
    provider = owned.get();
    report.seconds.emplace_back("provider", sw.seconds());
  }
  if (provider != nullptr && (parts.needs_provider() || has_calibration)) report.provider = provider->fingerprint();
  const ScoreOptions score_options{.batch_size = config.provider.batch_size, .workers = config.workers};

  if (has_calibration) {
    const Corpus reference = timed_load(CorpusRole::calibration);
    const Stopwatch sw;
    bool hit = false;
    const auto scored = score_cached(reference, *provider, score_options, cache, &hit);
    std::vector<double> sims;
    for (const auto& s : scored) sims.push_back(s.similarity);
    if (!sims.empty()) report.calibration = summarize_similarities(sims);
    report.seconds.emplace_back("calibration_scores", sw.seconds());
    report.cache_events.emplace_back("calibration_scores", hit ? "hit" : "miss");
  }

  std::vector<Corpus> components;
  components.push_back(parallel);
  components.back().name = "parallel";

  if (parts.pseudo) {
    components.push_back(pseudo);
    components.back().name = "pseudo";
  }

  if (parts.sentences) {
    const Stopwatch sw;
    bool hit = false;
    const auto scored = score_cached(pseudo, *provider, score_options, cache, &hit);
    Corpus kept = filter_by_threshold(scored, config.tau_sentence, "sentences");
    report.sentence_histogram = similarity_histogram(scored);
    report.stages.push_back({"sentence_filter", pseudo.size(), kept.size()});
    report.seconds.emplace_back("sentence_filter", sw.seconds());
    report.cache_events.emplace_back("sentence_scores", hit ? "hit" : "miss");
    components.push_back(std::move(kept));
  }

  if (parts.phrases || parts.filtered_phrases) {
    const Stopwatch sw;
    const PhraseMiningOptions options{.em_iterations = config.em_iterations,
                                      .use_null = config.use_null,
                                      .symmetrization = config.symmetrization,
                                      .max_len = config.max_len,
                                      .weights = config.phrase_weights,
                                      .workers = config.workers};
    const auto mined = mine_phrases(pseudo, options, cache);
    report.stages.push_back({"phrase_table", pseudo.size(), mined.table.size()});
    report.stages.push_back({"phrase_score_filter", mined.table.size(), mined.above_threshold});
    report.stages.push_back({"longest_unique", mined.above_threshold, mined.selected.size()});
    report.seconds.emplace_back("phrase_mining", sw.seconds());
    report.cache_events.emplace_back("lexical_tables", mined.lex_cached ? "hit" : "miss");
    report.cache_events.emplace_back("phrase_table", mined.table_cached ? "hit" : "miss");
    Corpus phrases = to_corpus(mined.selected, "phrases");

    if (parts.filtered_phrases) {
      const Stopwatch sw2;
      bool hit = false;
      const auto scored = score_cached(phrases, *provider, score_options, cache, &hit);
      Corpus kept = filter_by_threshold(scored, config.tau_phrase_labse, "filtered_phrases");
      report.phrase_histogram = similarity_histogram(scored);
      report.stages.push_back({"phrase_labse_filter", phrases.size(), kept.size()});
      report.seconds.emplace_back("phrase_labse_filter", sw2.seconds());
      report.cache_events.emplace_back("phrase_scores", hit ? "hit" : "miss");
      components.push_back(std::move(kept));
    } else {
      components.push_back(std::move(phrases));
    }
  }

  for (auto& c : components) {
    c.weight = 1;
    report.components.emplace_back(c.name, c.size());
  }
  result.output = concat_weighted(components);
  result.output.name = config.recipe;
  report.output_count = result.output.size();
  report.output_digest = hex64(corpus_digest(result.output));

  if (!config.output_src.empty()) {
    const Stopwatch sw;
    write_parallel(result.output, config.output_src, config.output_tgt);
    report.output_src = config.output_src;
    report.output_tgt = config.output_tgt;
    report.seconds.emplace_back("write", sw.seconds());
  }
  return result;
}

namespace {

constexpr std::size_t kLengthBucket = 10;
constexpr std::size_t kLengthBuckets = 11;  // last bucket is open-ended

std::vector<std::pair<std::string, std::size_t>> length_buckets() {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (std::size_t b = 0; b + 1 < kLengthBuckets; ++b) {
    out.emplace_back(std::to_string(b * kLengthBucket) + "-" + std::to_string((b + 1) * kLengthBucket - 1), 0);
  }
  out.emplace_back(std::to_string((kLengthBuckets - 1) * kLengthBucket) + "+", 0);
  return out;
}

std::size_t count_tokens(std::string_view text) {
  std::size_t n = 0;
  bool in_token = false;
  for (char ch : text) {
    const bool blank = ch == ' ' || ch == '\t';
    if (!blank && !in_token) ++n;
    in_token = !blank;
  }
  return n;
}

}  // namespace

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  s.name = corpus.name;
  s.pairs = corpus.size();
  if (corpus.empty()) return s;
  s.src_lengths = length_buckets();
  s.tgt_lengths = length_buckets();
  s.length_ratios = {{"<0.5", 0}, {"0.5-0.8", 0}, {"0.8-1.25", 0}, {"1.25-2", 0}, {">=2", 0}, {"undefined", 0}};
  static constexpr double kRatioEdges[] = {0.5, 0.8, 1.25, 2.0};
  for (const auto& p : corpus.pairs) {
    const std::size_t ns = count_tokens(p.src);
    const std::size_t nt = count_tokens(p.tgt);
    s.src_tokens += ns;
    s.tgt_tokens += nt;
    ++s.src_lengths[std::min(ns / kLengthBucket, kLengthBuckets - 1)].second;
    ++s.tgt_lengths[std::min(nt / kLengthBucket, kLengthBuckets - 1)].second;
    if (ns == 0 || nt == 0) {
      ++s.length_ratios.back().second;
      continue;
    }
    const double r = static_cast<double>(ns) / static_cast<double>(nt);
    std::size_t b = 0;
    while (b < std::size(kRatioEdges) && r >= kRatioEdges[b]) ++b;
    ++s.length_ratios[b].second;
  }
  return s;
}

std::string format_stats(const CorpusStats& s) {
  std::ostringstream out;
  out << "[stats]\n";
  out << "name=" << s.name << '\n';
  out << "pairs=" << s.pairs << '\n';
  out << "pairs_human=" << format_count(s.pairs) << '\n';
  out << "src_tokens=" << s.src_tokens << '\n';
  out << "src_tokens_human=" << format_count(s.src_tokens) << '\n';
  out << "tgt_tokens=" << s.tgt_tokens << '\n';
  out << "tgt_tokens_human=" << format_count(s.tgt_tokens) << '\n';
  auto section = [&out](const char* name, const std::vector<std::pair<std::string, std::size_t>>& hist) {
    out << '[' << name << "]\n";
    for (const auto& [label, n] : hist) out << label << '=' << n << '\n';
  };
  section("length.src", s.src_lengths);
  section("length.tgt", s.tgt_lengths);
  section("length_ratio", s.length_ratios);
  return out.str();
}

}  // namespace bitext
