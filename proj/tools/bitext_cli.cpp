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

// bitext: command-line front end over the libbitext C API.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bitext/bitext.h"

namespace {

struct ContextDeleter {
  void operator()(bitext_context* c) const { bitext_context_free(c); }
};
struct CorpusDeleter {
  void operator()(bitext_corpus* c) const { bitext_corpus_free(c); }
};
struct EmbedderDeleter {
  void operator()(bitext_embedder* e) const { bitext_embedder_free(e); }
};
using ContextPtr = std::unique_ptr<bitext_context, ContextDeleter>;
using CorpusPtr = std::unique_ptr<bitext_corpus, CorpusDeleter>;
using EmbedderPtr = std::unique_ptr<bitext_embedder, EmbedderDeleter>;

// Thrown to unwind with a status after the message has been printed.
struct Exit {
  int code;
};

struct Globals {
  std::string config;
  unsigned workers = 1;
  std::string report;
  std::vector<std::string> settings;
};

struct CorpusArgs {
  std::string src;
  std::string tgt;
  std::string tsv;
};

struct OutputArgs {
  std::string src;
  std::string tgt;
};

struct ProviderArgs {
  std::optional<std::string> kind;
  std::optional<std::size_t> dim;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> pairs;
  std::optional<std::string> embeddings;
  std::optional<std::string> endpoint;
  std::optional<std::size_t> batch_size;
};

void check(bitext_context* ctx, bitext_status status) {
  if (status == BITEXT_OK) return;
  std::fprintf(stderr, "bitext: error: %s\n", bitext_last_error(ctx));
  throw Exit{static_cast<int>(status)};
}

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void set(bitext_context* ctx, const std::string& key, const std::string& value) {
  check(ctx, bitext_set(ctx, key.c_str(), value.c_str()));
}

template <typename T>
void set_if(bitext_context* ctx, const std::string& key, const std::optional<T>& value) {
  if (!value) return;
  if constexpr (std::is_same_v<T, std::string>) {
    set(ctx, key, *value);
  } else if constexpr (std::is_floating_point_v<T>) {
    set(ctx, key, number(*value));
  } else {
    set(ctx, key, std::to_string(*value));
  }
}

void add_corpus_options(CLI::App* cmd, CorpusArgs& args) {
  auto* src = cmd->add_option("--src", args.src, "Source side, one sentence per line");
  auto* tgt = cmd->add_option("--tgt", args.tgt, "Target side, line-aligned with --src");
  auto* tsv = cmd->add_option("--tsv", args.tsv, "Pairs as src<TAB>tgt lines (instead of --src/--tgt)");
  src->needs(tgt);
  tgt->needs(src);
  tsv->excludes(src)->excludes(tgt);
}

void add_output_options(CLI::App* cmd, OutputArgs& out) {
  cmd->add_option("--out-src", out.src, "Output source file")->required();
  cmd->add_option("--out-tgt", out.tgt, "Output target file")->required();
}

void add_provider_options(CLI::App* cmd, ProviderArgs& p) {
  cmd->add_option("--provider", p.kind, "Embedding provider: mock, file or service")
      ->check(CLI::IsMember({"mock", "file", "service"}));
  cmd->add_option("--dim", p.dim, "Mock embedding dimension");
  cmd->add_option("--seed", p.seed, "Mock embedding seed");
  cmd->add_option("--pairs", p.pairs, "Mock paired mode: TSV of pairs that embed identically");
  cmd->add_option("--embeddings", p.embeddings, "Embedding file for the file provider");
  cmd->add_option("--endpoint", p.endpoint, "Embedding service URL");
  cmd->add_option("--batch-size", p.batch_size, "Texts per provider request");
}

void apply_provider(bitext_context* ctx, const ProviderArgs& p) {
  set_if(ctx, "provider.kind", p.kind);
  set_if(ctx, "provider.dim", p.dim);
  set_if(ctx, "provider.seed", p.seed);
  set_if(ctx, "provider.pairs", p.pairs);
  set_if(ctx, "provider.path", p.embeddings);
  set_if(ctx, "provider.endpoint", p.endpoint);
  set_if(ctx, "provider.batch_size", p.batch_size);
}

CorpusPtr read_corpus(bitext_context* ctx, const CorpusArgs& args) {
  if (args.tsv.empty() && args.src.empty()) {
    std::fprintf(stderr, "bitext: error: give a corpus with --src/--tgt or --tsv\n");
    throw Exit{BITEXT_ERR_VALIDATION};
  }
  bitext_corpus* c = nullptr;
  if (!args.tsv.empty()) {
    check(ctx, bitext_corpus_read_tsv(ctx, args.tsv.c_str(), &c));
  } else {
    check(ctx, bitext_corpus_read(ctx, args.src.c_str(), args.tgt.c_str(), &c));
  }
  return CorpusPtr(c);
}

void emit(const Globals& g, char* report) {
  if (report == nullptr) return;
  const std::string text(report);
  bitext_string_free(report);
  std::cout << text;
  std::cout.flush();
  if (!g.report.empty()) {
    std::ofstream out(g.report, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
      std::fprintf(stderr, "bitext: error: %s: cannot write report\n", g.report.c_str());
      throw Exit{BITEXT_ERR_IO};
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bitext: parallel corpus mining and filtering"};
  app.set_version_flag("--version", bitext_version());
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config, "Configuration file (INI) with defaults for every command")
      ->check(CLI::ExistingFile);
  app.add_option("--workers", g.workers, "Worker threads; never changes output")->check(CLI::PositiveNumber);
  app.add_option("--report", g.report, "Also write the key=value report to this file");
  app.add_option("--set", g.settings, "Override a configuration value: section.key=value (repeatable)");

  // stats
  CorpusArgs stats_in;
  auto* stats = app.add_subcommand("stats", "Pair/token counts and length histograms");
  add_corpus_options(stats, stats_in);

  // calibrate
  CorpusArgs cal_in;
  ProviderArgs cal_provider;
  double cal_margin = 0.0;
  auto* calibrate = app.add_subcommand("calibrate", "Mean similarity of a trusted reference corpus");
  add_corpus_options(calibrate, cal_in);
  add_provider_options(calibrate, cal_provider);
  calibrate->add_option("--margin", cal_margin, "Threshold = mean - margin");

  // filter-embed
  CorpusArgs fe_in;
  OutputArgs fe_out;
  ProviderArgs fe_provider;
  std::optional<double> fe_threshold;
  std::string fe_scores;
  auto* filter = app.add_subcommand("filter-embed", "Keep pairs whose embedding similarity reaches the threshold");
  add_corpus_options(filter, fe_in);
  add_output_options(filter, fe_out);
  add_provider_options(filter, fe_provider);
  filter->add_option("--threshold", fe_threshold, "Sentence similarity threshold in [-1,1]");
  filter->add_option("--scores", fe_scores, "Write id<TAB>similarity<TAB>src<TAB>tgt for every pair");

  // shared alignment model flags
  struct ModelArgs {
    std::optional<unsigned> iterations;
    std::optional<std::string> symmetrize;
    bool no_null = false;
    std::optional<std::size_t> max_len;
  };
  auto add_model_options = [](CLI::App* cmd, ModelArgs& m) {
    cmd->add_option("--iterations", m.iterations, "IBM Model 1 EM iterations");
    cmd->add_option("--symmetrize", m.symmetrize, "intersection, union or grow-diag-final-and");
    cmd->add_flag("--no-null", m.no_null, "Do not model alignment to NULL");
  };
  auto apply_model = [](bitext_context* ctx, const ModelArgs& m) {
    set_if(ctx, "phrase.em_iterations", m.iterations);
    set_if(ctx, "phrase.symmetrize", m.symmetrize);
    if (m.no_null) set(ctx, "phrase.use_null", "false");
    set_if(ctx, "phrase.max_len", m.max_len);
  };

  // align
  CorpusArgs al_in;
  ModelArgs al_model;
  std::string al_out, al_lex;
  auto* align = app.add_subcommand("align", "Word-align a corpus (Pharaoh i-j output)");
  add_corpus_options(align, al_in);
  add_model_options(align, al_model);
  align->add_option("-o,--output", al_out, "Alignment file")->required();
  align->add_option("--lex-prefix", al_lex, "Also write lexical tables <prefix>.s2t and <prefix>.t2s");

  // phrase-table
  CorpusArgs pt_in;
  ModelArgs pt_model;
  std::string pt_align, pt_out;
  auto* phrase = app.add_subcommand("phrase-table", "Extract and score a phrase table");
  add_corpus_options(phrase, pt_in);
  add_model_options(phrase, pt_model);
  phrase->add_option("--max-len", pt_model.max_len, "Maximum phrase length in tokens");
  phrase->add_option("--alignments", pt_align, "Use these alignments instead of aligning");
  phrase->add_option("-o,--output", pt_out, "Phrase table file")->required();

  // ppi
  CorpusArgs ppi_in;
  ModelArgs ppi_model;
  OutputArgs ppi_out;
  std::string ppi_table;
  std::optional<double> ppi_threshold, w_phi_ts, w_phi_st, w_lex_ts, w_lex_st;
  auto* ppi = app.add_subcommand("ppi", "Phrase pair injection: score filter + longest unique phrase pairs");
  add_corpus_options(ppi, ppi_in);
  add_model_options(ppi, ppi_model);
  add_output_options(ppi, ppi_out);
  ppi->add_option("--max-len", ppi_model.max_len, "Maximum phrase length in tokens");
  ppi->add_option("--table", ppi_table, "Read this phrase table instead of mining the corpus");
  ppi->add_option("--threshold", ppi_threshold, "Phrase score threshold in [0,1]");
  ppi->add_option("--w-phi-ts", w_phi_ts, "Weight of phi(tgt|src)");
  ppi->add_option("--w-phi-st", w_phi_st, "Weight of phi(src|tgt)");
  ppi->add_option("--w-lex-ts", w_lex_ts, "Weight of lex(tgt|src)");
  ppi->add_option("--w-lex-st", w_lex_st, "Weight of lex(src|tgt)");

  // recipe
  auto* recipe = app.add_subcommand("recipe", "Validate or run a corpus-construction recipe");
  recipe->require_subcommand(1);
  std::string rv_config, rr_config;
  auto* recipe_validate = recipe->add_subcommand("validate", "Report every problem of a recipe configuration");
  recipe_validate->add_option("config", rv_config, "Configuration file (default: --config)");
  auto* recipe_run = recipe->add_subcommand("run", "Run a recipe and write the output corpus");
  recipe_run->add_option("config", rr_config, "Configuration file (default: --config)");

  // bpe
  auto* bpe = app.add_subcommand("bpe", "Byte pair encoding");
  bpe->require_subcommand(1);
  std::vector<std::string> bl_inputs;
  std::size_t bl_merges = 16000;
  std::string bl_out;
  auto* bpe_learn = bpe->add_subcommand("learn", "Learn merges; several inputs are learned jointly");
  bpe_learn->add_option("-i,--input", bl_inputs, "Text file(s), one sentence per line")->required();
  bpe_learn->add_option("-m,--merges", bl_merges, "Number of merge operations");
  bpe_learn->add_option("-o,--output", bl_out, "Merge file")->required();
  std::string ba_codes, ba_in, ba_out;
  bool ba_decode = false;
  auto* bpe_apply = bpe->add_subcommand("apply", "Segment text with learned merges (or undo it)");
  bpe_apply->add_option("-c,--codes", ba_codes, "Merge file");
  bpe_apply->add_option("-i,--input", ba_in, "Input text")->required();
  bpe_apply->add_option("-o,--output", ba_out, "Output text")->required();
  bpe_apply->add_flag("-d,--decode", ba_decode, "Remove the @@ continuation markers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : BITEXT_ERR_VALIDATION;
  }

  ContextPtr owner(bitext_context_new());
  if (!owner) {
    std::fprintf(stderr, "bitext: error: out of memory\n");
    return BITEXT_ERR_INTERNAL;
  }
  bitext_context* ctx = owner.get();

  try {
    check(ctx, bitext_set_workers(ctx, g.workers));
    if (!g.config.empty()) check(ctx, bitext_set_config(ctx, g.config.c_str()));
    for (const auto& s : g.settings) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "bitext: error: --set expects section.key=value, got '%s'\n", s.c_str());
        throw Exit{BITEXT_ERR_VALIDATION};
      }
      set(ctx, s.substr(0, eq), s.substr(eq + 1));
    }

    char* report = nullptr;
    if (*stats) {
      auto corpus = read_corpus(ctx, stats_in);
      check(ctx, bitext_cmd_stats(ctx, corpus.get(), &report));
    } else if (*calibrate) {
      apply_provider(ctx, cal_provider);
      auto corpus = read_corpus(ctx, cal_in);
      bitext_embedder* e = nullptr;
      check(ctx, bitext_embedder_from_config(ctx, &e));
      EmbedderPtr embedder(e);
      check(ctx, bitext_cmd_calibrate(ctx, corpus.get(), embedder.get(), cal_margin, &report));
    } else if (*filter) {
      apply_provider(ctx, fe_provider);
      set_if(ctx, "thresholds.sentence", fe_threshold);
      auto corpus = read_corpus(ctx, fe_in);
      bitext_embedder* e = nullptr;
      check(ctx, bitext_embedder_from_config(ctx, &e));
      EmbedderPtr embedder(e);
      bitext_corpus* kept = nullptr;
      check(ctx, bitext_cmd_filter_embed(ctx, corpus.get(), embedder.get(), fe_scores.empty() ? nullptr : fe_scores.c_str(),
                                         &kept, &report));
      CorpusPtr kept_owner(kept);
      check(ctx, bitext_corpus_write(ctx, kept, fe_out.src.c_str(), fe_out.tgt.c_str()));
    } else if (*align) {
      apply_model(ctx, al_model);
      auto corpus = read_corpus(ctx, al_in);
      check(ctx, bitext_cmd_align(ctx, corpus.get(), al_out.c_str(), al_lex.empty() ? nullptr : al_lex.c_str(), &report));
    } else if (*phrase) {
      apply_model(ctx, pt_model);
      auto corpus = read_corpus(ctx, pt_in);
      check(ctx, bitext_cmd_phrase_table(ctx, corpus.get(), pt_align.empty() ? nullptr : pt_align.c_str(),
                                         pt_out.c_str(), &report));
    } else if (*ppi) {
      apply_model(ctx, ppi_model);
      set_if(ctx, "thresholds.phrase_score", ppi_threshold);
      set_if(ctx, "phrase.w_phi_ts", w_phi_ts);
      set_if(ctx, "phrase.w_phi_st", w_phi_st);
      set_if(ctx, "phrase.w_lex_ts", w_lex_ts);
      set_if(ctx, "phrase.w_lex_st", w_lex_st);
      CorpusPtr corpus;
      const bool has_corpus = !ppi_in.tsv.empty() || !ppi_in.src.empty();
      if (ppi_table.empty() == !has_corpus) {
        std::fprintf(stderr, "bitext: error: ppi needs exactly one of --table or a corpus (--src/--tgt or --tsv)\n");
        return BITEXT_ERR_VALIDATION;
      }
      if (has_corpus) corpus = read_corpus(ctx, ppi_in);
      bitext_corpus* phrases = nullptr;
      check(ctx, bitext_cmd_ppi(ctx, corpus.get(), ppi_table.empty() ? nullptr : ppi_table.c_str(), &phrases, &report));
      CorpusPtr phrases_owner(phrases);
      check(ctx, bitext_corpus_write(ctx, phrases, ppi_out.src.c_str(), ppi_out.tgt.c_str()));
    } else if (*recipe_validate || *recipe_run) {
      const std::string& path = *recipe_validate ? rv_config : rr_config;
      if (path.empty() && g.config.empty()) {
        std::fprintf(stderr, "bitext: error: no configuration given (positional argument or --config)\n");
        return BITEXT_ERR_VALIDATION;
      }
      const char* p = path.empty() ? nullptr : path.c_str();
      if (*recipe_validate) {
        const auto status = bitext_recipe_validate(ctx, p, &report);
        emit(g, report);
        report = nullptr;
        check(ctx, status);
      } else {
        check(ctx, bitext_recipe_run(ctx, p, &report));
      }
    } else if (*bpe_learn) {
      std::vector<const char*> inputs;
      for (const auto& s : bl_inputs) inputs.push_back(s.c_str());
      check(ctx, bitext_bpe_learn(ctx, inputs.data(), inputs.size(), bl_merges, bl_out.c_str(), &report));
    } else if (*bpe_apply) {
      if (ba_codes.empty() && !ba_decode) {
        std::fprintf(stderr, "bitext: error: bpe apply needs --codes (or --decode)\n");
        return BITEXT_ERR_VALIDATION;
      }
      check(ctx, bitext_bpe_apply(ctx, ba_codes.empty() ? nullptr : ba_codes.c_str(), ba_in.c_str(), ba_out.c_str(),
                                  ba_decode ? 1 : 0, &report));
    }
    emit(g, report);
  } catch (const Exit& e) {
    return e.code;
  }
  return BITEXT_OK;
}
