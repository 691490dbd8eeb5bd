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

#include "bitext/bitext.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "bitext/config.hpp"
#include "bitext/corpus.hpp"
#include "bitext/embedding.hpp"
#include "bitext/error.hpp"
#include "bitext/pipeline.hpp"
#include "bitext/providers.hpp"
#include "bitext/text.hpp"
#include "commands.hpp"

#ifndef BITEXT_VERSION_STRING
#define BITEXT_VERSION_STRING "0.0.0"
#endif

namespace fs = std::filesystem;

struct bitext_context {
  unsigned workers = 1;
  std::string config_path;
  std::vector<bitext::ConfigOverride> overrides;
  std::string last_error;

  bitext::PipelineConfig config(const char* path = nullptr) const {
    const std::string p = path != nullptr ? std::string(path) : config_path;
    auto c = p.empty() ? bitext::parse_config("", fs::current_path(), overrides) : bitext::load_config(p, overrides);
    c.workers = workers;
    return c;
  }

  // Settings for single-stage commands: value problems are fatal here,
  // whole-recipe checks are not.
  bitext::PipelineConfig settings() const {
    auto c = config();
    if (!c.load_issues.empty()) {
      std::string msg = "invalid configuration:";
      for (const auto& issue : c.load_issues) msg += "\n  " + issue;
      throw bitext::ValidationError(msg);
    }
    return c;
  }
};

struct bitext_corpus {
  bitext::Corpus corpus;
};

struct bitext_embedder {
  std::unique_ptr<bitext::EmbeddingProvider> provider;
  bitext::MockEmbedder* mock = nullptr;  // set when provider is a mock
};

namespace {

template <typename Body>
bitext_status guarded(bitext_context* ctx, Body&& body) {
  if (ctx == nullptr) return BITEXT_ERR_VALIDATION;
  try {
    body();
    ctx->last_error.clear();
    return BITEXT_OK;
  } catch (const bitext::Error& e) {
    ctx->last_error = e.what();
    return static_cast<bitext_status>(e.kind());
  } catch (const fs::filesystem_error& e) {
    ctx->last_error = e.what();
    return BITEXT_ERR_IO;
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return BITEXT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return BITEXT_ERR_INTERNAL;
  } catch (...) {
    ctx->last_error = "unknown failure";
    return BITEXT_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw bitext::ValidationError(std::string(what) + " must not be NULL");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void hand_out(char** report, const std::string& text) {
  if (report != nullptr) *report = duplicate(text);
}

std::optional<fs::path> optional_path(const char* p) {
  if (p == nullptr || *p == '\0') return std::nullopt;
  return fs::path(p);
}

bitext_embedder* wrap(std::unique_ptr<bitext::EmbeddingProvider> provider) {
  auto e = std::make_unique<bitext_embedder>();
  e->mock = dynamic_cast<bitext::MockEmbedder*>(provider.get());
  e->provider = std::move(provider);
  return e.release();
}

}  // namespace

extern "C" {

const char* bitext_version(void) { return BITEXT_VERSION_STRING; }

bitext_context* bitext_context_new(void) { return new (std::nothrow) bitext_context(); }

void bitext_context_free(bitext_context* ctx) { delete ctx; }

const char* bitext_last_error(const bitext_context* ctx) {
  return ctx == nullptr ? "null context" : ctx->last_error.c_str();
}

bitext_status bitext_set_workers(bitext_context* ctx, unsigned workers) {
  return guarded(ctx, [&] {
    if (workers == 0) throw bitext::ValidationError("workers must be >= 1");
    ctx->workers = workers;
  });
}

bitext_status bitext_set_config(bitext_context* ctx, const char* path) {
  return guarded(ctx, [&] {
    if (path != nullptr && *path != '\0') {
      std::error_code ec;
      if (!fs::is_regular_file(path, ec)) throw bitext::IoError(path, "config file not found");
    }
    ctx->config_path = path == nullptr ? "" : path;
  });
}

bitext_status bitext_set(bitext_context* ctx, const char* key, const char* value) {
  return guarded(ctx, [&] {
    require(key, "key");
    require(value, "value");
    const std::string k(key);
    const auto dot = k.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == k.size()) {
      throw bitext::ValidationError("configuration key must be 'section.key', got '" + k + "'");
    }
    ctx->overrides.emplace_back(k, value);
  });
}

bitext_status bitext_corpus_read(bitext_context* ctx, const char* src_path, const char* tgt_path,
                                 bitext_corpus** out) {
  return guarded(ctx, [&] {
    require(src_path, "src_path");
    require(tgt_path, "tgt_path");
    require(out, "out");
    *out = new bitext_corpus{bitext::read_parallel(src_path, tgt_path)};
  });
}

bitext_status bitext_corpus_read_tsv(bitext_context* ctx, const char* path, bitext_corpus** out) {
  return guarded(ctx, [&] {
    require(path, "path");
    require(out, "out");
    *out = new bitext_corpus{bitext::read_tsv(path)};
  });
}

bitext_corpus* bitext_corpus_new(void) { return new (std::nothrow) bitext_corpus(); }

bitext_status bitext_corpus_add(bitext_context* ctx, bitext_corpus* corpus, const char* src, const char* tgt) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(src, "src");
    require(tgt, "tgt");
    if (bitext::contains_line_break(src) || bitext::contains_line_break(tgt)) {
      throw bitext::ValidationError("a sentence must not contain a line break");
    }
    corpus->corpus.add(src, tgt);
  });
}

size_t bitext_corpus_size(const bitext_corpus* corpus) { return corpus == nullptr ? 0 : corpus->corpus.size(); }

bitext_status bitext_corpus_get(bitext_context* ctx, const bitext_corpus* corpus, size_t index, const char** src,
                                const char** tgt) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    if (index >= corpus->corpus.size()) {
      throw bitext::ValidationError("index " + std::to_string(index) + " out of range (size " +
                                    std::to_string(corpus->corpus.size()) + ")");
    }
    const auto& p = corpus->corpus.pairs[index];
    if (src != nullptr) *src = p.src.c_str();
    if (tgt != nullptr) *tgt = p.tgt.c_str();
  });
}

bitext_status bitext_corpus_write(bitext_context* ctx, const bitext_corpus* corpus, const char* src_path,
                                  const char* tgt_path) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(src_path, "src_path");
    require(tgt_path, "tgt_path");
    bitext::write_parallel(corpus->corpus, src_path, tgt_path);
  });
}

void bitext_corpus_free(bitext_corpus* corpus) { delete corpus; }

bitext_status bitext_embedder_mock(bitext_context* ctx, size_t dim, uint64_t seed, bitext_embedder** out) {
  return guarded(ctx, [&] {
    require(out, "out");
    *out = wrap(std::make_unique<bitext::MockEmbedder>(dim, seed));
  });
}

bitext_status bitext_embedder_register_pair(bitext_context* ctx, bitext_embedder* embedder, const char* src,
                                            const char* tgt) {
  return guarded(ctx, [&] {
    require(embedder, "embedder");
    require(src, "src");
    require(tgt, "tgt");
    if (embedder->mock == nullptr) throw bitext::ValidationError("pairs can only be registered with a mock embedder");
    embedder->mock->register_pair(src, tgt);
  });
}

bitext_status bitext_embedder_file(bitext_context* ctx, const char* path, bitext_embedder** out) {
  return guarded(ctx, [&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(std::make_unique<bitext::FileEmbedder>(fs::path(path)));
  });
}

bitext_status bitext_embedder_service(bitext_context* ctx, const char* endpoint, bitext_embedder** out) {
  return guarded(ctx, [&] {
    require(endpoint, "endpoint");
    require(out, "out");
    const auto provider = ctx->settings().provider;
    *out = wrap(std::make_unique<bitext::ServiceEmbedder>(
        endpoint, bitext::ServiceOptions{.timeout_ms = provider.timeout_ms, .retries = provider.retries}));
  });
}

bitext_status bitext_embedder_from_config(bitext_context* ctx, bitext_embedder** out) {
  return guarded(ctx, [&] {
    require(out, "out");
    const auto settings = ctx->settings();
    *out = wrap(bitext::make_provider(settings.provider, settings.normalize));
  });
}

size_t bitext_embedder_dim(const bitext_embedder* embedder) {
  return embedder == nullptr ? 0 : embedder->provider->dim();
}

bitext_status bitext_embed(bitext_context* ctx, bitext_embedder* embedder, const char* text, double* out,
                           size_t capacity) {
  return guarded(ctx, [&] {
    require(embedder, "embedder");
    require(text, "text");
    require(out, "out");
    const std::string texts[] = {text};
    const auto v = embedder->provider->embed(texts);
    if (v.size() != 1) throw bitext::ProviderError("provider returned no vector");
    if (capacity < v[0].size()) {
      throw bitext::ValidationError("capacity " + std::to_string(capacity) + " is below dimension " +
                                    std::to_string(v[0].size()));
    }
    std::copy(v[0].begin(), v[0].end(), out);
  });
}

bitext_status bitext_similarity(bitext_context* ctx, bitext_embedder* embedder, const char* a, const char* b,
                                double* out) {
  return guarded(ctx, [&] {
    require(embedder, "embedder");
    require(a, "a");
    require(b, "b");
    require(out, "out");
    const std::string texts[] = {a, b};
    const auto v = embedder->provider->embed(texts);
    if (v.size() != 2) throw bitext::ProviderError("provider returned the wrong number of vectors");
    *out = bitext::cosine(v[0], v[1]);
  });
}

void bitext_embedder_free(bitext_embedder* embedder) { delete embedder; }

bitext_status bitext_cmd_stats(bitext_context* ctx, const bitext_corpus* corpus, char** report) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    hand_out(report, bitext::commands::stats(corpus->corpus));
  });
}

bitext_status bitext_cmd_calibrate(bitext_context* ctx, const bitext_corpus* reference, bitext_embedder* embedder,
                                   double margin, char** report) {
  return guarded(ctx, [&] {
    require(reference, "reference");
    require(embedder, "embedder");
    hand_out(report, bitext::commands::calibrate(ctx->settings(), reference->corpus, *embedder->provider, margin));
  });
}

bitext_status bitext_cmd_filter_embed(bitext_context* ctx, const bitext_corpus* corpus, bitext_embedder* embedder,
                                      const char* scores_path, bitext_corpus** kept, char** report) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(embedder, "embedder");
    bitext::Corpus out;
    const auto text =
        bitext::commands::filter_embed(ctx->settings(), corpus->corpus, *embedder->provider, optional_path(scores_path), out);
    if (kept != nullptr) *kept = new bitext_corpus{std::move(out)};
    hand_out(report, text);
  });
}

bitext_status bitext_cmd_align(bitext_context* ctx, const bitext_corpus* corpus, const char* out_path,
                               const char* lex_prefix, char** report) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(out_path, "out_path");
    hand_out(report, bitext::commands::align(ctx->settings(), corpus->corpus, out_path, optional_path(lex_prefix)));
  });
}

bitext_status bitext_cmd_phrase_table(bitext_context* ctx, const bitext_corpus* corpus, const char* alignments_path,
                                      const char* out_path, char** report) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(out_path, "out_path");
    hand_out(report, bitext::commands::phrase_table(ctx->settings(), corpus->corpus, optional_path(alignments_path),
                                                    out_path));
  });
}

bitext_status bitext_cmd_ppi(bitext_context* ctx, const bitext_corpus* corpus, const char* table_path,
                             bitext_corpus** phrases, char** report) {
  return guarded(ctx, [&] {
    bitext::Corpus out;
    const auto text = bitext::commands::ppi(ctx->settings(), corpus == nullptr ? nullptr : &corpus->corpus,
                                            optional_path(table_path), out);
    if (phrases != nullptr) *phrases = new bitext_corpus{std::move(out)};
    hand_out(report, text);
  });
}

bitext_status bitext_recipe_validate(bitext_context* ctx, const char* config_path, char** report) {
  return guarded(ctx, [&] {
    const auto config = ctx->config(config_path);
    bool valid = false;
    const auto text = bitext::commands::recipe_validate(config, valid);
    hand_out(report, text);
    if (!valid) bitext::require_valid(config);
  });
}

bitext_status bitext_recipe_run(bitext_context* ctx, const char* config_path, char** report) {
  return guarded(ctx, [&] { hand_out(report, bitext::commands::recipe_run(ctx->config(config_path))); });
}

bitext_status bitext_bpe_learn(bitext_context* ctx, const char* const* input_paths, size_t n_inputs, size_t n_merges,
                               const char* merges_path, char** report) {
  return guarded(ctx, [&] {
    require(input_paths, "input_paths");
    require(merges_path, "merges_path");
    std::vector<fs::path> inputs;
    for (size_t k = 0; k < n_inputs; ++k) {
      require(input_paths[k], "input path");
      inputs.emplace_back(input_paths[k]);
    }
    hand_out(report, bitext::commands::bpe_learn(inputs, n_merges, merges_path));
  });
}

bitext_status bitext_bpe_apply(bitext_context* ctx, const char* merges_path, const char* in_path,
                               const char* out_path, int decode, char** report) {
  return guarded(ctx, [&] {
    require(in_path, "in_path");
    require(out_path, "out_path");
    hand_out(report, bitext::commands::bpe_apply(ctx->settings(), optional_path(merges_path), in_path, out_path,
                                                 decode != 0));
  });
}

void bitext_string_free(char* s) { std::free(s); }

}  // extern "C"
