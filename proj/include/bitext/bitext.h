/* Copyright 2026 The bitext Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libbitext.
 *
 * Every fallible call returns a bitext_status. On failure the message is
 * available from bitext_last_error(ctx) until the next call on the same
 * context. Strings handed out through char** parameters are owned by the
 * caller and released with bitext_string_free. A context must not be used
 * from two threads at once; distinct contexts are independent.
 */

#ifndef BITEXT_BITEXT_H
#define BITEXT_BITEXT_H

#include <stddef.h>
#include <stdint.h>

#if defined(BITEXT_STATIC)
#define BITEXT_API
#elif defined(_WIN32)
#if defined(BITEXT_BUILDING_LIBRARY)
#define BITEXT_API __declspec(dllexport)
#else
#define BITEXT_API __declspec(dllimport)
#endif
#else
#define BITEXT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes of the command-line tool. */
typedef enum bitext_status {
  BITEXT_OK = 0,
  BITEXT_ERR_INTERNAL = 1,
  BITEXT_ERR_VALIDATION = 2,
  BITEXT_ERR_IO = 3,
  BITEXT_ERR_PROVIDER = 4
} bitext_status;

typedef struct bitext_context bitext_context;
typedef struct bitext_corpus bitext_corpus;
typedef struct bitext_embedder bitext_embedder;

BITEXT_API const char* bitext_version(void);

/* ---- context ---------------------------------------------------------- */

BITEXT_API bitext_context* bitext_context_new(void);
BITEXT_API void bitext_context_free(bitext_context* ctx);
/* Never NULL; "" after a successful call. */
BITEXT_API const char* bitext_last_error(const bitext_context* ctx);

/* Worker threads for parallel stages. Never changes any output. */
BITEXT_API bitext_status bitext_set_workers(bitext_context* ctx, unsigned workers);
/* Configuration file supplying defaults for every command (NULL clears). */
BITEXT_API bitext_status bitext_set_config(bitext_context* ctx, const char* path);
/* Override one configuration value, key "section.key" (e.g.
 * "thresholds.sentence"). Later calls win. */
BITEXT_API bitext_status bitext_set(bitext_context* ctx, const char* key, const char* value);

/* ---- corpora ---------------------------------------------------------- */

/* Line-aligned src/tgt files. */
BITEXT_API bitext_status bitext_corpus_read(bitext_context* ctx, const char* src_path, const char* tgt_path,
                                            bitext_corpus** out);
/* One "src<TAB>tgt" pair per line. */
BITEXT_API bitext_status bitext_corpus_read_tsv(bitext_context* ctx, const char* path, bitext_corpus** out);
BITEXT_API bitext_corpus* bitext_corpus_new(void);
BITEXT_API bitext_status bitext_corpus_add(bitext_context* ctx, bitext_corpus* corpus, const char* src,
                                           const char* tgt);
BITEXT_API size_t bitext_corpus_size(const bitext_corpus* corpus);
/* Borrowed pointers, valid until the corpus is modified or freed. */
BITEXT_API bitext_status bitext_corpus_get(bitext_context* ctx, const bitext_corpus* corpus, size_t index,
                                           const char** src, const char** tgt);
BITEXT_API bitext_status bitext_corpus_write(bitext_context* ctx, const bitext_corpus* corpus, const char* src_path,
                                             const char* tgt_path);
BITEXT_API void bitext_corpus_free(bitext_corpus* corpus);

/* ---- embedding providers ---------------------------------------------- */

BITEXT_API bitext_status bitext_embedder_mock(bitext_context* ctx, size_t dim, uint64_t seed,
                                              bitext_embedder** out);
/* Paired mode of the mock: afterwards tgt embeds exactly like src. */
BITEXT_API bitext_status bitext_embedder_register_pair(bitext_context* ctx, bitext_embedder* embedder,
                                                       const char* src, const char* tgt);
BITEXT_API bitext_status bitext_embedder_file(bitext_context* ctx, const char* path, bitext_embedder** out);
BITEXT_API bitext_status bitext_embedder_service(bitext_context* ctx, const char* endpoint,
                                                 bitext_embedder** out);
/* The provider described by the [provider] configuration section. */
BITEXT_API bitext_status bitext_embedder_from_config(bitext_context* ctx, bitext_embedder** out);
BITEXT_API size_t bitext_embedder_dim(const bitext_embedder* embedder);
/* Writes dim components; fails if capacity < dim. */
BITEXT_API bitext_status bitext_embed(bitext_context* ctx, bitext_embedder* embedder, const char* text,
                                      double* out, size_t capacity);
BITEXT_API bitext_status bitext_similarity(bitext_context* ctx, bitext_embedder* embedder, const char* a,
                                           const char* b, double* out);
BITEXT_API void bitext_embedder_free(bitext_embedder* embedder);

/* ---- commands ----------------------------------------------------------
 * Each command returns a key=value report through `report` (may be NULL).
 * Thresholds, weights and model settings come from the configuration and
 * bitext_set overrides.
 */

BITEXT_API bitext_status bitext_cmd_stats(bitext_context* ctx, const bitext_corpus* corpus, char** report);
BITEXT_API bitext_status bitext_cmd_calibrate(bitext_context* ctx, const bitext_corpus* reference,
                                              bitext_embedder* embedder, double margin, char** report);
/* Keeps pairs with similarity >= thresholds.sentence. `scores_path` (may be
 * NULL) receives "id<TAB>similarity<TAB>src<TAB>tgt" lines. */
BITEXT_API bitext_status bitext_cmd_filter_embed(bitext_context* ctx, const bitext_corpus* corpus,
                                                 bitext_embedder* embedder, const char* scores_path,
                                                 bitext_corpus** kept, char** report);
/* Symmetrized word alignments in Pharaoh format, one line per pair.
 * `lex_prefix` (may be NULL) receives <prefix>.s2t and <prefix>.t2s. */
BITEXT_API bitext_status bitext_cmd_align(bitext_context* ctx, const bitext_corpus* corpus, const char* out_path,
                                          const char* lex_prefix, char** report);
/* `alignments_path` may be NULL to align first. */
BITEXT_API bitext_status bitext_cmd_phrase_table(bitext_context* ctx, const bitext_corpus* corpus,
                                                 const char* alignments_path, const char* out_path, char** report);
/* Phrase pair injection: score filter then longest unique selection, from
 * a phrase table file or, when `table_path` is NULL, mined from `corpus`. */
BITEXT_API bitext_status bitext_cmd_ppi(bitext_context* ctx, const bitext_corpus* corpus, const char* table_path,
                                        bitext_corpus** phrases, char** report);
/* `config_path` may be NULL to use the context configuration. Invalid
 * configurations return BITEXT_ERR_VALIDATION; the report, filled in either
 * case, lists every problem. */
BITEXT_API bitext_status bitext_recipe_validate(bitext_context* ctx, const char* config_path, char** report);
BITEXT_API bitext_status bitext_recipe_run(bitext_context* ctx, const char* config_path, char** report);
/* Several inputs are learned jointly. */
BITEXT_API bitext_status bitext_bpe_learn(bitext_context* ctx, const char* const* input_paths, size_t n_inputs,
                                          size_t n_merges, const char* merges_path, char** report);
/* decode != 0 undoes a segmentation instead. */
BITEXT_API bitext_status bitext_bpe_apply(bitext_context* ctx, const char* merges_path, const char* in_path,
                                          const char* out_path, int decode, char** report);

BITEXT_API void bitext_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* BITEXT_BITEXT_H */
