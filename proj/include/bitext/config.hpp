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

#ifndef BITEXT_CONFIG_HPP
#define BITEXT_CONFIG_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitext/alignment.hpp"
#include "bitext/phrase_table.hpp"

namespace bitext {

enum class Recipe {
  baseline,                  // P
  no_filtering,              // P + S
  baseline_ppi,              // P + PPI(S)
  baseline_labse,            // P + L(S)
  baseline_labse_ppi,        // P + L(S) + PPI(S)
  baseline_ppi_labse,        // P + PL(S)
  baseline_labse_ppi_labse,  // P + L(S) + PL(S)
};

inline constexpr std::array<std::string_view, 7> kRecipeNames = {
    "baseline",           "no_filtering",       "baseline_ppi",           "baseline_labse",
    "baseline_labse_ppi", "baseline_ppi_labse", "baseline_labse_ppi_labse",
};

std::optional<Recipe> parse_recipe(std::string_view name);
std::string_view to_string(Recipe recipe);

/// Which primitives a recipe concatenates after the parallel corpus.
struct RecipeParts {
  bool pseudo = false;           // S unfiltered
  bool sentences = false;        // L(S)
  bool phrases = false;          // PPI(S)
  bool filtered_phrases = false; // PL(S)

  bool needs_pseudo() const { return pseudo || sentences || phrases || filtered_phrases; }
  bool needs_provider() const { return sentences || filtered_phrases; }
};
RecipeParts parts_of(Recipe recipe);

enum class CorpusRole { parallel, pseudo, calibration };
std::string_view to_string(CorpusRole role);

/// One corpus of the manifest: either a src/tgt file pair or one TSV file.
struct CorpusSource {
  std::string name;
  CorpusRole role = CorpusRole::parallel;
  std::filesystem::path src;
  std::filesystem::path tgt;
  std::filesystem::path tsv;
  unsigned weight = 1;
};

struct ProviderConfig {
  std::string kind = "mock";  // mock | file | service
  std::size_t dim = 8;
  std::uint64_t seed = 0;
  std::filesystem::path pairs;  // mock: TSV of pairs registered in paired mode
  std::filesystem::path path;   // file: embedding file
  std::string endpoint;         // service
  int timeout_ms = 30000;
  unsigned retries = 2;
  std::size_t batch_size = 32;
};

struct PipelineConfig {
  std::filesystem::path origin;  // the config file; empty when built in code
  std::string recipe = "baseline";
  std::filesystem::path output_src;
  std::filesystem::path output_tgt;
  std::filesystem::path cache_dir;  // empty: no stage cache

  std::vector<CorpusSource> corpora;

  double tau_sentence = 0.9;
  double tau_phrase_labse = 0.9;
  PhraseScoreWeights phrase_weights{.threshold = 0.95};

  std::size_t max_len = kDefaultMaxPhraseLength;
  unsigned em_iterations = 5;
  bool use_null = true;
  Symmetrization symmetrization = Symmetrization::grow_diag_final_and;

  bool normalize = true;
  bool dedup = false;

  ProviderConfig provider;
  unsigned workers = 1;

  // Problems found while reading the file (bad numbers, unknown keys).
  std::vector<std::string> load_issues;
};

/// "section.key" = value. The section is everything before the last dot.
using ConfigOverride = std::pair<std::string, std::string>;

/// Reads an INI file; relative paths resolve against the file's directory.
/// BITEXT_EMBED_ENDPOINT, when set, replaces provider.endpoint. Overrides
/// apply after the file. Throws IoError when unreadable and ParseError on
/// INI syntax errors; value problems are collected in load_issues.
PipelineConfig load_config(const std::filesystem::path& path, const std::vector<ConfigOverride>& overrides = {});
/// Same, from INI text; relative paths resolve against `base_dir`.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            const std::vector<ConfigOverride>& overrides = {});

/// Every violation, not just the first. Empty means valid.
std::vector<std::string> validate_config(const PipelineConfig& config);

/// Throws ValidationError listing every violation.
void require_valid(const PipelineConfig& config);

}  // namespace bitext

#endif  // BITEXT_CONFIG_HPP
