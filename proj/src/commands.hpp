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

// Command bodies behind the C API. Each returns its key=value report.

#ifndef BITEXT_SRC_COMMANDS_HPP
#define BITEXT_SRC_COMMANDS_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "bitext/config.hpp"
#include "bitext/corpus.hpp"
#include "bitext/embedding.hpp"

namespace bitext::commands {

std::string stats(const Corpus& corpus);

std::string calibrate(const PipelineConfig& settings, const Corpus& reference, EmbeddingProvider& provider,
                      double margin);

std::string filter_embed(const PipelineConfig& settings, const Corpus& corpus, EmbeddingProvider& provider,
                         const std::optional<std::filesystem::path>& scores_path, Corpus& kept);

std::string align(const PipelineConfig& settings, const Corpus& corpus, const std::filesystem::path& out_path,
                  const std::optional<std::filesystem::path>& lex_prefix);

std::string phrase_table(const PipelineConfig& settings, const Corpus& corpus,
                         const std::optional<std::filesystem::path>& alignments_path,
                         const std::filesystem::path& out_path);

std::string ppi(const PipelineConfig& settings, const Corpus* corpus,
                const std::optional<std::filesystem::path>& table_path, Corpus& phrases);

/// Returns the report; `valid` tells whether the configuration passed.
std::string recipe_validate(const PipelineConfig& config, bool& valid);
std::string recipe_run(const PipelineConfig& config);

std::string bpe_learn(std::span<const std::filesystem::path> inputs, std::size_t n_merges,
                      const std::filesystem::path& merges_path);
std::string bpe_apply(const PipelineConfig& settings, const std::optional<std::filesystem::path>& merges_path,
                      const std::filesystem::path& in_path, const std::filesystem::path& out_path, bool decode);

}  // namespace bitext::commands

#endif  // BITEXT_SRC_COMMANDS_HPP
