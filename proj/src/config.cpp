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

#include "bitext/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "bitext/error.hpp"
#include "bitext/text.hpp"

namespace bitext {

namespace pt = boost::property_tree;

std::optional<Recipe> parse_recipe(std::string_view name) {
  for (std::size_t k = 0; k < kRecipeNames.size(); ++k) {
    if (kRecipeNames[k] == name) return static_cast<Recipe>(k);
  }
  return std::nullopt;
}

std::string_view to_string(Recipe recipe) { return kRecipeNames[static_cast<std::size_t>(recipe)]; }

RecipeParts parts_of(Recipe recipe) {
  switch (recipe) {
    case Recipe::baseline:
      return {};
    case Recipe::no_filtering:
      return {.pseudo = true};
    case Recipe::baseline_ppi:
      return {.phrases = true};
    case Recipe::baseline_labse:
      return {.sentences = true};
    case Recipe::baseline_labse_ppi:
      return {.sentences = true, .phrases = true};
    case Recipe::baseline_ppi_labse:
      return {.filtered_phrases = true};
    case Recipe::baseline_labse_ppi_labse:
      return {.sentences = true, .filtered_phrases = true};
  }
  throw Error(ErrorKind::internal, "unhandled recipe");
}

std::string_view to_string(CorpusRole role) {
  switch (role) {
    case CorpusRole::parallel:
      return "parallel";
    case CorpusRole::pseudo:
      return "pseudo";
    case CorpusRole::calibration:
      return "calibration";
  }
  return "?";
}

namespace {

const std::set<std::string, std::less<>> kKnownKeys[] = {
    {"name", "output_src", "output_tgt", "cache_dir"},
    {"sentence", "phrase_score", "phrase_labse"},
    {"max_len", "w_phi_ts", "w_phi_st", "w_lex_ts", "w_lex_st", "em_iterations", "use_null", "symmetrize"},
    {"kind", "dim", "seed", "pairs", "path", "endpoint", "timeout_ms", "retries", "batch_size"},
    {"enabled", "dedup"},
    {"role", "src", "tgt", "tsv", "weight"},
};
constexpr std::string_view kSections[] = {"recipe", "thresholds", "phrase", "provider", "normalize"};
constexpr std::string_view kCorpusPrefix = "corpus.";

class SectionReader {
 public:
  SectionReader(const pt::ptree& tree, std::string section, const std::filesystem::path& base,
                std::vector<std::string>& issues)
      : tree_(tree), section_(std::move(section)), base_(base), issues_(issues) {}

  std::optional<std::string> raw(const std::string& key) const {
    const auto it = tree_.find(key);
    if (it == tree_.not_found()) return std::nullopt;
    return it->second.data();
  }

  void text(const std::string& key, std::string& out) const {
    if (auto v = raw(key)) out = *v;
  }

  void path(const std::string& key, std::filesystem::path& out) const {
    if (auto v = raw(key)) {
      if (v->empty()) {
        out.clear();
      } else {
        const std::filesystem::path p(*v);
        out = p.is_absolute() || base_.empty() ? p : base_ / p;
      }
    }
  }

  void real(const std::string& key, double& out) const {
    if (auto v = raw(key)) {
      const auto x = parse_double(*v);
      if (!x || !std::isfinite(*x)) {
        issue(key, "not a number: '" + *v + "'");
      } else {
        out = *x;
      }
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out, long long min_value) const {
    if (auto v = raw(key)) {
      const auto x = parse_int(*v);
      if (!x) {
        issue(key, "not an integer: '" + *v + "'");
      } else if (*x < min_value) {
        issue(key, "must be >= " + std::to_string(min_value) + ", got " + *v);
      } else {
        out = static_cast<Int>(*x);
      }
    }
  }

  void boolean(const std::string& key, bool& out) const {
    if (auto v = raw(key)) {
      if (*v == "true" || *v == "yes" || *v == "on" || *v == "1") {
        out = true;
      } else if (*v == "false" || *v == "no" || *v == "off" || *v == "0") {
        out = false;
      } else {
        issue(key, "not a boolean: '" + *v + "'");
      }
    }
  }

  void check_keys(const std::set<std::string, std::less<>>& known) const {
    for (const auto& [key, value] : tree_) {
      if (!known.contains(key)) issues_.push_back("[" + section_ + "] unknown key '" + key + "'");
    }
  }

  void issue(const std::string& key, const std::string& what) const {
    issues_.push_back(section_ + "." + key + ": " + what);
  }

 private:
  const pt::ptree& tree_;
  std::string section_;
  std::filesystem::path base_;
  std::vector<std::string>& issues_;
};

void apply_override(pt::ptree& root, const ConfigOverride& o) {
  const auto dot = o.first.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == o.first.size()) {
    throw ValidationError("override key must be 'section.key', got '" + o.first + "'");
  }
  const std::string section = o.first.substr(0, dot);
  const std::string key = o.first.substr(dot + 1);
  auto it = root.find(section);
  pt::ptree* child = nullptr;
  if (it == root.not_found()) {
    child = &root.push_back({section, pt::ptree()})->second;
  } else {
    child = &it->second;
  }
  child->put(pt::ptree::path_type(key, '\0'), o.second);
}

PipelineConfig interpret(const pt::ptree& root, const std::filesystem::path& base) {
  PipelineConfig c;
  auto& issues = c.load_issues;
  for (const auto& [section, tree] : root) {
    if (!tree.data().empty()) {
      issues.push_back("key '" + section + "' outside of any section");
      continue;
    }
    const SectionReader r(tree, section, base, issues);
    if (section == kSections[0]) {
      r.check_keys(kKnownKeys[0]);
      r.text("name", c.recipe);
      r.path("output_src", c.output_src);
      r.path("output_tgt", c.output_tgt);
      r.path("cache_dir", c.cache_dir);
    } else if (section == kSections[1]) {
      r.check_keys(kKnownKeys[1]);
      r.real("sentence", c.tau_sentence);
      r.real("phrase_score", c.phrase_weights.threshold);
      r.real("phrase_labse", c.tau_phrase_labse);
    } else if (section == kSections[2]) {
      r.check_keys(kKnownKeys[2]);
      r.integer("max_len", c.max_len, 1);
      r.real("w_phi_ts", c.phrase_weights.phi_ts);
      r.real("w_phi_st", c.phrase_weights.phi_st);
      r.real("w_lex_ts", c.phrase_weights.lex_ts);
      r.real("w_lex_st", c.phrase_weights.lex_st);
      r.integer("em_iterations", c.em_iterations, 1);
      r.boolean("use_null", c.use_null);
      if (auto v = r.raw("symmetrize")) {
        try {
          c.symmetrization = parse_symmetrization(*v);
        } catch (const ValidationError& e) {
          r.issue("symmetrize", e.what());
        }
      }
    } else if (section == kSections[3]) {
      r.check_keys(kKnownKeys[3]);
      r.text("kind", c.provider.kind);
      r.integer("dim", c.provider.dim, 1);
      r.integer("seed", c.provider.seed, 0);
      r.path("pairs", c.provider.pairs);
      r.path("path", c.provider.path);
      r.text("endpoint", c.provider.endpoint);
      r.integer("timeout_ms", c.provider.timeout_ms, 1);
      r.integer("retries", c.provider.retries, 0);
      r.integer("batch_size", c.provider.batch_size, 1);
    } else if (section == kSections[4]) {
      r.check_keys(kKnownKeys[4]);
      r.boolean("enabled", c.normalize);
      r.boolean("dedup", c.dedup);
    } else if (section.starts_with(kCorpusPrefix) && section.size() > kCorpusPrefix.size()) {
      r.check_keys(kKnownKeys[5]);
      CorpusSource src;
      src.name = section.substr(kCorpusPrefix.size());
      if (auto role = r.raw("role")) {
        if (*role == "parallel") {
          src.role = CorpusRole::parallel;
        } else if (*role == "pseudo") {
          src.role = CorpusRole::pseudo;
        } else if (*role == "calibration") {
          src.role = CorpusRole::calibration;
        } else {
          r.issue("role", "must be parallel, pseudo or calibration, got '" + *role + "'");
        }
      } else {
        r.issue("role", "missing");
      }
      r.path("src", src.src);
      r.path("tgt", src.tgt);
      r.path("tsv", src.tsv);
      r.integer("weight", src.weight, 1);
      c.corpora.push_back(std::move(src));
    } else {
      issues.push_back("unknown section [" + section + "]");
    }
  }
  return c;
}

PipelineConfig parse_tree(std::istream& in, const std::string& origin, const std::filesystem::path& base_dir,
                          const std::vector<ConfigOverride>& overrides) {
  pt::ptree root;
  try {
    pt::ini_parser::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(origin, e.line(), e.message());
  }
  if (const char* env = std::getenv("BITEXT_EMBED_ENDPOINT"); env != nullptr && *env != '\0') {
    apply_override(root, {"provider.endpoint", env});
  }
  for (const auto& o : overrides) apply_override(root, o);
  return interpret(root, base_dir);
}

}  // namespace

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            const std::vector<ConfigOverride>& overrides) {
  std::istringstream in{std::string(text)};
  return parse_tree(in, "<config>", base_dir, overrides);
}

PipelineConfig load_config(const std::filesystem::path& path, const std::vector<ConfigOverride>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open config for reading");
  auto config = parse_tree(in, path.string(), path.parent_path(), overrides);
  config.origin = path;
  return config;
}

namespace {

void check_range(std::vector<std::string>& out, const char* name, double value, double lo, double hi) {
  if (!(value >= lo && value <= hi)) {
    out.push_back(std::string(name) + ": threshold out of range [" + format_significant(lo, 3) + "," +
                  format_significant(hi, 3) + "]: " + format_significant(value, 6));
  }
}

void check_file(std::vector<std::string>& out, const std::string& what, const std::filesystem::path& p) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) out.push_back(what + ": missing file " + p.string());
}

}  // namespace

std::vector<std::string> validate_config(const PipelineConfig& c) {
  std::vector<std::string> out = c.load_issues;

  const auto recipe = parse_recipe(c.recipe);
  if (!recipe) {
    std::string names;
    for (const auto n : kRecipeNames) names += (names.empty() ? "" : ", ") + std::string(n);
    out.push_back("recipe.name: unknown recipe '" + c.recipe + "'; valid recipes: " + names);
  }

  check_range(out, "thresholds.sentence", c.tau_sentence, -1.0, 1.0);
  check_range(out, "thresholds.phrase_labse", c.tau_phrase_labse, -1.0, 1.0);
  check_range(out, "thresholds.phrase_score", c.phrase_weights.threshold, 0.0, 1.0);
  const auto& w = c.phrase_weights;
  if (w.phi_ts < 0 || w.phi_st < 0 || w.lex_ts < 0 || w.lex_st < 0) {
    out.push_back("phrase: score weights must be non-negative");
  } else if (w.phi_ts + w.phi_st + w.lex_ts + w.lex_st <= 0) {
    out.push_back("phrase: score weights must not all be zero");
  }
  if (c.max_len == 0) out.push_back("phrase.max_len: must be >= 1");
  if (c.em_iterations == 0) out.push_back("phrase.em_iterations: must be >= 1");

  if (c.output_src.empty() != c.output_tgt.empty()) {
    out.push_back("recipe: output_src and output_tgt must be given together");
  }

  std::size_t n_parallel = 0, n_pseudo = 0, n_calibration = 0;
  std::set<std::string> names;
  for (const auto& src : c.corpora) {
    const std::string label = "corpus." + src.name;
    if (!names.insert(src.name).second) out.push_back(label + ": duplicate corpus name");
    switch (src.role) {
      case CorpusRole::parallel:
        ++n_parallel;
        break;
      case CorpusRole::pseudo:
        ++n_pseudo;
        break;
      case CorpusRole::calibration:
        ++n_calibration;
        break;
    }
    if (src.weight == 0) out.push_back(label + ": weight must be >= 1");
    const bool has_pair = !src.src.empty() || !src.tgt.empty();
    if (!src.tsv.empty() && has_pair) {
      out.push_back(label + ": give either tsv or src/tgt, not both");
    } else if (!src.tsv.empty()) {
      check_file(out, label, src.tsv);
    } else if (src.src.empty() || src.tgt.empty()) {
      out.push_back(label + ": needs both src and tgt (or tsv)");
    } else {
      check_file(out, label, src.src);
      check_file(out, label, src.tgt);
    }
  }
  if (n_parallel == 0) out.push_back("no corpus with role=parallel");

  const RecipeParts parts = recipe ? parts_of(*recipe) : RecipeParts{};
  if (recipe && parts.needs_pseudo() && n_pseudo == 0) {
    out.push_back("recipe " + c.recipe + " needs a corpus with role=pseudo");
  }

  if (parts.needs_provider() || n_calibration > 0) {
    const auto& p = c.provider;
    if (p.batch_size == 0) out.push_back("provider.batch_size: must be >= 1");
    if (p.kind == "mock") {
      if (p.dim < 2) out.push_back("provider.dim: mock dimension must be >= 2");
      if (!p.pairs.empty()) check_file(out, "provider.pairs", p.pairs);
    } else if (p.kind == "file") {
      if (p.path.empty()) {
        out.push_back("provider.path: required for kind=file");
      } else {
        check_file(out, "provider.path", p.path);
      }
    } else if (p.kind == "service") {
      if (p.endpoint.empty()) out.push_back("provider.endpoint: required for kind=service (or set BITEXT_EMBED_ENDPOINT)");
    } else {
      out.push_back("provider.kind: must be mock, file or service, got '" + p.kind + "'");
    }
  }
  return out;
}

void require_valid(const PipelineConfig& config) {
  const auto problems = validate_config(config);
  if (problems.empty()) return;
  std::string msg = "invalid configuration (" + std::to_string(problems.size()) + " problem" +
                    (problems.size() == 1 ? "" : "s") + "):";
  for (const auto& p : problems) msg += "\n  " + p;
  throw ValidationError(msg);
}

}  // namespace bitext
