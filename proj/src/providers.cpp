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

#include "bitext/providers.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <thread>

#include "bitext/error.hpp"
#include "bitext/text.hpp"

namespace bitext {

using json = nlohmann::json;

std::uint64_t text_hash(std::string_view text) { return fnv1a64(text); }

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

MockEmbedder::MockEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim < 2) throw ValidationError("mock embedder dimension must be >= 2");
}

void MockEmbedder::register_pair(std::string_view src, std::string_view tgt) {
  auto key = compose_nfc(src);
  auto partner = compose_nfc(tgt);
  if (key == partner) return;
  alias_digest_ = fnv1a64(partner, fnv1a64(key, alias_digest_ ^ kGolden));
  alias_.insert_or_assign(std::move(partner), std::move(key));
}

void MockEmbedder::register_pairs(const Corpus& pairs) {
  for (const auto& p : pairs.pairs) register_pair(p.src, p.tgt);
}

Embedding MockEmbedder::embed_one(std::string_view text) const {
  std::string key = compose_nfc(text);
  if (const auto it = alias_.find(key); it != alias_.end()) key = it->second;
  Embedding v(dim_, 0.0);
  if (key.empty()) return v;
  std::uint64_t state = fnv1a64(key) ^ (seed_ * kGolden);
  for (std::size_t k = 0; k < dim_; ++k) {
    state += kGolden;
    const std::uint64_t z = splitmix64_mix(state);
    v[k] = static_cast<double>(z >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
  normalize_embedding(v);
  return v;
}

std::string MockEmbedder::fingerprint() const {
  return "mock:dim=" + std::to_string(dim_) + ":seed=" + std::to_string(seed_) + ":pairs=" +
         std::to_string(alias_.size()) + ":" + hex64(alias_digest_);
}

std::vector<Embedding> MockEmbedder::embed(std::span<const std::string> texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

EmbeddingFile read_embedding_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  EmbeddingFile file;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string(), 1, "missing 'dim N' header");
  {
    const auto header = tokenize(line);
    const auto dim = header.size() == 2 && header[0] == "dim" ? parse_int(header[1]) : std::nullopt;
    if (!dim || *dim <= 0) throw ParseError(path.string(), 1, "expected 'dim N' header");
    file.dim = static_cast<std::size_t>(*dim);
  }
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(path.string(), n, "expected 'hash<TAB>values'");
    const std::string hash_hex = line.substr(0, tab);
    if (hash_hex.size() != 16 || hash_hex.find_first_not_of("0123456789abcdef") != std::string::npos) {
      throw ParseError(path.string(), n, "hash must be 16 lowercase hex digits");
    }
    const std::uint64_t hash = std::stoull(hash_hex, nullptr, 16);
    Embedding v;
    v.reserve(file.dim);
    for (const auto& tok : tokenize(std::string_view(line).substr(tab + 1))) {
      const auto x = parse_double(tok);
      if (!x || !std::isfinite(*x)) throw ParseError(path.string(), n, "bad vector component '" + tok + "'");
      v.push_back(*x);
    }
    if (v.size() != file.dim) {
      throw ParseError(path.string(), n,
                       "vector has " + std::to_string(v.size()) + " components, header says " + std::to_string(file.dim));
    }
    file.records.emplace_back(hash, std::move(v));
  }
  return file;
}

void write_embedding_file(const EmbeddingFile& file, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << "dim " << file.dim << '\n';
  for (const auto& [hash, v] : file.records) {
    if (v.size() != file.dim) throw ValidationError("embedding record does not match file dimension");
    out << hex64(hash) << '\t';
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) out << ' ';
      out << format_shortest(v[k]);
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError(path.string(), "write failure");
}

FileEmbedder::FileEmbedder(const std::filesystem::path& path) : FileEmbedder(read_embedding_file(path), path.string()) {}

FileEmbedder::FileEmbedder(EmbeddingFile file, std::string origin) : dim_(file.dim) {
  if (dim_ == 0) throw ValidationError("embedding file " + origin + " has dimension 0");
  digest_ = fnv1a64(std::to_string(dim_));
  for (auto& [hash, v] : file.records) {
    digest_ = fnv1a64(hex64(hash), digest_);
    for (double x : v) digest_ = fnv1a64(format_significant(x, 17), digest_);
    normalize_embedding(v);
    vectors_.insert_or_assign(hash, std::move(v));
  }
}

std::string FileEmbedder::fingerprint() const {
  return "file:dim=" + std::to_string(dim_) + ":" + hex64(digest_);
}

std::vector<Embedding> FileEmbedder::embed(std::span<const std::string> texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    if (t.empty()) {
      out.emplace_back(dim_, 0.0);
      continue;
    }
    const auto it = vectors_.find(text_hash(t));
    if (it == vectors_.end()) throw MissingEmbeddingError(hex64(text_hash(t)));
    out.push_back(it->second);
  }
  return out;
}

namespace {

struct Endpoint {
  std::string base;  // scheme://host:port
  std::string prefix;  // path prefix without trailing slash
};

Endpoint split_endpoint(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  const auto path_start = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  Endpoint e;
  if (path_start == std::string::npos) {
    e.base = endpoint;
  } else {
    e.base = endpoint.substr(0, path_start);
    e.prefix = endpoint.substr(path_start);
    while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  }
  return e;
}

std::string describe(const httplib::Result& res) {
  if (!res) return "transport error: " + httplib::to_string(res.error());
  std::string msg = "HTTP " + std::to_string(res->status);
  try {
    const auto body = json::parse(res->body);
    if (body.contains("error")) msg += ": " + body["error"].get<std::string>();
  } catch (const std::exception&) {
  }
  return msg;
}

}  // namespace

ServiceEmbedder::ServiceEmbedder(std::string endpoint, ServiceOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
  if (endpoint_.empty()) throw ValidationError("service embedder: empty endpoint");
  const auto ep = split_endpoint(endpoint_);
  std::string last_error;
  for (unsigned attempt = 0; attempt <= options_.retries; ++attempt) {
    httplib::Client client(ep.base);
    client.set_connection_timeout(std::chrono::milliseconds(options_.timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(options_.timeout_ms));
    const auto res = client.Get(ep.prefix + "/healthz");
    if (res && res->status == 200) {
      try {
        const auto body = json::parse(res->body);
        if (body.value("status", std::string()) != "ok") throw ProviderError("service not ready");
        const auto dim = body.at("dim").get<long long>();
        if (dim <= 0) throw ProviderError("service reported dimension " + std::to_string(dim));
        dim_ = static_cast<std::size_t>(dim);
        model_ = body.value("model", std::string("unknown"));
        max_batch_ = body.value("max_batch", std::size_t{0});
        concurrent_ = body.value("concurrent", true);
        return;
      } catch (const json::exception& e) {
        throw ProviderError("malformed /healthz response from " + endpoint_ + ": " + e.what());
      }
    }
    last_error = describe(res);
    if (res && res->status >= 400 && res->status < 500) break;
  }
  throw ProviderError("handshake with " + endpoint_ + " failed after " + std::to_string(options_.retries) +
                      " retries: " + last_error);
}

std::string ServiceEmbedder::fingerprint() const {
  return "service:" + endpoint_ + ":model=" + model_ + ":dim=" + std::to_string(dim_);
}

std::vector<Embedding> ServiceEmbedder::embed(std::span<const std::string> texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  const std::size_t step = max_batch_ == 0 ? texts.size() : max_batch_;
  for (std::size_t first = 0; first < texts.size(); first += step) {
    auto part = embed_batch(texts.subspan(first, std::min(step, texts.size() - first)));
    for (auto& v : part) out.push_back(std::move(v));
  }
  return out;
}

std::vector<Embedding> ServiceEmbedder::embed_batch(std::span<const std::string> texts) {
  if (texts.empty()) return {};
  const auto ep = split_endpoint(endpoint_);
  const std::string request = json{{"texts", std::vector<std::string>(texts.begin(), texts.end())}}.dump();
  std::string last_error;
  unsigned attempts = 0;
  for (unsigned attempt = 0; attempt <= options_.retries; ++attempt) {
    ++attempts;
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
    httplib::Client client(ep.base);
    client.set_connection_timeout(std::chrono::milliseconds(options_.timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(options_.timeout_ms));
    client.set_write_timeout(std::chrono::milliseconds(options_.timeout_ms));
    const auto res = client.Post(ep.prefix + "/embed", request, "application/json");
    if (!res || res->status != 200) {
      last_error = describe(res);
      // client errors will not improve on retry
      if (res && res->status >= 400 && res->status < 500) break;
      continue;
    }
    try {
      const auto body = json::parse(res->body);
      const auto dim = body.at("dim").get<std::size_t>();
      if (dim != dim_) throw ProviderError("service changed dimension from " + std::to_string(dim_) + " to " + std::to_string(dim));
      auto vectors = body.at("embeddings").get<std::vector<Embedding>>();
      if (vectors.size() != texts.size()) {
        throw ProviderError("service returned " + std::to_string(vectors.size()) + " vectors for " +
                            std::to_string(texts.size()) + " texts");
      }
      for (auto& v : vectors) {
        if (v.size() != dim_) throw ProviderError("service returned a vector of the wrong dimension");
        normalize_embedding(v);
      }
      return vectors;
    } catch (const json::exception& e) {
      throw ProviderError("malformed /embed response: " + std::string(e.what()));
    }
  }
  throw ProviderError("POST " + endpoint_ + "/embed failed after " + std::to_string(attempts) +
                      " attempt(s): " + last_error);
}

}  // namespace bitext
