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

#ifndef BITEXT_PROVIDERS_HPP
#define BITEXT_PROVIDERS_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitext/embedding.hpp"

namespace bitext {

inline constexpr std::size_t kDefaultMockDim = 8;

/// Hash key of a text in embedding files: FNV-1a 64 over the exact UTF-8
/// bytes, printed as 16 lowercase hex digits.
std::uint64_t text_hash(std::string_view text);

/// Deterministic structural test double.
///
/// vector(text):
///   key   = NFC(text), replaced by its registered partner in paired mode
///   empty key -> zero vector
///   state = fnv1a64(key) XOR (seed * 0x9E3779B97F4A7C15)   (mod 2^64)
///   for k in [0, dim): state += 0x9E3779B97F4A7C15; z = splitmix64_mix(state)
///                      v[k] = (z >> 11) * 2^-53 * 2 - 1
///   unit-normalize v
///
/// Unregistered texts get unrelated vectors, so their cosine concentrates
/// near 0 as dim grows.
class MockEmbedder final : public EmbeddingProvider {
 public:
  MockEmbedder(std::size_t dim = kDefaultMockDim, std::uint64_t seed = 0);

  /// Paired mode: afterwards `tgt` embeds exactly like `src`.
  void register_pair(std::string_view src, std::string_view tgt);
  /// Registers every pair of a TSV/parallel corpus.
  void register_pairs(const Corpus& pairs);
  std::size_t registered() const { return alias_.size(); }

  Embedding embed_one(std::string_view text) const;

  ProviderKind kind() const override { return ProviderKind::mock; }
  std::size_t dim() const override { return dim_; }
  std::string fingerprint() const override;
  std::vector<Embedding> embed(std::span<const std::string> texts) override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::unordered_map<std::string, std::string> alias_;
  std::uint64_t alias_digest_ = 0;
};

/// On-disk embedding file: "dim N" header, then "hash<TAB>v0 v1 ..." lines.
struct EmbeddingFile {
  std::size_t dim = 0;
  std::vector<std::pair<std::uint64_t, Embedding>> records;

  friend bool operator==(const EmbeddingFile&, const EmbeddingFile&) = default;
};

EmbeddingFile read_embedding_file(const std::filesystem::path& path);
/// Components printed in shortest round-trip form so parsing is exact.
void write_embedding_file(const EmbeddingFile& file, const std::filesystem::path& path);

/// Serves precomputed vectors keyed by text_hash of the exact text. Empty
/// text maps to the zero vector without a lookup; any other missing text
/// throws MissingEmbeddingError.
class FileEmbedder final : public EmbeddingProvider {
 public:
  explicit FileEmbedder(const std::filesystem::path& path);
  explicit FileEmbedder(EmbeddingFile file, std::string origin = "<memory>");

  ProviderKind kind() const override { return ProviderKind::file; }
  std::size_t dim() const override { return dim_; }
  std::string fingerprint() const override;
  std::vector<Embedding> embed(std::span<const std::string> texts) override;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::uint64_t, Embedding> vectors_;
  std::uint64_t digest_ = 0;
};

struct ServiceOptions {
  int timeout_ms = 30000;
  unsigned retries = 2;
};

/// Client for the HTTP embedding protocol:
///   GET  /healthz -> {"status":"ok","dim":N,"model":name[,"max_batch":B][,"concurrent":bool]}
///   POST /embed   {"texts":[...]} -> {"dim":N,"embeddings":[[...],...]}
/// Non-200 responses carry {"error": message}. The handshake runs in the
/// constructor. Returned vectors are re-normalized client side.
class ServiceEmbedder final : public EmbeddingProvider {
 public:
  ServiceEmbedder(std::string endpoint, ServiceOptions options = {});

  ProviderKind kind() const override { return ProviderKind::service; }
  std::size_t dim() const override { return dim_; }
  bool concurrent() const override { return concurrent_; }
  std::string fingerprint() const override;
  std::vector<Embedding> embed(std::span<const std::string> texts) override;

  const std::string& model() const { return model_; }
  std::size_t max_batch() const { return max_batch_; }

 private:
  std::vector<Embedding> embed_batch(std::span<const std::string> texts);

  std::string endpoint_;
  ServiceOptions options_;
  std::size_t dim_ = 0;
  std::size_t max_batch_ = 0;  // 0: server did not say
  bool concurrent_ = true;
  std::string model_;
};

}  // namespace bitext

#endif  // BITEXT_PROVIDERS_HPP
