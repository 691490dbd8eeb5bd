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

#ifndef BITEXT_ERROR_HPP
#define BITEXT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bitext {

// Numeric values double as CLI exit codes and C API status codes.
enum class ErrorKind : int {
  internal = 1,
  validation = 2,
  io = 3,
  provider = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Bad arguments, inconsistent inputs, dimension mismatches.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

// Malformed input file content. `line` is 1-based; 0 when not line-oriented.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& what) : Error(ErrorKind::provider, what) {}
};

// The file provider has no vector for a text. Carries the text's hash key.
class MissingEmbeddingError : public ProviderError {
 public:
  explicit MissingEmbeddingError(const std::string& hash_hex);
  const std::string& hash() const noexcept { return hash_; }

 private:
  std::string hash_;
};

}  // namespace bitext

#endif  // BITEXT_ERROR_HPP
