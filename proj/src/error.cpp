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

#include "bitext/error.hpp"

namespace bitext {

namespace {

std::string located(const std::string& source, std::size_t line, const std::string& what) {
  if (line == 0) return source + ": " + what;
  return source + ":" + std::to_string(line) + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : ValidationError(located(source, line, what)), line_(line) {}

IoError::IoError(const std::string& path, const std::string& what)
    : Error(ErrorKind::io, path + ": " + what), path_(path) {}

MissingEmbeddingError::MissingEmbeddingError(const std::string& hash_hex)
    : ProviderError("no embedding for text with hash " + hash_hex), hash_(hash_hex) {}

}  // namespace bitext
