// Copyright 2026 The vqmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vqmark {

// Base of every error raised by the library. Subclasses let callers (the CLI
// in particular) map failures onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or parameters, detected before any work is done.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents. `offset` is the byte position where parsing failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Watermark does not fit into the available index positions.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// An encoded image or partition was produced with a different codebook.
class CodebookMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace vqmark
