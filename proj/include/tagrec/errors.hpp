// Copyright 2026 The tagrec Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tagrec {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An argument outside its documented domain (ratio, L, thresholds...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Unknown label or id.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// The target user has no tag usage, so tag-based scoring is undefined.
class EmptyProfileError : public LookupError {
 public:
  using LookupError::LookupError;
};

/// Evaluation called with arguments that break the train/test protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A metric was requested on inputs for which it has no value.
class UndefinedValueError : public Error {
 public:
  using Error::Error;
};

/// Graph construction or deserialization failed.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// File system failure; the message includes the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tagrec
