// Copyright 2026 The shiftconv Authors
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

#ifndef SHIFTCONV_ERRORS_HPP_
#define SHIFTCONV_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shiftconv {

/// Base class of every error raised by the library. Callers that only need
/// to distinguish resource exhaustion from bad input can catch
/// ResourceLimitError first and Error second.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A table is too short for the requested summation window.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Precondition violated (bad parameter combination, non-coprime h/k, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the mathematical domain of a formula.
class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The requested H range falls outside a corollary's admissible window.
class WindowError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class UnsupportedWeightError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// An input table does not reach far enough for a derived table.
class InsufficientInputError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class GridTooSmallError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DegenerateInputError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Malformed text input. line() is 1-based; 0 means "whole file".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NonContiguousIndexError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Work would exceed the configured memory budget or a hard size cap.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftconv

#endif  // SHIFTCONV_ERRORS_HPP_
