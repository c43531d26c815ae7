// Copyright 2026 The attrscale Authors. All Rights Reserved.
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
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace attrscale {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input file. `line()` is 1-based when known.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what,
                      std::optional<std::size_t> line = std::nullopt)
      : Error(line ? "line " + std::to_string(*line) + ": " + what : what),
        line_(line) {}

  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::optional<std::size_t> line_;
};

/// SQL text that could not be tokenized/parsed, or that falls outside the
/// supported single-SELECT subset. `offset()` is the byte offset of the
/// first failure.
class SqlError : public Error {
 public:
  enum class Kind { parse, unsupported };

  SqlError(Kind kind, std::size_t offset, const std::string& what)
      : Error("byte " + std::to_string(offset) + ": " + what),
        kind_(kind),
        offset_(offset),
        detail_(what) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }
  /// The message without the offset prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Kind kind_;
  std::size_t offset_;
  std::string detail_;
};

/// Invalid selection request (bad count, missing timestamps, ...).
class SelectionError : public Error {
 public:
  using Error::Error;
};

/// Nothing left to analyze after selection and thresholding.
class EmptyAnalysisError : public Error {
 public:
  using Error::Error;
};

class UnknownAttributeError : public Error {
 public:
  explicit UnknownAttributeError(std::string name)
      : Error("unknown attribute '" + name + "'"), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// A pair (h, h) was requested; the diagonal carries no dependency.
class DiagonalPairError : public Error {
 public:
  explicit DiagonalPairError(const std::string& name)
      : Error("pair (" + name + ", " + name + ") lies on the diagonal") {}
};

/// The attribute never co-occurs with any other attribute.
class IsolatedAttributeError : public Error {
 public:
  explicit IsolatedAttributeError(const std::string& name)
      : Error("attribute '" + name + "' is isolated") {}
};

/// Snapshot unreadable, from an unknown version, or failing its hash check.
class SnapshotError : public Error {
 public:
  using Error::Error;
};

}  // namespace attrscale
