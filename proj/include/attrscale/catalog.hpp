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

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "attrscale/errors.hpp"
#include "attrscale/matrix.hpp"

namespace attrscale {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

/// Canonical lookup key of an identifier: trimmed, ASCII lower-cased.
inline std::string fold_identifier(std::string_view s) {
  s = trim(s);
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

/// Ordered attribute names; the index of a name is its column position in
/// every matrix. Lookups are case-insensitive.
class AttributeCatalog {
 public:
  AttributeCatalog() = default;

  explicit AttributeCatalog(Labels names,
                            std::optional<std::size_t> database_count = {})
      : names_(std::move(names)), database_count_(database_count) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      std::string key = fold_identifier(names_[i]);
      if (key.empty()) throw InputError("catalog: empty attribute name");
      if (!index_.emplace(std::move(key), i).second) {
        throw InputError("catalog: duplicate attribute '" + names_[i] + "'");
      }
    }
    if (database_count_ && names_.size() > *database_count_) {
      throw InputError("catalog: " + std::to_string(names_.size()) +
                       " attributes exceed M=" +
                       std::to_string(*database_count_));
    }
  }

  const Labels& attributes() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  /// Database-wide attribute count M, when known.
  std::optional<std::size_t> database_attribute_count() const noexcept {
    return database_count_;
  }

  /// n / M, the share of the database's attributes under analysis.
  std::optional<double> coverage_ratio() const noexcept {
    if (!database_count_ || *database_count_ == 0) return std::nullopt;
    return static_cast<double>(names_.size()) /
           static_cast<double>(*database_count_);
  }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(fold_identifier(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// True when entries follow the `table.column` convention.
  bool qualified() const noexcept {
    for (const auto& n : names_) {
      if (n.find('.') != std::string::npos) return true;
    }
    return false;
  }

  friend bool operator==(const AttributeCatalog& a,
                         const AttributeCatalog& b) {
    return a.names_ == b.names_ && a.database_count_ == b.database_count_;
  }

 private:
  Labels names_;
  std::optional<std::size_t> database_count_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// One name per line; an optional first line `M=<integer>` gives the
/// database-wide attribute count. Blank lines are skipped.
inline AttributeCatalog parse_catalog(std::istream& in) {
  Labels names;
  std::optional<std::size_t> m;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view t = trim(line);
    if (t.empty()) continue;
    if (first && t.size() > 2 && t.substr(0, 2) == "M=") {
      std::size_t value = 0;
      auto digits = t.substr(2);
      auto [p, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec != std::errc() || p != digits.data() + digits.size()) {
        throw InputError("catalog: bad header '" + std::string(t) + "'",
                         lineno);
      }
      m = value;
      first = false;
      continue;
    }
    first = false;
    names.emplace_back(t);
  }
  return AttributeCatalog(std::move(names), m);
}

inline AttributeCatalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open catalog " + path.string());
  return parse_catalog(in);
}

}  // namespace attrscale
