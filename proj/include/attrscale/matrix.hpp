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

// Matrix value types shared by every pipeline stage.
//
//   UsageMatrix       m x n binary query/attribute usage, stored row-sparse
//   DependencyMatrix  n x n co-occurrence counts + per-row total measure
//   MaskedMatrix      n x n reals where a cell may be undefined ('#')
//   StatsTable        per-attribute mean / variance / standard deviation

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace attrscale {

using Labels = std::vector<std::string>;

class UsageMatrix {
 public:
  UsageMatrix() = default;

  /// `rows[q]` lists the attribute indices used by query q. Indices are
  /// sorted and deduplicated; every row must use at least one attribute.
  UsageMatrix(Labels query_ids, Labels attributes,
              std::vector<std::vector<std::size_t>> rows)
      : query_ids_(std::move(query_ids)), attributes_(std::move(attributes)) {
    if (rows.size() != query_ids_.size()) {
      throw std::invalid_argument("UsageMatrix: row count != query id count");
    }
    offsets_.reserve(rows.size() + 1);
    for (auto& row : rows) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      if (row.empty()) {
        throw std::invalid_argument("UsageMatrix: query uses no attribute");
      }
      if (row.back() >= attributes_.size()) {
        throw std::out_of_range("UsageMatrix: attribute index out of range");
      }
      indices_.insert(indices_.end(), row.begin(), row.end());
      offsets_.push_back(indices_.size());
    }
  }

  /// Builds from a row-major dense 0/1 grid of rows() x cols() cells.
  static UsageMatrix from_dense(Labels query_ids, Labels attributes,
                                std::span<const std::uint8_t> cells) {
    const std::size_t n = attributes.size();
    if (cells.size() != query_ids.size() * n) {
      throw std::invalid_argument("UsageMatrix: dense cell count mismatch");
    }
    std::vector<std::vector<std::size_t>> rows(query_ids.size());
    for (std::size_t q = 0; q < rows.size(); ++q) {
      for (std::size_t k = 0; k < n; ++k) {
        if (cells[q * n + k] > 1) {
          throw std::invalid_argument("UsageMatrix: cell is not binary");
        }
        if (cells[q * n + k] == 1) rows[q].push_back(k);
      }
    }
    return UsageMatrix(std::move(query_ids), std::move(attributes),
                       std::move(rows));
  }

  std::size_t rows() const noexcept { return query_ids_.size(); }
  std::size_t cols() const noexcept { return attributes_.size(); }
  const Labels& query_ids() const noexcept { return query_ids_; }
  const Labels& attributes() const noexcept { return attributes_; }

  std::span<const std::size_t> row(std::size_t query) const {
    return {indices_.data() + offsets_.at(query),
            offsets_.at(query + 1) - offsets_[query]};
  }

  bool at(std::size_t query, std::size_t attribute) const {
    auto r = row(query);
    return std::binary_search(r.begin(), r.end(), attribute);
  }

  friend bool operator==(const UsageMatrix&, const UsageMatrix&) = default;

 private:
  Labels query_ids_;
  Labels attributes_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> indices_;
};

/// Co-occurrence counts. The diagonal is undefined; the total measure of a
/// row is the sum of its off-diagonal counts. Symmetry is not enforced so a
/// matrix transcribed from elsewhere can be fed to later stages verbatim;
/// build_adm always produces a symmetric one.
class DependencyMatrix {
 public:
  DependencyMatrix() = default;

  /// `counts` is row-major n x n; diagonal entries are ignored.
  DependencyMatrix(Labels attributes, std::vector<std::int64_t> counts)
      : attributes_(std::move(attributes)), counts_(std::move(counts)) {
    const std::size_t n = attributes_.size();
    if (counts_.size() != n * n) {
      throw std::invalid_argument("DependencyMatrix: expected n*n counts");
    }
    totals_.assign(n, 0);
    for (std::size_t h = 0; h < n; ++h) {
      counts_[h * n + h] = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (counts_[h * n + k] < 0) {
          throw std::invalid_argument("DependencyMatrix: negative count");
        }
        totals_[h] += counts_[h * n + k];
      }
    }
  }

  std::size_t size() const noexcept { return attributes_.size(); }
  const Labels& attributes() const noexcept { return attributes_; }

  /// nullopt on the diagonal.
  std::optional<std::int64_t> at(std::size_t h, std::size_t k) const {
    check(h, k);
    if (h == k) return std::nullopt;
    return counts_[h * size() + k];
  }

  /// Raw count; 0 on the diagonal.
  std::int64_t count(std::size_t h, std::size_t k) const noexcept {
    return counts_[h * size() + k];
  }

  std::int64_t total_measure(std::size_t h) const { return totals_.at(h); }
  const std::vector<std::int64_t>& total_measures() const noexcept {
    return totals_;
  }

  bool symmetric() const noexcept {
    const std::size_t n = size();
    for (std::size_t h = 0; h < n; ++h) {
      for (std::size_t k = h + 1; k < n; ++k) {
        if (counts_[h * n + k] != counts_[k * n + h]) return false;
      }
    }
    return true;
  }

  friend bool operator==(const DependencyMatrix&,
                         const DependencyMatrix&) = default;

 private:
  void check(std::size_t h, std::size_t k) const {
    if (h >= size() || k >= size()) {
      throw std::out_of_range("DependencyMatrix: index out of range");
    }
  }

  Labels attributes_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> totals_;
};

enum class MatrixKind { pdm, nsm, nnsm };

constexpr std::string_view to_string(MatrixKind kind) noexcept {
  switch (kind) {
    case MatrixKind::pdm:
      return "pdm";
    case MatrixKind::nsm:
      return "nsm";
    case MatrixKind::nnsm:
      return "nnsm";
  }
  return "?";
}

inline std::optional<MatrixKind> parse_matrix_kind(std::string_view s) {
  if (s == "pdm") return MatrixKind::pdm;
  if (s == "nsm") return MatrixKind::nsm;
  if (s == "nnsm") return MatrixKind::nnsm;
  return std::nullopt;
}

/// Square real matrix whose cells are either a finite value or undefined.
/// The diagonal is always undefined.
class MaskedMatrix {
 public:
  MaskedMatrix() = default;

  MaskedMatrix(MatrixKind kind, Labels attributes)
      : kind_(kind),
        attributes_(std::move(attributes)),
        cells_(attributes_.size() * attributes_.size()) {}

  MatrixKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return attributes_.size(); }
  const Labels& attributes() const noexcept { return attributes_; }

  std::optional<double> at(std::size_t h, std::size_t k) const {
    check(h, k);
    return cells_[h * size() + k];
  }

  bool defined(std::size_t h, std::size_t k) const {
    return at(h, k).has_value();
  }

  void set(std::size_t h, std::size_t k, double value) {
    check(h, k);
    if (h == k) throw std::invalid_argument("MaskedMatrix: diagonal cell");
    if (!std::isfinite(value)) {
      throw std::invalid_argument("MaskedMatrix: non-finite value");
    }
    cells_[h * size() + k] = value;
  }

  void clear(std::size_t h, std::size_t k) {
    check(h, k);
    cells_[h * size() + k].reset();
  }

  std::span<const std::optional<double>> row(std::size_t h) const {
    check(h, 0);
    return {cells_.data() + h * size(), size()};
  }

  friend bool operator==(const MaskedMatrix&, const MaskedMatrix&) = default;

 private:
  void check(std::size_t h, std::size_t k) const {
    if (h >= size() || k >= size()) {
      throw std::out_of_range("MaskedMatrix: index out of range");
    }
  }

  MatrixKind kind_ = MatrixKind::pdm;
  Labels attributes_;
  std::vector<std::optional<double>> cells_;
};

struct AttributeStats {
  double mean = 0.0;
  double variance = 0.0;
  double sd = 0.0;

  friend bool operator==(const AttributeStats&,
                         const AttributeStats&) = default;
};

/// One column per attribute; nullopt marks an attribute without any defined
/// probability cell (isolated).
struct StatsTable {
  Labels attributes;
  std::vector<std::optional<AttributeStats>> entries;

  std::size_t size() const noexcept { return attributes.size(); }

  std::optional<double> sd(std::size_t h) const {
    const auto& e = entries.at(h);
    return e ? std::optional<double>(e->sd) : std::nullopt;
  }

  friend bool operator==(const StatsTable&, const StatsTable&) = default;
};

}  // namespace attrscale
