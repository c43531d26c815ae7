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


// Library-side helpers shared by the unit and acceptance tests: fixture
// paths, matrices built from the printed tables, and random workloads.

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "attrscale.hpp"
#include "oracles.hpp"
#include "reference_tables.hpp"

namespace attrscale::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(ATTRSCALE_FIXTURE_DIR) / name;
}

inline oracle::Dense example_dense() {
  oracle::Dense d;
  for (const auto& row : printed::kUsage) d.emplace_back(row.begin(), row.end());
  return d;
}

inline UsageMatrix example_qaum() {
  std::vector<std::uint8_t> cells;
  for (const auto& row : printed::kUsage) {
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return UsageMatrix::from_dense(printed::query_ids(),
                                 printed::attribute_names(), cells);
}

/// The printed dependency table as-is, asymmetries included.
inline DependencyMatrix printed_adm() {
  std::vector<std::int64_t> counts;
  for (const auto& row : printed::kDependency) {
    counts.insert(counts.end(), row.begin(), row.end());
  }
  return DependencyMatrix(printed::attribute_names(), std::move(counts));
}

inline oracle::IntGrid printed_adm_grid() {
  oracle::IntGrid g;
  for (const auto& row : printed::kDependency) g.emplace_back(row.begin(), row.end());
  return g;
}

/// Statistics table with the printed SD row (mean and variance rows too).
inline StatsTable printed_stats() {
  StatsTable s{printed::attribute_names(), {}};
  for (std::size_t i = 0; i < printed::kN; ++i) {
    s.entries.push_back(AttributeStats{printed::kMean[i], printed::kVariance[i],
                                       printed::kSd[i]});
  }
  return s;
}

inline MaskedMatrix printed_masked(MatrixKind kind, const printed::Grid& g) {
  MaskedMatrix m(kind, printed::attribute_names());
  for (std::size_t h = 0; h < printed::kN; ++h) {
    for (std::size_t k = 0; k < printed::kN; ++k) {
      if (h != k && !printed::is_hash(g[h][k])) m.set(h, k, g[h][k]);
    }
  }
  return m;
}

/// A bundle whose scale stages hold the printed values: QAUM from the usage
/// table, the printed dependency table, the printed statistics, and the
/// printed scale tables with the zero-count cell (a8,a4) left undefined.
inline ScaleBundle printed_bundle() {
  ScaleBundle b;
  b.qaum = example_qaum();
  b.adm = printed_adm();
  b.pdm = build_pdm(b.adm);
  b.mvsd = printed_stats();
  b.nsm = printed_masked(MatrixKind::nsm, printed::kScale);
  b.nsm.clear(7, 3);
  b.nnsm = printed_masked(MatrixKind::nnsm, printed::kNormalizedScale);
  return b;
}

inline oracle::Cells cells_of(const MaskedMatrix& m) {
  oracle::Cells out = oracle::undefined_cells(m.size());
  for (std::size_t h = 0; h < m.size(); ++h) {
    for (std::size_t k = 0; k < m.size(); ++k) out[h][k] = m.at(h, k);
  }
  return out;
}

inline std::vector<std::string> numbered(const std::string& prefix,
                                         std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(prefix + std::to_string(i + 1));
  }
  return out;
}

/// Random m x n usage matrix; every query uses at least one attribute.
inline oracle::Dense random_dense(std::mt19937_64& rng, std::size_t m,
                                  std::size_t n, double density) {
  std::bernoulli_distribution use(density);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  oracle::Dense d(m, std::vector<std::uint8_t>(n, 0));
  for (auto& row : d) {
    bool any = false;
    for (auto& c : row) {
      c = use(rng) ? 1 : 0;
      any = any || c;
    }
    if (!any) row[pick(rng)] = 1;
  }
  return d;
}

inline UsageMatrix to_usage_matrix(const oracle::Dense& d, std::size_t n) {
  std::vector<std::uint8_t> cells;
  for (const auto& row : d) cells.insert(cells.end(), row.begin(), row.end());
  return UsageMatrix::from_dense(numbered("q", d.size()), numbered("c", n),
                                 cells);
}

}  // namespace attrscale::testing
