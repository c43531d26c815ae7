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

// The numeric dependency scale between attributes of a query workload.
//
// Six stages, each a pure function of the previous ones:
//
//   usage set -> QAUM (query x attribute usage, binary)
//             -> ADM  (attribute co-occurrence counts + total measure)
//             -> PDM  (ADM row-normalized by total measure)
//             -> MVSD (per-attribute mean/variance/SD of the counts under
//                      the PDM probabilities)
//             -> NSM  (|SD_h - SD_k| / ADM[h,k]; lower = stronger)
//             -> NNSM (NSM rows rescaled so the row maximum is 10)
//
// A cell that is not applicable (diagonal, zero co-occurrence) is undefined
// in every real-valued stage. Everything is computed in double precision;
// rounding is a display concern only.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "attrscale/matrix.hpp"
#include "attrscale/workload.hpp"

namespace attrscale {

enum class WarningKind {
  isolated_attribute,
  degenerate_tie,
  empty_ranking,
  mvsd_override
};

constexpr std::string_view to_string(WarningKind k) noexcept {
  switch (k) {
    case WarningKind::isolated_attribute:
      return "isolated_attribute";
    case WarningKind::degenerate_tie:
      return "degenerate_tie";
    case WarningKind::empty_ranking:
      return "empty_ranking";
    case WarningKind::mvsd_override:
      return "mvsd_override";
  }
  return "?";
}

inline std::optional<WarningKind> parse_warning_kind(std::string_view s) {
  for (auto k : {WarningKind::isolated_attribute, WarningKind::degenerate_tie,
                 WarningKind::empty_ranking, WarningKind::mvsd_override}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

struct Warning {
  WarningKind kind;
  std::string attribute;  // empty when not attribute-specific
  std::string message;

  friend bool operator==(const Warning&, const Warning&) = default;
};

using WarningLog = std::vector<Warning>;

inline UsageMatrix build_qaum(const UsageSet& usage) {
  if (usage.queries.empty()) throw EmptyAnalysisError("usage set is empty");
  Labels ids;
  std::vector<std::vector<std::size_t>> rows;
  ids.reserve(usage.queries.size());
  rows.reserve(usage.queries.size());
  for (const auto& q : usage.queries) {
    ids.push_back(q.query_id);
    rows.push_back(q.attributes);
  }
  return UsageMatrix(std::move(ids), usage.catalog.attributes(),
                     std::move(rows));
}

/// Counts, for every attribute pair, the queries using both. Each unordered
/// pair is counted once and mirrored, so the result is symmetric. Cost is
/// O(n^2 + sum over queries of |row|^2).
inline DependencyMatrix build_adm(const UsageMatrix& qaum) {
  const std::size_t n = qaum.cols();
  std::vector<std::int64_t> counts(n * n, 0);
  for (std::size_t q = 0; q < qaum.rows(); ++q) {
    const auto row = qaum.row(q);
    for (std::size_t i = 0; i < row.size(); ++i) {
      for (std::size_t j = i + 1; j < row.size(); ++j) {
        ++counts[row[i] * n + row[j]];
      }
    }
  }
  for (std::size_t h = 0; h < n; ++h) {
    for (std::size_t k = h + 1; k < n; ++k) {
      counts[k * n + h] = counts[h * n + k];
    }
  }
  return DependencyMatrix(qaum.attributes(), std::move(counts));
}

/// PDM[h,k] = ADM[h,k] / total_measure[h]. Undefined on the diagonal and
/// where ADM is 0. A row with zero total measure is left entirely undefined
/// and reported as isolated.
inline MaskedMatrix build_pdm(const DependencyMatrix& adm,
                              WarningLog* warnings = nullptr) {
  const std::size_t n = adm.size();
  MaskedMatrix pdm(MatrixKind::pdm, adm.attributes());
  for (std::size_t h = 0; h < n; ++h) {
    const auto total = adm.total_measure(h);
    if (total == 0) {
      if (warnings) {
        warnings->push_back({WarningKind::isolated_attribute,
                             adm.attributes()[h],
                             "attribute never co-occurs with another; row "
                             "left undefined"});
      }
      continue;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const auto c = adm.count(h, k);
      if (h == k || c == 0) continue;
      pdm.set(h, k, static_cast<double>(c) / static_cast<double>(total));
    }
  }
  return pdm;
}

/// For each attribute h, treats row h of ADM as a discrete variable taking
/// value ADM[h,k] with probability PDM[h,k] over the defined cells:
///   mean = sum p*x,  variance = sum p*(x - mean)^2,  sd = sqrt(variance).
/// Because p = x / T (T the total measure), these reduce to power sums of
/// the counts: mean = S2 / T and variance = (T*S3 - S2^2) / T^2. The sums are
/// accumulated in integers, so each statistic is rounded once and rows with
/// the same counts in any column order get bit-identical results. PDM
/// supplies the mask only. Rows without a defined cell get no statistics.
inline StatsTable compute_mvsd(const DependencyMatrix& adm,
                               const MaskedMatrix& pdm) {
  using Wide = __int128;
  const std::size_t n = adm.size();
  if (pdm.size() != n || pdm.kind() != MatrixKind::pdm) {
    throw std::invalid_argument("compute_mvsd: PDM does not match ADM");
  }
  StatsTable stats{adm.attributes(), {}};
  stats.entries.resize(n);
  for (std::size_t h = 0; h < n; ++h) {
    const auto row = pdm.row(h);
    Wide s1 = 0, s2 = 0, s3 = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!row[k]) continue;
      const Wide x = adm.count(h, k);
      s1 += x;
      s2 += x * x;
      s3 += x * x * x;
    }
    if (s1 == 0) continue;
    const Wide num = s1 * s3 - s2 * s2;  // Cauchy-Schwarz: never negative
    const double t = static_cast<double>(s1);
    const double variance = static_cast<double>(num) / (t * t);
    stats.entries[h] = AttributeStats{static_cast<double>(s2) / t, variance,
                                      std::sqrt(variance)};
  }
  return stats;
}

/// NSM[h,k] = |SD_h - SD_k| / ADM[h,k] wherever PDM[h,k] would be defined
/// (off-diagonal, ADM > 0) and both SDs exist.
inline MaskedMatrix compute_nsm(const DependencyMatrix& adm,
                                const StatsTable& stats) {
  const std::size_t n = adm.size();
  if (stats.size() != n || stats.entries.size() != n) {
    throw std::invalid_argument("compute_nsm: statistics do not match ADM");
  }
  MaskedMatrix nsm(MatrixKind::nsm, adm.attributes());
  for (std::size_t h = 0; h < n; ++h) {
    const auto sd_h = stats.sd(h);
    if (!sd_h || adm.total_measure(h) == 0) continue;
    for (std::size_t k = 0; k < n; ++k) {
      const auto c = adm.count(h, k);
      if (h == k || c == 0) continue;
      const auto sd_k = stats.sd(k);
      if (!sd_k) continue;
      nsm.set(h, k, std::abs(*sd_h - *sd_k) / static_cast<double>(c));
    }
  }
  return nsm;
}

/// Rescales each NSM row so its maximum defined cell becomes 10. A row whose
/// defined cells are all 0 stays 0 and is reported as a degenerate tie.
inline MaskedMatrix compute_nnsm(const MaskedMatrix& nsm,
                                 WarningLog* warnings = nullptr) {
  if (nsm.kind() != MatrixKind::nsm) {
    throw std::invalid_argument("compute_nnsm: input is not an NSM");
  }
  const std::size_t n = nsm.size();
  MaskedMatrix nnsm(MatrixKind::nnsm, nsm.attributes());
  for (std::size_t h = 0; h < n; ++h) {
    const auto row = nsm.row(h);
    bool any = false;
    double max = 0.0;
    for (const auto& cell : row) {
      if (!cell) continue;
      any = true;
      if (*cell > max) max = *cell;
    }
    if (!any) continue;
    if (max > 0.0) {
      for (std::size_t k = 0; k < n; ++k) {
        if (row[k]) nnsm.set(h, k, (*row[k] / max) * 10.0);
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        if (row[k]) nnsm.set(h, k, 0.0);
      }
      if (warnings) {
        warnings->push_back({WarningKind::degenerate_tie, nsm.attributes()[h],
                             "all defined scale cells are 0; row left at 0"});
      }
    }
  }
  return nnsm;
}

/// Every intermediate of one run.
struct ScaleBundle {
  UsageMatrix qaum;
  DependencyMatrix adm;
  MaskedMatrix pdm;
  StatsTable mvsd;
  MaskedMatrix nsm;
  MaskedMatrix nnsm;
  WarningLog warnings;

  const Labels& attributes() const noexcept { return adm.attributes(); }

  std::optional<std::size_t> find(std::string_view name) const {
    const auto& attrs = attributes();
    const std::string key = fold_identifier(name);
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (fold_identifier(attrs[i]) == key) return i;
    }
    return std::nullopt;
  }

  std::vector<std::string> isolated_attributes() const {
    std::vector<std::string> out;
    for (std::size_t h = 0; h < adm.size(); ++h) {
      if (adm.total_measure(h) == 0) out.push_back(attributes()[h]);
    }
    return out;
  }

  friend bool operator==(const ScaleBundle&, const ScaleBundle&) = default;
};

struct PipelineOptions {
  /// Replaces the computed statistics stage, e.g. with externally supplied
  /// reference values. Attribute labels must match the ADM.
  std::optional<StatsTable> mvsd_override;
};

inline ScaleBundle run_pipeline(UsageMatrix qaum,
                                const PipelineOptions& options = {}) {
  ScaleBundle b;
  b.qaum = std::move(qaum);
  b.adm = build_adm(b.qaum);
  b.pdm = build_pdm(b.adm, &b.warnings);
  if (options.mvsd_override) {
    if (options.mvsd_override->attributes != b.adm.attributes() ||
        options.mvsd_override->entries.size() != b.adm.size()) {
      throw InputError("MVSD override does not match the analyzed attributes");
    }
    b.mvsd = *options.mvsd_override;
    b.warnings.push_back({WarningKind::mvsd_override, "",
                          "statistics stage replaced by supplied values"});
  } else {
    b.mvsd = compute_mvsd(b.adm, b.pdm);
  }
  b.nsm = compute_nsm(b.adm, b.mvsd);
  b.nnsm = compute_nnsm(b.nsm, &b.warnings);
  return b;
}

inline ScaleBundle run_pipeline(const UsageSet& usage,
                                const PipelineOptions& options = {}) {
  return run_pipeline(build_qaum(usage), options);
}

}  // namespace attrscale
