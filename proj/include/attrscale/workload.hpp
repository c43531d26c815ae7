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

// Workload loading, query selection and attribute thresholding: everything
// that happens before the usage matrix is built.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "attrscale/catalog.hpp"
#include "attrscale/errors.hpp"
#include "attrscale/sql_columns.hpp"

namespace attrscale {

struct SqlText {
  std::string text;
  friend bool operator==(const SqlText&, const SqlText&) = default;
};

struct AttributeList {
  std::vector<std::string> names;
  friend bool operator==(const AttributeList&, const AttributeList&) = default;
};

struct QueryRecord {
  std::string id;
  std::optional<std::int64_t> timestamp_ms;
  std::variant<SqlText, AttributeList> body;

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

enum class InputFormat { jsonl_sql, jsonl_attrs };

constexpr std::string_view to_string(InputFormat f) noexcept {
  return f == InputFormat::jsonl_sql ? "jsonl-sql" : "jsonl-attrs";
}

inline std::optional<InputFormat> parse_input_format(std::string_view s) {
  if (s == "jsonl-sql") return InputFormat::jsonl_sql;
  if (s == "jsonl-attrs") return InputFormat::jsonl_attrs;
  return std::nullopt;
}

namespace detail {

inline QueryRecord parse_record(const std::string& line, InputFormat format,
                                std::size_t lineno) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what(), lineno);
  }
  if (!j.is_object()) throw InputError("record is not an object", lineno);

  QueryRecord rec;
  auto id = j.find("id");
  if (id == j.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw InputError("missing or non-string \"id\"", lineno);
  }
  rec.id = id->get<std::string>();

  if (auto ts = j.find("ts"); ts != j.end() && !ts->is_null()) {
    if (!ts->is_number_integer()) {
      throw InputError("\"ts\" must be an integer (epoch ms)", lineno);
    }
    rec.timestamp_ms = ts->get<std::int64_t>();
  }

  const bool has_sql = j.contains("sql");
  const bool has_attrs = j.contains("attrs");
  if (has_sql && has_attrs) {
    throw InputError("record carries both \"sql\" and \"attrs\"", lineno);
  }
  if (format == InputFormat::jsonl_sql) {
    if (!has_sql || !j["sql"].is_string()) {
      throw InputError("expected string \"sql\"", lineno);
    }
    rec.body = SqlText{j["sql"].get<std::string>()};
  } else {
    if (!has_attrs || !j["attrs"].is_array()) {
      throw InputError("expected array \"attrs\"", lineno);
    }
    AttributeList list;
    for (const auto& a : j["attrs"]) {
      if (!a.is_string()) {
        throw InputError("\"attrs\" entries must be strings", lineno);
      }
      list.names.push_back(a.get<std::string>());
    }
    rec.body = std::move(list);
  }
  return rec;
}

}  // namespace detail

/// Reads one JSON record per line; blank lines are skipped. Records keep
/// file order. Ids must be unique.
inline std::vector<QueryRecord> parse_workload(std::istream& in,
                                               InputFormat format) {
  std::vector<QueryRecord> records;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    QueryRecord rec = detail::parse_record(line, format, lineno);
    if (!ids.insert(rec.id).second) {
      throw InputError("duplicate id '" + rec.id + "'", lineno);
    }
    records.push_back(std::move(rec));
  }
  if (in.bad()) throw InputError("read failure");
  return records;
}

inline std::vector<QueryRecord> load_workload(const std::filesystem::path& path,
                                              InputFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open workload " + path.string());
  return parse_workload(in, format);
}

/// Catalog of every attribute named by attribute-list records, in order of
/// first appearance. SQL records contribute nothing.
inline AttributeCatalog catalog_from_records(
    std::span<const QueryRecord> records) {
  Labels names;
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (const auto* list = std::get_if<AttributeList>(&r.body)) {
      for (const auto& n : list->names) {
        if (trim(n).empty()) continue;
        if (seen.insert(fold_identifier(n)).second) {
          names.emplace_back(trim(n));
        }
      }
    }
  }
  return AttributeCatalog(std::move(names));
}

struct SelectAll {
  friend bool operator==(const SelectAll&, const SelectAll&) = default;
};

struct RandomSelection {
  std::int64_t count = 1;
  std::uint64_t seed = 0;
  friend bool operator==(const RandomSelection&,
                         const RandomSelection&) = default;
};

/// Inclusive epoch-millisecond window.
struct IntervalSelection {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  friend bool operator==(const IntervalSelection&,
                         const IntervalSelection&) = default;
};

using SelectionMode = std::variant<SelectAll, RandomSelection, IntervalSelection>;

struct SelectionSpec {
  SelectionMode mode = SelectAll{};
  /// Minimum fraction of the selected queries an attribute must appear in.
  double usage_threshold = 0.0;

  void validate() const {
    if (!(usage_threshold >= 0.0 && usage_threshold <= 1.0)) {
      throw SelectionError("usage threshold must lie in [0, 1]");
    }
    if (const auto* r = std::get_if<RandomSelection>(&mode); r && r->count < 1) {
      throw SelectionError("random selection count must be >= 1");
    }
    if (const auto* iv = std::get_if<IntervalSelection>(&mode);
        iv && iv->start_ms > iv->end_ms) {
      throw SelectionError("interval start is after its end");
    }
  }

  friend bool operator==(const SelectionSpec&, const SelectionSpec&) = default;
};

/// Applies the selection mode. Random selection draws min(count, size)
/// records without replacement using a seeded mt19937_64 and keeps input
/// order; interval selection keeps records with start <= ts <= end.
inline std::vector<QueryRecord> select_queries(
    std::span<const QueryRecord> records, const SelectionSpec& spec) {
  spec.validate();
  return std::visit(
      [&](const auto& mode) -> std::vector<QueryRecord> {
        using M = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<M, SelectAll>) {
          return {records.begin(), records.end()};
        } else if constexpr (std::is_same_v<M, RandomSelection>) {
          std::vector<QueryRecord> out;
          std::mt19937_64 rng(mode.seed);
          std::sample(records.begin(), records.end(), std::back_inserter(out),
                      static_cast<std::size_t>(mode.count), rng);
          return out;
        } else {
          std::vector<QueryRecord> out;
          for (const auto& r : records) {
            if (!r.timestamp_ms) {
              throw SelectionError("interval selection: record '" + r.id +
                                   "' has no timestamp");
            }
            if (*r.timestamp_ms >= mode.start_ms &&
                *r.timestamp_ms <= mode.end_ms) {
              out.push_back(r);
            }
          }
          return out;
        }
      },
      spec.mode);
}

enum class DiagnosticKind { dropped_query, unknown_identifier };

constexpr std::string_view to_string(DiagnosticKind k) noexcept {
  return k == DiagnosticKind::dropped_query ? "dropped_query"
                                            : "unknown_identifier";
}

struct Diagnostic {
  DiagnosticKind kind;
  std::string query_id;
  std::string detail;
  std::optional<std::size_t> offset;  // byte offset into the SQL text

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct UsageRow {
  std::string query_id;
  std::vector<std::size_t> attributes;  // sorted indices into the catalog

  friend bool operator==(const UsageRow&, const UsageRow&) = default;
};

/// The m x n input of the pipeline. Every row is non-empty and every index
/// valid for `catalog`.
struct UsageSet {
  std::vector<UsageRow> queries;
  AttributeCatalog catalog;
  std::size_t selected_count = 0;  // usage-ratio denominator
  std::vector<std::string> pruned_attributes;
  std::vector<Diagnostic> diagnostics;

  std::size_t dropped_count() const {
    return static_cast<std::size_t>(
        std::count_if(diagnostics.begin(), diagnostics.end(), [](const auto& d) {
          return d.kind == DiagnosticKind::dropped_query;
        }));
  }

  friend bool operator==(const UsageSet&, const UsageSet&) = default;
};

/// Maps every record onto catalog indices, prunes attributes whose usage
/// ratio (queries using it / records given) is below `usage_threshold`,
/// drops queries left empty, and re-packs the surviving attributes densely
/// in catalog order. Throws EmptyAnalysisError when nothing survives and
/// SqlError for SQL outside the supported subset.
inline UsageSet build_usage_set(std::span<const QueryRecord> records,
                                const AttributeCatalog& catalog,
                                double usage_threshold) {
  if (!(usage_threshold >= 0.0 && usage_threshold <= 1.0)) {
    throw SelectionError("usage threshold must lie in [0, 1]");
  }
  if (catalog.empty()) throw EmptyAnalysisError("catalog is empty");
  if (records.empty()) throw EmptyAnalysisError("no queries selected");

  UsageSet out;
  out.selected_count = records.size();

  std::vector<std::vector<std::size_t>> sets;
  sets.reserve(records.size());
  for (const auto& r : records) {
    std::vector<std::size_t> set;
    if (const auto* list = std::get_if<AttributeList>(&r.body)) {
      for (const auto& name : list->names) {
        if (auto idx = catalog.find(name)) {
          set.push_back(*idx);
        } else {
          out.diagnostics.push_back({DiagnosticKind::unknown_identifier, r.id,
                                     std::string(trim(name)), std::nullopt});
        }
      }
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
    } else {
      const auto& text = std::get<SqlText>(r.body).text;
      ColumnExtraction ex;
      try {
        ex = extract_attributes(text, catalog);
      } catch (const SqlError& e) {
        throw SqlError(e.kind(), e.offset(),
                       "query '" + r.id + "': " + e.detail());
      }
      for (const auto& u : ex.unresolved) {
        out.diagnostics.push_back({DiagnosticKind::unknown_identifier, r.id,
                                   u.reference + " (" + u.reason + ")",
                                   u.offset});
      }
      set = std::move(ex.attributes);
    }
    sets.push_back(std::move(set));
  }

  std::vector<std::size_t> usage(catalog.size(), 0);
  for (const auto& s : sets) {
    for (auto k : s) ++usage[k];
  }
  const double denom = static_cast<double>(records.size());
  std::vector<std::size_t> remap(catalog.size(), SIZE_MAX);
  Labels kept;
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    const double ratio = static_cast<double>(usage[k]) / denom;
    if (ratio < usage_threshold) {
      out.pruned_attributes.push_back(catalog.name(k));
    } else {
      remap[k] = kept.size();
      kept.push_back(catalog.name(k));
    }
  }
  if (kept.empty()) {
    throw EmptyAnalysisError("no attribute reaches usage threshold " +
                             std::to_string(usage_threshold));
  }
  out.catalog =
      AttributeCatalog(std::move(kept), catalog.database_attribute_count());

  for (std::size_t q = 0; q < records.size(); ++q) {
    UsageRow row{records[q].id, {}};
    for (auto k : sets[q]) {
      if (remap[k] != SIZE_MAX) row.attributes.push_back(remap[k]);
    }
    if (row.attributes.empty()) {
      out.diagnostics.push_back(
          {DiagnosticKind::dropped_query, row.query_id,
           sets[q].empty() ? "no catalog attribute referenced"
                           : "every attribute pruned by usage threshold",
           std::nullopt});
      continue;
    }
    out.queries.push_back(std::move(row));
  }
  if (out.queries.empty()) {
    throw EmptyAnalysisError("every selected query was dropped");
  }
  return out;
}

}  // namespace attrscale
