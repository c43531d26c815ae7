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

// Matrix exchange formats.
//
// CSV: first row is `<kind>,<col labels...>`, then one `<row label>,cells`
// line per row. Undefined cells are the literal `#`. The ADM carries an
// extra trailing `total_measure` column; MVSD has rows mean/variance/sd.
//
// JSON: {"kind": ..., "rows": [...], "columns": [...], "cells": [[...]]}
// with null for undefined cells. Full-precision values use the shortest
// representation that round-trips, so export -> import -> export is
// byte-identical. Passing a precision selects the fixed-point display
// rendering instead.

#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "attrscale/analytics.hpp"
#include "attrscale/errors.hpp"
#include "attrscale/matrix.hpp"
#include "attrscale/numeric_scale.hpp"
#include "attrscale/workload.hpp"

namespace attrscale {

using json = nlohmann::json;

inline constexpr std::string_view kUndefinedCell = "#";

/// Shortest decimal text that parses back to the same double.
inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_number failed");
  return std::string(buf.data(), p);
}

inline std::string format_fixed(double v, int precision) {
  std::array<char, 128> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                               std::chars_format::fixed, precision);
  if (ec != std::errc()) throw std::runtime_error("format_fixed failed");
  return std::string(buf.data(), p);
}

inline std::string format_cell(std::optional<double> v,
                               std::optional<int> precision) {
  if (!v) return std::string(kUndefinedCell);
  return precision ? format_fixed(*v, *precision) : format_number(*v);
}

inline std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<std::int64_t> parse_integer(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------------------
// CSV primitives (RFC 4180 quoting)

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

using CsvRows = std::vector<std::vector<std::string>>;

inline CsvRows parse_csv(std::string_view text) {
  CsvRows rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) throw InputError("csv: stray quote", line);
        quoted = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
        break;
      case '\r':
        break;
      case '\n':
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
        row.clear();
        field.clear();
        field_started = false;
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) throw InputError("csv: unterminated quote", line);
  if (field_started || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline void csv_line(std::string& out, std::string_view head,
                     const std::vector<std::string>& cells) {
  out += csv_field(head);
  for (const auto& c : cells) {
    out += ',';
    out += csv_field(c);
  }
  out += '\n';
}

inline void expect_shape(const CsvRows& rows, std::string_view corner,
                         std::size_t body_rows, std::size_t width) {
  if (rows.empty() || rows[0].empty() || rows[0][0] != corner) {
    throw InputError("csv: expected header starting with '" +
                         std::string(corner) + "'",
                     1);
  }
  if (rows.size() != body_rows + 1) {
    throw InputError("csv: expected " + std::to_string(body_rows) +
                     " data rows");
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw InputError("csv: expected " + std::to_string(width) + " fields",
                       r + 1);
    }
  }
}

inline std::optional<double> cell_value(const std::string& s,
                                        std::size_t line) {
  if (s == kUndefinedCell) return std::nullopt;
  auto v = parse_number(s);
  if (!v) throw InputError("csv: bad number '" + s + "'", line);
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CSV writers

inline std::string to_csv(const UsageMatrix& m) {
  std::string out;
  detail::csv_line(out, "qaum", m.attributes());
  for (std::size_t q = 0; q < m.rows(); ++q) {
    std::vector<std::string> cells(m.cols(), "0");
    for (auto k : m.row(q)) cells[k] = "1";
    detail::csv_line(out, m.query_ids()[q], cells);
  }
  return out;
}

inline std::string to_csv(const DependencyMatrix& m) {
  std::string out;
  auto header = m.attributes();
  header.push_back("total_measure");
  detail::csv_line(out, "adm", header);
  for (std::size_t h = 0; h < m.size(); ++h) {
    std::vector<std::string> cells;
    cells.reserve(m.size() + 1);
    for (std::size_t k = 0; k < m.size(); ++k) {
      cells.push_back(h == k ? std::string(kUndefinedCell)
                             : std::to_string(m.count(h, k)));
    }
    cells.push_back(std::to_string(m.total_measure(h)));
    detail::csv_line(out, m.attributes()[h], cells);
  }
  return out;
}

inline std::string to_csv(const MaskedMatrix& m,
                          std::optional<int> precision = std::nullopt) {
  std::string out;
  detail::csv_line(out, to_string(m.kind()), m.attributes());
  for (std::size_t h = 0; h < m.size(); ++h) {
    std::vector<std::string> cells;
    cells.reserve(m.size());
    for (const auto& c : m.row(h)) cells.push_back(format_cell(c, precision));
    detail::csv_line(out, m.attributes()[h], cells);
  }
  return out;
}

inline std::string to_csv(const StatsTable& s,
                          std::optional<int> precision = std::nullopt) {
  std::string out;
  detail::csv_line(out, "mvsd", s.attributes);
  constexpr std::array<std::string_view, 3> rows = {"mean", "variance", "sd"};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::string> cells;
    for (const auto& e : s.entries) {
      std::optional<double> v;
      if (e) v = r == 0 ? e->mean : r == 1 ? e->variance : e->sd;
      cells.push_back(format_cell(v, precision));
    }
    detail::csv_line(out, rows[r], cells);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV readers

inline UsageMatrix qaum_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw InputError("csv: empty qaum");
  const std::size_t width = rows[0].size();
  detail::expect_shape(rows, "qaum", rows.size() - 1, width);
  Labels attrs(rows[0].begin() + 1, rows[0].end());
  Labels ids;
  std::vector<std::vector<std::size_t>> sets;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    ids.push_back(rows[r][0]);
    std::vector<std::size_t> set;
    for (std::size_t k = 1; k < width; ++k) {
      if (rows[r][k] == "1") {
        set.push_back(k - 1);
      } else if (rows[r][k] != "0") {
        throw InputError("csv: qaum cell must be 0 or 1", r + 1);
      }
    }
    sets.push_back(std::move(set));
  }
  try {
    return UsageMatrix(std::move(ids), std::move(attrs), std::move(sets));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("csv: ") + e.what());
  }
}

inline DependencyMatrix adm_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows[0].size() < 2) throw InputError("csv: empty adm");
  const std::size_t n = rows[0].size() - 2;
  detail::expect_shape(rows, "adm", n, n + 2);
  if (rows[0].back() != "total_measure") {
    throw InputError("csv: adm header must end with total_measure", 1);
  }
  Labels attrs(rows[0].begin() + 1, rows[0].end() - 1);
  std::vector<std::int64_t> counts(n * n, 0);
  std::vector<std::int64_t> totals(n, 0);
  for (std::size_t h = 0; h < n; ++h) {
    const auto& row = rows[h + 1];
    if (row[0] != attrs[h]) throw InputError("csv: adm row label", h + 2);
    for (std::size_t k = 0; k < n; ++k) {
      if (h == k) {
        if (row[k + 1] != kUndefinedCell) {
          throw InputError("csv: adm diagonal must be '#'", h + 2);
        }
        continue;
      }
      auto v = parse_integer(row[k + 1]);
      if (!v) throw InputError("csv: bad count '" + row[k + 1] + "'", h + 2);
      counts[h * n + k] = *v;
    }
    auto t = parse_integer(row[n + 1]);
    if (!t) throw InputError("csv: bad total measure", h + 2);
    totals[h] = *t;
  }
  DependencyMatrix adm(std::move(attrs), std::move(counts));
  if (adm.total_measures() != totals) {
    throw InputError("csv: total_measure column disagrees with row sums");
  }
  return adm;
}

inline MaskedMatrix masked_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows[0].empty()) throw InputError("csv: empty matrix");
  const auto kind = parse_matrix_kind(rows[0][0]);
  if (!kind) throw InputError("csv: unknown matrix kind '" + rows[0][0] + "'", 1);
  const std::size_t n = rows[0].size() - 1;
  detail::expect_shape(rows, rows[0][0], n, n + 1);
  MaskedMatrix m(*kind, Labels(rows[0].begin() + 1, rows[0].end()));
  for (std::size_t h = 0; h < n; ++h) {
    if (rows[h + 1][0] != m.attributes()[h]) {
      throw InputError("csv: row label mismatch", h + 2);
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (auto v = detail::cell_value(rows[h + 1][k + 1], h + 2)) {
        if (h == k) throw InputError("csv: diagonal must be '#'", h + 2);
        m.set(h, k, *v);
      }
    }
  }
  return m;
}

inline StatsTable mvsd_from_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows[0].empty()) throw InputError("csv: empty mvsd");
  const std::size_t n = rows[0].size() - 1;
  detail::expect_shape(rows, "mvsd", 3, n + 1);
  constexpr std::array<std::string_view, 3> names = {"mean", "variance", "sd"};
  for (std::size_t r = 0; r < 3; ++r) {
    if (rows[r + 1][0] != names[r]) {
      throw InputError("csv: expected row '" + std::string(names[r]) + "'",
                       r + 2);
    }
  }
  StatsTable s{Labels(rows[0].begin() + 1, rows[0].end()), {}};
  s.entries.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto mean = detail::cell_value(rows[1][k + 1], 2);
    auto var = detail::cell_value(rows[2][k + 1], 3);
    auto sd = detail::cell_value(rows[3][k + 1], 4);
    if (!mean && !var && !sd) continue;
    if (!sd) throw InputError("csv: mvsd column without sd", 4);
    s.entries[k] = AttributeStats{mean.value_or(0.0), var.value_or(0.0), *sd};
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON (nlohmann ADL hooks)

namespace detail {

inline json optional_number(std::optional<double> v) {
  return v ? json(*v) : json(nullptr);
}

inline std::optional<double> number_or_null(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_number()) throw InputError("json: expected number or null");
  return j.get<double>();
}

inline void expect_kind(const json& j, std::string_view kind) {
  if (!j.is_object() || j.value("kind", "") != kind) {
    throw InputError("json: expected kind '" + std::string(kind) + "'");
  }
}

}  // namespace detail

inline void to_json(json& j, const UsageMatrix& m) {
  json cells = json::array();
  for (std::size_t q = 0; q < m.rows(); ++q) {
    std::vector<int> row(m.cols(), 0);
    for (auto k : m.row(q)) row[k] = 1;
    cells.push_back(row);
  }
  j = json{{"kind", "qaum"},
           {"rows", m.query_ids()},
           {"columns", m.attributes()},
           {"cells", std::move(cells)}};
}

inline void from_json(const json& j, UsageMatrix& m) {
  detail::expect_kind(j, "qaum");
  auto ids = j.at("rows").get<Labels>();
  auto attrs = j.at("columns").get<Labels>();
  const auto& cells = j.at("cells");
  if (!cells.is_array() || cells.size() != ids.size()) {
    throw InputError("json: qaum cells shape");
  }
  std::vector<std::vector<std::size_t>> sets;
  for (const auto& row : cells) {
    if (!row.is_array() || row.size() != attrs.size()) {
      throw InputError("json: qaum row width");
    }
    std::vector<std::size_t> set;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const int v = row[k].get<int>();
      if (v != 0 && v != 1) throw InputError("json: qaum cell not binary");
      if (v == 1) set.push_back(k);
    }
    sets.push_back(std::move(set));
  }
  m = UsageMatrix(std::move(ids), std::move(attrs), std::move(sets));
}

inline void to_json(json& j, const DependencyMatrix& m) {
  json cells = json::array();
  for (std::size_t h = 0; h < m.size(); ++h) {
    json row = json::array();
    for (std::size_t k = 0; k < m.size(); ++k) {
      row.push_back(h == k ? json(nullptr) : json(m.count(h, k)));
    }
    cells.push_back(std::move(row));
  }
  j = json{{"kind", "adm"},
           {"rows", m.attributes()},
           {"columns", m.attributes()},
           {"cells", std::move(cells)},
           {"total_measure", m.total_measures()}};
}

inline void from_json(const json& j, DependencyMatrix& m) {
  detail::expect_kind(j, "adm");
  auto attrs = j.at("columns").get<Labels>();
  const std::size_t n = attrs.size();
  if (j.at("rows").get<Labels>() != attrs) {
    throw InputError("json: adm rows and columns differ");
  }
  const auto& cells = j.at("cells");
  if (!cells.is_array() || cells.size() != n) throw InputError("json: adm shape");
  std::vector<std::int64_t> counts(n * n, 0);
  for (std::size_t h = 0; h < n; ++h) {
    if (!cells[h].is_array() || cells[h].size() != n) {
      throw InputError("json: adm row width");
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (h == k) continue;
      counts[h * n + k] = cells[h][k].get<std::int64_t>();
    }
  }
  m = DependencyMatrix(std::move(attrs), std::move(counts));
  if (j.contains("total_measure") &&
      j["total_measure"].get<std::vector<std::int64_t>>() != m.total_measures()) {
    throw InputError("json: total_measure disagrees with row sums");
  }
}

inline void to_json(json& j, const MaskedMatrix& m) {
  json cells = json::array();
  for (std::size_t h = 0; h < m.size(); ++h) {
    json row = json::array();
    for (const auto& c : m.row(h)) row.push_back(detail::optional_number(c));
    cells.push_back(std::move(row));
  }
  j = json{{"kind", to_string(m.kind())},
           {"rows", m.attributes()},
           {"columns", m.attributes()},
           {"cells", std::move(cells)}};
}

inline void from_json(const json& j, MaskedMatrix& m) {
  if (!j.is_object()) throw InputError("json: matrix must be an object");
  const auto kind = parse_matrix_kind(j.value("kind", ""));
  if (!kind) throw InputError("json: unknown matrix kind");
  auto attrs = j.at("columns").get<Labels>();
  const std::size_t n = attrs.size();
  const auto& cells = j.at("cells");
  if (!cells.is_array() || cells.size() != n) {
    throw InputError("json: matrix shape");
  }
  MaskedMatrix out(*kind, std::move(attrs));
  for (std::size_t h = 0; h < n; ++h) {
    if (!cells[h].is_array() || cells[h].size() != n) {
      throw InputError("json: matrix row width");
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (auto v = detail::number_or_null(cells[h][k])) {
        if (h == k) throw InputError("json: diagonal must be null");
        out.set(h, k, *v);
      }
    }
  }
  m = std::move(out);
}

inline void to_json(json& j, const StatsTable& s) {
  json mean = json::array(), var = json::array(), sd = json::array();
  for (const auto& e : s.entries) {
    mean.push_back(e ? json(e->mean) : json(nullptr));
    var.push_back(e ? json(e->variance) : json(nullptr));
    sd.push_back(e ? json(e->sd) : json(nullptr));
  }
  j = json{{"kind", "mvsd"},
           {"columns", s.attributes},
           {"mean", std::move(mean)},
           {"variance", std::move(var)},
           {"sd", std::move(sd)}};
}

inline void from_json(const json& j, StatsTable& s) {
  detail::expect_kind(j, "mvsd");
  StatsTable out{j.at("columns").get<Labels>(), {}};
  const std::size_t n = out.attributes.size();
  const auto &mean = j.at("mean"), &var = j.at("variance"), &sd = j.at("sd");
  if (mean.size() != n || var.size() != n || sd.size() != n) {
    throw InputError("json: mvsd shape");
  }
  out.entries.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto v = detail::number_or_null(sd[k]);
    if (!v) continue;
    out.entries[k] = AttributeStats{detail::number_or_null(mean[k]).value_or(0),
                                    detail::number_or_null(var[k]).value_or(0),
                                    *v};
  }
  s = std::move(out);
}

inline void to_json(json& j, const Warning& w) {
  j = json{{"kind", to_string(w.kind)},
           {"attribute", w.attribute},
           {"message", w.message}};
}

inline void from_json(const json& j, Warning& w) {
  auto kind = parse_warning_kind(j.at("kind").get<std::string>());
  if (!kind) throw InputError("json: unknown warning kind");
  w = Warning{*kind, j.at("attribute").get<std::string>(),
              j.at("message").get<std::string>()};
}

inline void to_json(json& j, const Diagnostic& d) {
  j = json{{"kind", to_string(d.kind)},
           {"query", d.query_id},
           {"detail", d.detail},
           {"offset", d.offset ? json(*d.offset) : json(nullptr)}};
}

inline void from_json(const json& j, Diagnostic& d) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "dropped_query" && kind != "unknown_identifier") {
    throw InputError("json: unknown diagnostic kind");
  }
  d.kind = kind == "dropped_query" ? DiagnosticKind::dropped_query
                                   : DiagnosticKind::unknown_identifier;
  d.query_id = j.at("query").get<std::string>();
  d.detail = j.at("detail").get<std::string>();
  d.offset.reset();
  if (!j.at("offset").is_null()) d.offset = j["offset"].get<std::size_t>();
}

inline void to_json(json& j, const AttributeCatalog& c) {
  j = json{{"attributes", c.attributes()},
           {"database_attribute_count",
            c.database_attribute_count() ? json(*c.database_attribute_count())
                                         : json(nullptr)}};
}

inline void from_json(const json& j, AttributeCatalog& c) {
  std::optional<std::size_t> m;
  if (!j.at("database_attribute_count").is_null()) {
    m = j["database_attribute_count"].get<std::size_t>();
  }
  c = AttributeCatalog(j.at("attributes").get<Labels>(), m);
}

inline void to_json(json& j, const UsageSet& u) {
  json queries = json::array();
  for (const auto& q : u.queries) {
    queries.push_back({{"id", q.query_id}, {"attributes", q.attributes}});
  }
  j = json{{"catalog", u.catalog},
           {"selected_count", u.selected_count},
           {"pruned_attributes", u.pruned_attributes},
           {"queries", std::move(queries)},
           {"diagnostics", u.diagnostics}};
}

inline void from_json(const json& j, UsageSet& u) {
  UsageSet out;
  out.catalog = j.at("catalog").get<AttributeCatalog>();
  out.selected_count = j.at("selected_count").get<std::size_t>();
  out.pruned_attributes = j.at("pruned_attributes").get<Labels>();
  for (const auto& q : j.at("queries")) {
    UsageRow row{q.at("id").get<std::string>(),
                 q.at("attributes").get<std::vector<std::size_t>>()};
    for (auto k : row.attributes) {
      if (k >= out.catalog.size()) throw InputError("json: usage index range");
    }
    out.queries.push_back(std::move(row));
  }
  out.diagnostics = j.at("diagnostics").get<std::vector<Diagnostic>>();
  u = std::move(out);
}

inline void to_json(json& j, const ScaleBundle& b) {
  j = json{{"qaum", b.qaum}, {"adm", b.adm},   {"pdm", b.pdm},
           {"mvsd", b.mvsd}, {"nsm", b.nsm},   {"nnsm", b.nnsm},
           {"warnings", b.warnings}};
}

inline void from_json(const json& j, ScaleBundle& b) {
  ScaleBundle out;
  out.qaum = j.at("qaum").get<UsageMatrix>();
  out.adm = j.at("adm").get<DependencyMatrix>();
  out.pdm = j.at("pdm").get<MaskedMatrix>();
  out.mvsd = j.at("mvsd").get<StatsTable>();
  out.nsm = j.at("nsm").get<MaskedMatrix>();
  out.nnsm = j.at("nnsm").get<MaskedMatrix>();
  out.warnings = j.at("warnings").get<WarningLog>();
  const auto& attrs = out.adm.attributes();
  if (out.qaum.attributes() != attrs || out.pdm.attributes() != attrs ||
      out.mvsd.attributes != attrs || out.nsm.attributes() != attrs ||
      out.nnsm.attributes() != attrs || out.pdm.kind() != MatrixKind::pdm ||
      out.nsm.kind() != MatrixKind::nsm || out.nnsm.kind() != MatrixKind::nnsm) {
    throw InputError("json: bundle stages disagree");
  }
  b = std::move(out);
}

// ---------------------------------------------------------------------------
// Rankings, groups, explanations

inline std::string to_csv(const AffinityRanking& r, std::size_t top,
                          std::optional<int> precision = std::nullopt) {
  std::string out = "rank,first,second,nnsm,nsm,adm\n";
  for (std::size_t i = 0; i < r.entries.size() && i < top; ++i) {
    const auto& e = r.entries[i];
    out += std::to_string(i + 1) + ',' + csv_field(e.first_name) + ',' +
           csv_field(e.second_name) + ',' + format_cell(e.nnsm, precision) +
           ',' + format_cell(e.nsm, precision) + ',' + std::to_string(e.adm) +
           '\n';
  }
  return out;
}

inline json ranking_json(const AffinityRanking& r, std::size_t top) {
  json entries = json::array();
  for (std::size_t i = 0; i < r.entries.size() && i < top; ++i) {
    const auto& e = r.entries[i];
    entries.push_back({{"rank", i + 1},
                       {"first", e.first_name},
                       {"second", e.second_name},
                       {"nnsm", e.nnsm},
                       {"nsm", e.nsm},
                       {"adm", e.adm}});
  }
  return json{{"key", to_string(r.key)},
              {"entries", std::move(entries)},
              {"warnings", r.warnings}};
}

inline std::string to_csv(const std::vector<AttributeGroup>& groups,
                          std::optional<int> precision = std::nullopt) {
  std::string out = "group,attributes,cohesion\n";
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::string members;
    for (const auto& n : groups[i].names) {
      if (!members.empty()) members += ';';
      members += n;
    }
    out += std::to_string(i + 1) + ',' + csv_field(members) + ',' +
           format_cell(groups[i].cohesion, precision) + '\n';
  }
  return out;
}

inline json groups_json(const std::vector<AttributeGroup>& groups) {
  json out = json::array();
  for (const auto& g : groups) {
    out.push_back({{"attributes", g.names}, {"cohesion", g.cohesion}});
  }
  return out;
}

inline void to_json(json& j, const PairExplanation& e) {
  using detail::optional_number;
  j = json{{"pair", json::array({e.first, e.second})},
           {"co_occurring_queries", e.co_occurring_queries},
           {"adm", e.adm},
           {"total_measure", json::array({e.total_measure_first,
                                          e.total_measure_second})},
           {"pdm", json::array({optional_number(e.pdm_forward),
                                optional_number(e.pdm_backward)})},
           {"sd", json::array({optional_number(e.sd_first),
                               optional_number(e.sd_second)})},
           {"nsm", json::array({optional_number(e.nsm_forward),
                                optional_number(e.nsm_backward)})},
           {"nnsm", json::array({optional_number(e.nnsm_forward),
                                 optional_number(e.nnsm_backward)})}};
}

// ---------------------------------------------------------------------------
// Display rendering (aligned text tables)

namespace detail {

inline std::string render_grid(const std::vector<std::vector<std::string>>& g) {
  std::vector<std::size_t> width;
  for (const auto& row : g) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : g) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      if (c == 0) {
        line += row[c] + std::string(width[c] - row[c].size(), ' ');
      } else {
        line += std::string(width[c] - row[c].size(), ' ') + row[c];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

}  // namespace detail

inline std::string render_text(std::string_view csv_text) {
  return detail::render_grid(parse_csv(csv_text));
}

}  // namespace attrscale
