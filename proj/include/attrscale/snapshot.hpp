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

// Single-file, versioned record of one analysis run:
//
//   {"format": "attrscale-snapshot", "version": 1,
//    "payload": {"config": ..., "usage": ..., "bundle": ...},
//    "sha256": "<hex digest of the compact payload dump>"}
//
// nlohmann::json keeps object keys sorted, so the compact dump of the
// payload is canonical and the digest can be recomputed on load.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "attrscale/errors.hpp"
#include "attrscale/exchange.hpp"
#include "attrscale/numeric_scale.hpp"
#include "attrscale/workload.hpp"

namespace attrscale {

inline constexpr std::string_view kSnapshotFormat = "attrscale-snapshot";
inline constexpr int kSnapshotVersion = 1;

enum class ExportFormat { csv, json, both };

constexpr std::string_view to_string(ExportFormat f) noexcept {
  switch (f) {
    case ExportFormat::csv:
      return "csv";
    case ExportFormat::json:
      return "json";
    case ExportFormat::both:
      return "both";
  }
  return "?";
}

inline std::optional<ExportFormat> parse_export_format(std::string_view s) {
  if (s == "csv") return ExportFormat::csv;
  if (s == "json") return ExportFormat::json;
  if (s == "both") return ExportFormat::both;
  return std::nullopt;
}

struct RunConfig {
  std::string input_path;
  InputFormat input_format = InputFormat::jsonl_attrs;
  std::string catalog_path;  // empty: catalog derived from attribute lists
  SelectionSpec selection;
  std::string output_dir;
  ExportFormat export_format = ExportFormat::csv;
  int precision = 2;              // display decimals, 0..10
  std::string mvsd_fixture_path;  // empty: statistics computed

  void validate() const {
    if (precision < 0 || precision > 10) {
      throw InputError("precision must lie in [0, 10]");
    }
    selection.validate();
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline void to_json(json& j, const SelectionSpec& s) {
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, SelectAll>) {
          j = json{{"mode", "all"}};
        } else if constexpr (std::is_same_v<M, RandomSelection>) {
          j = json{{"mode", "random"}, {"count", m.count}, {"seed", m.seed}};
        } else {
          j = json{{"mode", "interval"},
                   {"start_ms", m.start_ms},
                   {"end_ms", m.end_ms}};
        }
      },
      s.mode);
  j["usage_threshold"] = s.usage_threshold;
}

inline void from_json(const json& j, SelectionSpec& s) {
  const auto mode = j.at("mode").get<std::string>();
  if (mode == "all") {
    s.mode = SelectAll{};
  } else if (mode == "random") {
    s.mode = RandomSelection{j.at("count").get<std::int64_t>(),
                             j.at("seed").get<std::uint64_t>()};
  } else if (mode == "interval") {
    s.mode = IntervalSelection{j.at("start_ms").get<std::int64_t>(),
                               j.at("end_ms").get<std::int64_t>()};
  } else {
    throw InputError("json: unknown selection mode '" + mode + "'");
  }
  s.usage_threshold = j.at("usage_threshold").get<double>();
}

inline void to_json(json& j, const RunConfig& c) {
  j = json{{"input", c.input_path},
           {"input_format", to_string(c.input_format)},
           {"catalog", c.catalog_path},
           {"selection", c.selection},
           {"output_dir", c.output_dir},
           {"export_format", to_string(c.export_format)},
           {"precision", c.precision},
           {"mvsd_fixture", c.mvsd_fixture_path}};
}

inline void from_json(const json& j, RunConfig& c) {
  c.input_path = j.at("input").get<std::string>();
  auto fmt = parse_input_format(j.at("input_format").get<std::string>());
  if (!fmt) throw InputError("json: unknown input format");
  c.input_format = *fmt;
  c.catalog_path = j.at("catalog").get<std::string>();
  c.selection = j.at("selection").get<SelectionSpec>();
  c.output_dir = j.at("output_dir").get<std::string>();
  auto ef = parse_export_format(j.at("export_format").get<std::string>());
  if (!ef) throw InputError("json: unknown export format");
  c.export_format = *ef;
  c.precision = j.at("precision").get<int>();
  c.mvsd_fixture_path = j.at("mvsd_fixture").get<std::string>();
}

struct Snapshot {
  RunConfig config;
  UsageSet usage;
  ScaleBundle bundle;
};

inline std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

inline std::string serialize_snapshot(const Snapshot& s) {
  json payload{{"config", s.config}, {"usage", s.usage}, {"bundle", s.bundle}};
  json doc{{"format", kSnapshotFormat},
           {"version", kSnapshotVersion},
           {"sha256", sha256_hex(payload.dump())},
           {"payload", std::move(payload)}};
  return doc.dump(1) + "\n";
}

inline Snapshot parse_snapshot(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SnapshotError(std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kSnapshotFormat) {
    throw SnapshotError("not an attrscale snapshot");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw SnapshotError("snapshot has no version");
  }
  if (doc["version"].get<int>() != kSnapshotVersion) {
    throw SnapshotError("unsupported snapshot version " +
                        doc["version"].dump());
  }
  if (!doc.contains("payload") || !doc.contains("sha256")) {
    throw SnapshotError("snapshot is incomplete");
  }
  if (sha256_hex(doc["payload"].dump()) != doc.value("sha256", "")) {
    throw SnapshotError("snapshot hash mismatch (corrupt or edited)");
  }
  try {
    const auto& p = doc["payload"];
    Snapshot s;
    s.config = p.at("config").get<RunConfig>();
    s.usage = p.at("usage").get<UsageSet>();
    s.bundle = p.at("bundle").get<ScaleBundle>();
    return s;
  } catch (const SnapshotError&) {
    throw;
  } catch (const std::exception& e) {
    throw SnapshotError(std::string("malformed snapshot: ") + e.what());
  }
}

inline Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open snapshot " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_snapshot(text);
}

}  // namespace attrscale
