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

// Command implementations behind the `attrscale` executable. They write to
// caller-supplied streams and return the process exit status so they can be
// driven in-process.
//
// Exit status: 0 success (warnings allowed), 1 input/parse/usage error,
// 2 empty analysis.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "attrscale/analytics.hpp"
#include "attrscale/catalog.hpp"
#include "attrscale/errors.hpp"
#include "attrscale/exchange.hpp"
#include "attrscale/numeric_scale.hpp"
#include "attrscale/snapshot.hpp"
#include "attrscale/workload.hpp"

namespace attrscale::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitEmpty = 2;

inline constexpr std::string_view kOutputDirEnv = "ATTRSCALE_OUT";

enum class ReportFormat { text, csv, json };

inline std::optional<ReportFormat> parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::text;
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  return std::nullopt;
}

/// `all`, `random:K` (with `seed`) or `interval:T1..T2` (epoch ms).
inline SelectionMode parse_selection(std::string_view text,
                                     std::uint64_t seed) {
  if (text == "all") return SelectAll{};
  auto integer = [&](std::string_view s) {
    auto v = parse_integer(trim(s));
    if (!v) throw InputError("bad --select value '" + std::string(text) + "'");
    return *v;
  };
  if (text.starts_with("random:")) {
    return RandomSelection{integer(text.substr(7)), seed};
  }
  if (text.starts_with("interval:")) {
    auto body = text.substr(9);
    auto dots = body.find("..");
    if (dots == std::string_view::npos) {
      throw InputError("interval selection must read interval:T1..T2");
    }
    return IntervalSelection{integer(body.substr(0, dots)),
                             integer(body.substr(dots + 2))};
  }
  throw InputError("bad --select value '" + std::string(text) + "'");
}

namespace detail {

/// Output files are written to a sibling staging directory and moved into
/// place only once every file has been written.
class StagedOutput {
 public:
  explicit StagedOutput(fs::path target) : target_(std::move(target)) {
    fs::path parent = target_.parent_path();
    if (parent.empty()) parent = ".";
    std::random_device rd;
    staging_ = parent / (".attrscale-staging-" + std::to_string(rd()));
    fs::create_directories(staging_);
  }

  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  ~StagedOutput() {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }

  void write(const std::string& name, std::string_view content) {
    std::ofstream out(staging_ / name, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("cannot write " + name);
    names_.push_back(name);
  }

  void commit() {
    fs::create_directories(target_);
    for (const auto& n : names_) fs::rename(staging_ / n, target_ / n);
  }

  std::size_t size() const noexcept { return names_.size(); }

 private:
  fs::path target_;
  fs::path staging_;
  std::vector<std::string> names_;
};

inline std::string jsonl(const json& array) {
  std::string out;
  for (const auto& item : array) out += item.dump() + "\n";
  return out;
}

inline std::string opt_fixed(std::optional<double> v, int precision) {
  return v ? format_fixed(*v, precision) : std::string(kUndefinedCell);
}

inline std::string display_report(const ScaleBundle& b, int precision) {
  std::string out;
  auto section = [&](std::string_view title, const std::string& csv) {
    out += title;
    out += "\n";
    out += render_text(csv);
    out += "\n";
  };
  section("QAUM", to_csv(b.qaum));
  section("ADM", to_csv(b.adm));
  section("PDM", to_csv(b.pdm, precision));
  section("MVSD", to_csv(b.mvsd, precision));
  section("NSM", to_csv(b.nsm, precision));
  section("NNSM", to_csv(b.nnsm, precision));
  return out;
}

}  // namespace detail

/// Export files written by `analyze` for one bundle, keyed by file name.
inline std::vector<std::pair<std::string, std::string>> export_files(
    const ScaleBundle& b, ExportFormat format) {
  std::vector<std::pair<std::string, std::string>> files;
  if (format != ExportFormat::json) {
    files.emplace_back("qaum.csv", to_csv(b.qaum));
    files.emplace_back("adm.csv", to_csv(b.adm));
    files.emplace_back("pdm.csv", to_csv(b.pdm));
    files.emplace_back("mvsd.csv", to_csv(b.mvsd));
    files.emplace_back("nsm.csv", to_csv(b.nsm));
    files.emplace_back("nnsm.csv", to_csv(b.nnsm));
  }
  if (format != ExportFormat::csv) {
    files.emplace_back("qaum.json", json(b.qaum).dump(1) + "\n");
    files.emplace_back("adm.json", json(b.adm).dump(1) + "\n");
    files.emplace_back("pdm.json", json(b.pdm).dump(1) + "\n");
    files.emplace_back("mvsd.json", json(b.mvsd).dump(1) + "\n");
    files.emplace_back("nsm.json", json(b.nsm).dump(1) + "\n");
    files.emplace_back("nnsm.json", json(b.nnsm).dump(1) + "\n");
  }
  return files;
}

inline int cmd_analyze(RunConfig config, std::ostream& out,
                       std::ostream& err) {
  Snapshot snap;
  try {
    if (config.output_dir.empty()) {
      if (const char* env = std::getenv(kOutputDirEnv.data())) {
        config.output_dir = env;
      }
    }
    if (config.output_dir.empty()) {
      throw InputError("no output directory (--out or " +
                       std::string(kOutputDirEnv) + ")");
    }
    config.validate();

    const auto records = load_workload(config.input_path, config.input_format);
    AttributeCatalog catalog;
    if (!config.catalog_path.empty()) {
      catalog = load_catalog(config.catalog_path);
    } else if (config.input_format == InputFormat::jsonl_attrs) {
      catalog = catalog_from_records(records);
    } else {
      throw InputError("--catalog is required for jsonl-sql input");
    }
    const auto selected = select_queries(records, config.selection);

    PipelineOptions options;
    if (!config.mvsd_fixture_path.empty()) {
      std::ifstream in(config.mvsd_fixture_path, std::ios::binary);
      if (!in) throw InputError("cannot open " + config.mvsd_fixture_path);
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      options.mvsd_override = mvsd_from_csv(text);
    }

    snap.usage = build_usage_set(selected, catalog,
                                 config.selection.usage_threshold);
    snap.bundle = run_pipeline(snap.usage, options);
    snap.config = config;
  } catch (const EmptyAnalysisError& e) {
    err << "attrscale: empty analysis: " << e.what() << "\n";
    return kExitEmpty;
  } catch (const std::exception& e) {
    err << "attrscale: " << e.what() << "\n";
    return kExitInput;
  }

  const auto& b = snap.bundle;
  std::size_t written = 0;
  try {
    detail::StagedOutput staged(config.output_dir);
    for (const auto& [name, content] : export_files(b, config.export_format)) {
      staged.write(name, content);
    }
    staged.write("report.txt", detail::display_report(b, config.precision));
    staged.write("warnings.jsonl", detail::jsonl(json(b.warnings)));
    staged.write("diagnostics.jsonl",
                 detail::jsonl(json(snap.usage.diagnostics)));
    staged.write("snapshot.json", serialize_snapshot(snap));
    staged.commit();
    written = staged.size();
  } catch (const std::exception& e) {
    err << "attrscale: " << e.what() << "\n";
    return kExitInput;
  }

  const auto isolated = b.isolated_attributes();
  out << "queries (m):      " << b.qaum.rows() << " (selected "
      << snap.usage.selected_count << ", dropped "
      << snap.usage.dropped_count() << ")\n";
  out << "attributes (n):   " << b.adm.size();
  if (auto m = snap.usage.catalog.database_attribute_count()) {
    out << " of M=" << *m << " (n/M = "
        << format_fixed(*snap.usage.catalog.coverage_ratio(), 3) << ")";
  }
  out << "\n";
  if (!snap.usage.pruned_attributes.empty()) {
    out << "pruned:           " << snap.usage.pruned_attributes.size()
        << " below usage threshold\n";
  }
  out << "isolated:         ";
  if (isolated.empty()) out << "none";
  for (std::size_t i = 0; i < isolated.size(); ++i) {
    out << (i ? ", " : "") << isolated[i];
  }
  out << "\n";
  out << "warnings:         " << b.warnings.size() << "\n";
  out << "wrote " << written << " files to " << config.output_dir << "\n";
  return kExitOk;
}

inline int cmd_rank(const fs::path& snapshot, RankKey key, std::size_t top,
                    ReportFormat format, int precision, std::ostream& out,
                    std::ostream& err) {
  try {
    const auto snap = load_snapshot(snapshot);
    const auto ranking = rank_pairs(snap.bundle, key);
    for (const auto& w : ranking.warnings) {
      err << "attrscale: warning: " << w.message << "\n";
    }
    switch (format) {
      case ReportFormat::csv:
        out << to_csv(ranking, top);
        break;
      case ReportFormat::json:
        out << ranking_json(ranking, top).dump(1) << "\n";
        break;
      case ReportFormat::text:
        if (top > 0 && !ranking.entries.empty()) {
          out << render_text(to_csv(ranking, top, precision));
        }
        break;
    }
  } catch (const std::exception& e) {
    err << "attrscale: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

inline int cmd_explain(const fs::path& snapshot, std::string_view pair,
                       bool as_json, int precision, std::ostream& out,
                       std::ostream& err) {
  try {
    const auto comma = pair.find(',');
    if (comma == std::string_view::npos) {
      throw InputError("--pair must read A,B");
    }
    const auto snap = load_snapshot(snapshot);
    const auto e =
        explain_pair(snap.bundle, pair.substr(0, comma), pair.substr(comma + 1));
    if (as_json) {
      out << json(e).dump(1) << "\n";
      return kExitOk;
    }
    using detail::opt_fixed;
    const int p = precision;
    out << "pair:                " << e.first << ", " << e.second << "\n";
    out << "co-occurring queries (" << e.co_occurring_queries.size() << "):";
    for (std::size_t i = 0; i < e.co_occurring_queries.size(); ++i) {
      out << (i ? ", " : " ") << e.co_occurring_queries[i];
    }
    out << "\n";
    out << "ADM:                 " << e.adm << "\n";
    out << "total measure:       " << e.first << "=" << e.total_measure_first
        << ", " << e.second << "=" << e.total_measure_second << "\n";
    auto both = [&](std::string_view label, std::optional<double> fwd,
                    std::optional<double> bwd) {
      out << label << e.first << "->" << e.second << "=" << opt_fixed(fwd, p)
          << ", " << e.second << "->" << e.first << "=" << opt_fixed(bwd, p)
          << "\n";
    };
    both("PDM:                 ", e.pdm_forward, e.pdm_backward);
    out << "SD:                  " << e.first << "=" << opt_fixed(e.sd_first, p)
        << ", " << e.second << "=" << opt_fixed(e.sd_second, p) << "\n";
    both("NSM:                 ", e.nsm_forward, e.nsm_backward);
    both("NNSM:                ", e.nnsm_forward, e.nnsm_backward);
  } catch (const std::exception& e) {
    err << "attrscale: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

inline int cmd_diff(const fs::path& before, const fs::path& after,
                    bool as_json, int precision, std::ostream& out,
                    std::ostream& err) {
  try {
    const auto a = load_snapshot(before);
    const auto b = load_snapshot(after);
    const auto d = diff_scales(a.bundle, b.bundle);
    auto num = [](std::optional<double> v) {
      return v ? json(*v) : json(nullptr);
    };
    auto idx = [](std::optional<std::size_t> v) {
      return v ? json(*v) : json(nullptr);
    };
    if (as_json) {
      json pairs = json::array();
      for (const auto& p : d.pairs) {
        pairs.push_back({{"pair", json::array({p.first, p.second})},
                         {"old_nnsm", num(p.old_nnsm)},
                         {"new_nnsm", num(p.new_nnsm)},
                         {"nnsm_delta", num(p.nnsm_delta)},
                         {"old_nsm", num(p.old_nsm)},
                         {"new_nsm", num(p.new_nsm)},
                         {"nsm_delta", num(p.nsm_delta)},
                         {"old_rank", idx(p.old_rank)},
                         {"new_rank", idx(p.new_rank)}});
      }
      out << json{{"shared", d.shared},
                  {"only_old", d.only_old},
                  {"only_new", d.only_new},
                  {"pairs", std::move(pairs)}}
                 .dump(1)
          << "\n";
      return kExitOk;
    }
    using detail::opt_fixed;
    std::string csv =
        "pair,old_nnsm,new_nnsm,delta,old_nsm,new_nsm,nsm_delta,old_rank,"
        "new_rank,moved\n";
    for (const auto& p : d.pairs) {
      auto rank = [](std::optional<std::size_t> r) {
        return r ? std::to_string(*r) : std::string(kUndefinedCell);
      };
      std::string moved = "#";
      if (p.old_rank && p.new_rank) {
        const auto m = static_cast<long long>(*p.old_rank) -
                       static_cast<long long>(*p.new_rank);
        moved = (m > 0 ? "+" : "") + std::to_string(m);
      }
      csv += csv_field(p.first + "," + p.second) + "," +
             opt_fixed(p.old_nnsm, precision) + "," +
             opt_fixed(p.new_nnsm, precision) + "," +
             opt_fixed(p.nnsm_delta, precision) + "," +
             opt_fixed(p.old_nsm, precision) + "," +
             opt_fixed(p.new_nsm, precision) + "," +
             opt_fixed(p.nsm_delta, precision) + "," + rank(p.old_rank) +
             "," + rank(p.new_rank) + "," + moved + "\n";
    }
    out << "shared attributes: " << d.shared.size() << " (only old "
        << d.only_old.size() << ", only new " << d.only_new.size() << ")\n";
    out << render_text(csv);
  } catch (const std::exception& e) {
    err << "attrscale: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

inline int cmd_groups(const fs::path& snapshot, double cutoff,
                      std::size_t max_size, ReportFormat format, int precision,
                      std::ostream& out, std::ostream& err) {
  try {
    const auto snap = load_snapshot(snapshot);
    const auto groups = suggest_groups(snap.bundle, cutoff, max_size);
    switch (format) {
      case ReportFormat::csv:
        out << to_csv(groups);
        break;
      case ReportFormat::json:
        out << groups_json(groups).dump(1) << "\n";
        break;
      case ReportFormat::text:
        if (!groups.empty()) out << render_text(to_csv(groups, precision));
        break;
    }
  } catch (const std::exception& e) {
    err << "attrscale: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

/// Parses argv and dispatches to one of the commands above.
inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Attribute dependency scale for query workloads", "attrscale"};
  app.require_subcommand(1);

  RunConfig config;
  std::string input_format = "jsonl-attrs";
  std::string select = "all";
  std::uint64_t seed = 0;
  double threshold = 0.0;
  std::string export_format = "csv";

  auto* analyze = app.add_subcommand("analyze", "Compute the scale for a workload");
  analyze->add_option("--input", config.input_path, "Workload file")->required();
  analyze->add_option("--input-format", input_format, "jsonl-sql | jsonl-attrs");
  analyze->add_option("--catalog", config.catalog_path, "Attribute catalog file");
  analyze->add_option("--select", select, "all | random:K | interval:T1..T2");
  analyze->add_option("--seed", seed, "Seed for random selection");
  analyze->add_option("--threshold", threshold, "Minimum usage ratio in [0,1]");
  analyze->add_option("--out", config.output_dir, "Output directory")
      ->envname(std::string(kOutputDirEnv));
  analyze->add_option("--format", export_format, "csv | json | both");
  analyze->add_option("--precision", config.precision, "Display decimals (0-10)");
  analyze->add_option("--mvsd-fixture", config.mvsd_fixture_path,
                      "MVSD csv replacing the computed statistics");

  std::string snapshot;
  std::string key = "nnsm-min";
  std::size_t top = 10;
  std::string report = "text";
  int precision = 2;

  auto* rank = app.add_subcommand("rank", "Rank attribute pairs by affinity");
  rank->add_option("--snapshot", snapshot)->required();
  rank->add_option("--key", key, "nnsm-min | nnsm-row");
  rank->add_option("--top", top, "Number of entries");
  rank->add_option("--report", report, "text | csv | json");
  rank->add_option("--precision", precision, "Display decimals");

  std::string pair;
  bool as_json = false;
  auto* explain = app.add_subcommand("explain", "Trace every value behind a pair");
  explain->add_option("--snapshot", snapshot)->required();
  explain->add_option("--pair", pair, "A,B")->required();
  explain->add_flag("--json", as_json);
  explain->add_option("--precision", precision, "Display decimals");

  std::string old_path, new_path;
  auto* diff = app.add_subcommand("diff", "Compare the scale of two snapshots");
  diff->add_option("--old", old_path)->required();
  diff->add_option("--new", new_path)->required();
  diff->add_flag("--json", as_json);
  diff->add_option("--precision", precision, "Display decimals");

  double cutoff = 2.0;
  std::size_t max_size = 4;
  auto* groups = app.add_subcommand("groups", "Suggest cohesive attribute groups");
  groups->add_option("--snapshot", snapshot)->required();
  groups->add_option("--cutoff", cutoff, "Maximum mean NNSM inside a group");
  groups->add_option("--max-size", max_size, "Maximum group size");
  groups->add_option("--report", report, "text | csv | json");
  groups->add_option("--precision", precision, "Display decimals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (precision < 0 || precision > 10) {
      throw InputError("precision must lie in [0, 10]");
    }
    auto report_format = parse_report_format(report);
    if (!report_format) throw InputError("unknown report format '" + report + "'");

    if (*analyze) {
      auto fmt = parse_input_format(input_format);
      if (!fmt) throw InputError("unknown input format '" + input_format + "'");
      auto ef = parse_export_format(export_format);
      if (!ef) throw InputError("unknown export format '" + export_format + "'");
      config.input_format = *fmt;
      config.export_format = *ef;
      config.selection.mode = parse_selection(select, seed);
      config.selection.usage_threshold = threshold;
      return cmd_analyze(config, out, err);
    }
    if (*rank) {
      auto k = parse_rank_key(key);
      if (!k) throw InputError("unknown ranking key '" + key + "'");
      return cmd_rank(snapshot, *k, top, *report_format, precision, out, err);
    }
    if (*explain) {
      return cmd_explain(snapshot, pair, as_json, precision, out, err);
    }
    if (*diff) return cmd_diff(old_path, new_path, as_json, precision, out, err);
    if (*groups) {
      return cmd_groups(snapshot, cutoff, max_size, *report_format, precision,
                        out, err);
    }
  } catch (const std::exception& e) {
    err << "attrscale: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace attrscale::cli
