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

// Read-only views over a finished ScaleBundle: pair rankings, strongest
// partners, candidate attribute groups and per-pair explanations.
//
// On the normalized scale lower means stronger dependency, so every ranking
// here is ascending.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "attrscale/errors.hpp"
#include "attrscale/numeric_scale.hpp"

namespace attrscale {

enum class RankKey {
  nnsm_min,  // unordered pairs scored by min(NNSM[h,k], NNSM[k,h])
  nnsm_row   // directed cells as stored
};

constexpr std::string_view to_string(RankKey k) noexcept {
  return k == RankKey::nnsm_min ? "nnsm-min" : "nnsm-row";
}

inline std::optional<RankKey> parse_rank_key(std::string_view s) {
  if (s == "nnsm-min") return RankKey::nnsm_min;
  if (s == "nnsm-row") return RankKey::nnsm_row;
  return std::nullopt;
}

struct RankedPair {
  std::size_t first = 0;  // row attribute for nnsm-row
  std::size_t second = 0;
  std::string first_name;
  std::string second_name;
  double nnsm = 0.0;
  double nsm = 0.0;
  std::int64_t adm = 0;

  friend bool operator==(const RankedPair&, const RankedPair&) = default;
};

struct AffinityRanking {
  RankKey key = RankKey::nnsm_min;
  std::vector<RankedPair> entries;
  WarningLog warnings;
};

/// Ascending by score, ties broken by (first name, second name).
inline AffinityRanking rank_pairs(const ScaleBundle& b, RankKey key) {
  AffinityRanking out{key, {}, {}};
  const auto& names = b.attributes();
  const std::size_t n = names.size();
  if (key == RankKey::nnsm_row) {
    for (std::size_t h = 0; h < n; ++h) {
      for (std::size_t k = 0; k < n; ++k) {
        const auto v = b.nnsm.at(h, k);
        if (!v) continue;
        out.entries.push_back({h, k, names[h], names[k], *v,
                               b.nsm.at(h, k).value_or(0.0), b.adm.count(h, k)});
      }
    }
  } else {
    for (std::size_t h = 0; h < n; ++h) {
      for (std::size_t k = h + 1; k < n; ++k) {
        const auto fwd = b.nnsm.at(h, k);
        const auto bwd = b.nnsm.at(k, h);
        if (!fwd && !bwd) continue;
        const bool use_fwd = fwd && (!bwd || *fwd <= *bwd);
        const std::size_t r = use_fwd ? h : k;
        const std::size_t c = use_fwd ? k : h;
        out.entries.push_back({h, k, names[h], names[k],
                               *b.nnsm.at(r, c), b.nsm.at(r, c).value_or(0.0),
                               b.adm.count(r, c)});
      }
    }
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const RankedPair& a, const RankedPair& z) {
              return std::tie(a.nnsm, a.first_name, a.second_name) <
                     std::tie(z.nnsm, z.first_name, z.second_name);
            });
  if (out.entries.empty()) {
    out.warnings.push_back({WarningKind::empty_ranking, "",
                            "no defined scale cell to rank"});
  }
  return out;
}

inline std::size_t require_attribute(const ScaleBundle& b,
                                     std::string_view name) {
  auto idx = b.find(name);
  if (!idx) throw UnknownAttributeError(std::string(trim(name)));
  return *idx;
}

struct Partner {
  std::size_t index = 0;
  std::string name;
  double nnsm = 0.0;

  friend bool operator==(const Partner&, const Partner&) = default;
};

/// Argmin of the attribute's NNSM row; ties go to the smaller name.
inline Partner strongest_partner(const ScaleBundle& b, std::string_view name) {
  const std::size_t h = require_attribute(b, name);
  const auto& names = b.attributes();
  std::optional<Partner> best;
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto v = b.nnsm.at(h, k);
    if (!v) continue;
    if (!best || *v < best->nnsm ||
        (*v == best->nnsm && names[k] < best->name)) {
      best = Partner{k, names[k], *v};
    }
  }
  if (!best) throw IsolatedAttributeError(names[h]);
  return *best;
}

struct AttributeGroup {
  std::vector<std::size_t> members;  // ascending catalog index
  std::vector<std::string> names;
  double cohesion = 0.0;

  friend bool operator==(const AttributeGroup&, const AttributeGroup&) = default;
};

/// Mean of the defined NNSM cells between members, both directions.
inline std::optional<double> group_cohesion(
    const ScaleBundle& b, const std::vector<std::size_t>& members) {
  double sum = 0.0;
  std::size_t count = 0;
  for (auto h : members) {
    for (auto k : members) {
      if (h == k) continue;
      if (auto v = b.nnsm.at(h, k)) {
        sum += *v;
        ++count;
      }
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

/// Greedy agglomeration. Seeds each group with the strongest remaining pair
/// (nnsm-min order) whose cohesion is within `cutoff`, then repeatedly adds
/// the attribute giving the lowest cohesion while that stays within
/// `cutoff` and the group is smaller than `max_size`. A candidate must have
/// a defined cell with every current member. Grouped attributes are
/// removed before the next seed is chosen.
inline std::vector<AttributeGroup> suggest_groups(const ScaleBundle& b,
                                                  double cutoff,
                                                  std::size_t max_size) {
  if (!(cutoff >= 0.0 && cutoff <= 10.0)) {
    throw std::invalid_argument("suggest_groups: cutoff must lie in [0, 10]");
  }
  if (max_size < 2) {
    throw std::invalid_argument("suggest_groups: max_size must be >= 2");
  }
  const auto& names = b.attributes();
  const std::size_t n = names.size();
  const auto ranking = rank_pairs(b, RankKey::nnsm_min);
  std::vector<bool> free(n, true);

  auto linked = [&](std::size_t x, std::size_t y) {
    return b.nnsm.defined(x, y) || b.nnsm.defined(y, x);
  };

  std::vector<AttributeGroup> groups;
  while (true) {
    std::optional<std::vector<std::size_t>> seed;
    for (const auto& e : ranking.entries) {
      if (!free[e.first] || !free[e.second]) continue;
      std::vector<std::size_t> pair{e.first, e.second};
      auto c = group_cohesion(b, pair);
      if (c && *c <= cutoff) {
        seed = std::move(pair);
        break;
      }
    }
    if (!seed) break;

    std::vector<std::size_t> members = std::move(*seed);
    while (members.size() < max_size) {
      std::optional<std::size_t> best;
      double best_cohesion = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < n; ++c) {
        if (!free[c] ||
            std::find(members.begin(), members.end(), c) != members.end()) {
          continue;
        }
        if (!std::all_of(members.begin(), members.end(),
                         [&](std::size_t m) { return linked(m, c); })) {
          continue;
        }
        auto trial = members;
        trial.push_back(c);
        std::sort(trial.begin(), trial.end());
        const double coh = *group_cohesion(b, trial);
        if (coh < best_cohesion ||
            (coh == best_cohesion && best && names[c] < names[*best])) {
          best = c;
          best_cohesion = coh;
        }
      }
      if (!best || best_cohesion > cutoff) break;
      members.push_back(*best);
    }
    std::sort(members.begin(), members.end());
    AttributeGroup g{members, {}, *group_cohesion(b, members)};
    for (auto m : members) {
      g.names.push_back(names[m]);
      free[m] = false;
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

/// Every number behind one attribute pair, copied from the bundle.
struct PairExplanation {
  std::string first;
  std::string second;
  std::vector<std::string> co_occurring_queries;
  std::int64_t adm = 0;
  std::int64_t total_measure_first = 0;
  std::int64_t total_measure_second = 0;
  std::optional<double> pdm_forward;   // (first, second)
  std::optional<double> pdm_backward;  // (second, first)
  std::optional<double> sd_first;
  std::optional<double> sd_second;
  std::optional<double> nsm_forward;
  std::optional<double> nsm_backward;
  std::optional<double> nnsm_forward;
  std::optional<double> nnsm_backward;
};

inline PairExplanation explain_pair(const ScaleBundle& b, std::string_view a,
                                    std::string_view z) {
  const std::size_t h = require_attribute(b, a);
  const std::size_t k = require_attribute(b, z);
  if (h == k) throw DiagonalPairError(b.attributes()[h]);

  PairExplanation e;
  e.first = b.attributes()[h];
  e.second = b.attributes()[k];
  for (std::size_t q = 0; q < b.qaum.rows(); ++q) {
    if (b.qaum.at(q, h) && b.qaum.at(q, k)) {
      e.co_occurring_queries.push_back(b.qaum.query_ids()[q]);
    }
  }
  e.adm = b.adm.count(h, k);
  e.total_measure_first = b.adm.total_measure(h);
  e.total_measure_second = b.adm.total_measure(k);
  e.pdm_forward = b.pdm.at(h, k);
  e.pdm_backward = b.pdm.at(k, h);
  e.sd_first = b.mvsd.sd(h);
  e.sd_second = b.mvsd.sd(k);
  e.nsm_forward = b.nsm.at(h, k);
  e.nsm_backward = b.nsm.at(k, h);
  e.nnsm_forward = b.nnsm.at(h, k);
  e.nnsm_backward = b.nnsm.at(k, h);
  return e;
}

/// Change of one attribute pair between two runs. Scores use the nnsm-min
/// convention; ranks are 1-based positions among pairs of shared attributes.
struct PairDelta {
  std::string first;
  std::string second;
  std::optional<double> old_nnsm;
  std::optional<double> new_nnsm;
  std::optional<double> nnsm_delta;
  std::optional<double> old_nsm;
  std::optional<double> new_nsm;
  std::optional<double> nsm_delta;
  std::optional<std::size_t> old_rank;
  std::optional<std::size_t> new_rank;
};

struct ScaleDiff {
  Labels shared;
  Labels only_old;
  Labels only_new;
  std::vector<PairDelta> pairs;  // shared pairs in old catalog order
};

/// Compares two runs over the attributes they share (matched by name).
/// Throws Error when the catalogs are disjoint.
inline ScaleDiff diff_scales(const ScaleBundle& before,
                             const ScaleBundle& after) {
  ScaleDiff d;
  std::vector<std::pair<std::size_t, std::size_t>> idx;  // (old, new)
  for (std::size_t i = 0; i < before.attributes().size(); ++i) {
    const auto& name = before.attributes()[i];
    if (auto j = after.find(name)) {
      d.shared.push_back(name);
      idx.emplace_back(i, *j);
    } else {
      d.only_old.push_back(name);
    }
  }
  for (const auto& name : after.attributes()) {
    if (!before.find(name)) d.only_new.push_back(name);
  }
  if (d.shared.empty()) throw Error("snapshots share no attribute");

  auto score = [](const MaskedMatrix& m, std::size_t h, std::size_t k) {
    auto a = m.at(h, k), b = m.at(k, h);
    if (a && b) return std::optional<double>(std::min(*a, *b));
    return a ? a : b;
  };
  auto ranks = [&](const ScaleBundle& b, bool use_old) {
    std::vector<bool> in(b.attributes().size(), false);
    for (const auto& [o, n] : idx) in[use_old ? o : n] = true;
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (const auto& e : rank_pairs(b, RankKey::nnsm_min).entries) {
      if (in[e.first] && in[e.second]) order.emplace_back(e.first, e.second);
    }
    return order;
  };
  const auto old_order = ranks(before, true);
  const auto new_order = ranks(after, false);
  auto position = [](const auto& order, std::size_t h, std::size_t k)
      -> std::optional<std::size_t> {
    if (h > k) std::swap(h, k);
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i].first == h && order[i].second == k) return i + 1;
    }
    return std::nullopt;
  };

  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t z = a + 1; z < idx.size(); ++z) {
      const auto [oh, nh] = idx[a];
      const auto [ok, nk] = idx[z];
      PairDelta p;
      p.first = d.shared[a];
      p.second = d.shared[z];
      p.old_nnsm = score(before.nnsm, oh, ok);
      p.new_nnsm = score(after.nnsm, nh, nk);
      p.old_nsm = score(before.nsm, oh, ok);
      p.new_nsm = score(after.nsm, nh, nk);
      if (p.old_nnsm && p.new_nnsm) p.nnsm_delta = *p.new_nnsm - *p.old_nnsm;
      if (p.old_nsm && p.new_nsm) p.nsm_delta = *p.new_nsm - *p.old_nsm;
      p.old_rank = position(old_order, oh, ok);
      p.new_rank = position(new_order, nh, nk);
      d.pairs.push_back(std::move(p));
    }
  }
  return d;
}

}  // namespace attrscale
