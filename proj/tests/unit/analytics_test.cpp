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


#include <algorithm>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace attrscale {
namespace {

namespace oracle = testing::oracle;

ScaleBundle bundle_of(const std::vector<std::vector<std::string>>& queries,
                      const Labels& catalog) {
  std::vector<QueryRecord> records;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    records.push_back({"q" + std::to_string(i + 1), std::nullopt,
                       AttributeList{queries[i]}});
  }
  return run_pipeline(build_usage_set(records, AttributeCatalog(catalog), 0.0));
}

TEST(RankPairs, RowKeyFirstEntryOfRowA7) {
  const auto b = testing::printed_bundle();
  const auto r = rank_pairs(b, RankKey::nnsm_row);
  auto it = std::find_if(r.entries.begin(), r.entries.end(),
                         [](const RankedPair& e) { return e.first_name == "a7"; });
  ASSERT_NE(it, r.entries.end());
  EXPECT_EQ(it->second_name, "a8");
  EXPECT_DOUBLE_EQ(it->nnsm, 0.08);
  EXPECT_EQ(r.entries.size(), 88u);  // 90 off-diagonal cells minus (a4,a8), (a8,a4)
}

TEST(RankPairs, MinKeyMatchesFullScan) {
  const auto b = testing::printed_bundle();
  const auto r = rank_pairs(b, RankKey::nnsm_min);
  const auto best = oracle::global_min_pair(testing::cells_of(b.nnsm),
                                            b.attributes());
  ASSERT_TRUE(best);
  ASSERT_FALSE(r.entries.empty());
  EXPECT_EQ(r.entries[0].nnsm, std::get<0>(*best));
  EXPECT_EQ(r.entries[0].first_name, std::get<1>(*best));
  EXPECT_EQ(r.entries[0].second_name, std::get<2>(*best));
  EXPECT_EQ(r.entries.size(), 44u);
  for (std::size_t i = 1; i < r.entries.size(); ++i) {
    EXPECT_LE(r.entries[i - 1].nnsm, r.entries[i].nnsm);
  }
}

TEST(RankPairs, TiesBreakByNames) {
  MaskedMatrix nnsm(MatrixKind::nnsm, {"b", "a", "c"});
  ScaleBundle s;
  s.adm = DependencyMatrix({"b", "a", "c"}, std::vector<std::int64_t>(9, 1));
  s.nsm = MaskedMatrix(MatrixKind::nsm, {"b", "a", "c"});
  nnsm.set(0, 1, 5);
  nnsm.set(0, 2, 5);
  nnsm.set(1, 2, 5);
  s.nnsm = nnsm;
  const auto r = rank_pairs(s, RankKey::nnsm_row);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_EQ(r.entries[0].first_name, "a");
  EXPECT_EQ(r.entries[1].second_name, "a");
  EXPECT_EQ(r.entries[2].second_name, "c");
}

TEST(RankPairs, EmptyRankingWarns) {
  const auto b = bundle_of({{"a"}, {"b"}}, {"a", "b"});
  const auto r = rank_pairs(b, RankKey::nnsm_min);
  EXPECT_TRUE(r.entries.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].kind, WarningKind::empty_ranking);
}

TEST(RankPairs, SingleDefinedPair) {
  const auto b = bundle_of({{"a", "b"}, {"c"}}, {"a", "b", "c"});
  const auto r = rank_pairs(b, RankKey::nnsm_min);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0].first_name, "a");
  EXPECT_EQ(r.entries[0].second_name, "b");
}

TEST(StrongestPartner, RowMinima) {
  const auto b = testing::printed_bundle();
  auto p = strongest_partner(b, "a1");
  EXPECT_EQ(p.name, "a2");
  EXPECT_DOUBLE_EQ(p.nnsm, 2.31);
  p = strongest_partner(b, "A9");
  EXPECT_EQ(p.name, "a10");
  EXPECT_DOUBLE_EQ(p.nnsm, 0.38);
  EXPECT_THROW(strongest_partner(b, "zz"), UnknownAttributeError);
}

TEST(StrongestPartner, AgreesWithRowRanking) {
  const auto b = testing::printed_bundle();
  const auto r = rank_pairs(b, RankKey::nnsm_row);
  for (const auto& name : b.attributes()) {
    auto it = std::find_if(r.entries.begin(), r.entries.end(),
                           [&](const RankedPair& e) { return e.first_name == name; });
    const auto p = strongest_partner(b, name);
    EXPECT_EQ(it->second_name, p.name);
    EXPECT_EQ(it->nnsm, p.nnsm);
  }
}

TEST(StrongestPartner, SinglePartnerAndIsolated) {
  const auto b = bundle_of({{"a", "b"}, {"c"}}, {"a", "b", "c"});
  EXPECT_EQ(strongest_partner(b, "a").name, "b");
  EXPECT_THROW(strongest_partner(b, "c"), IsolatedAttributeError);
}

TEST(SuggestGroups, AgainstExhaustiveSearch) {
  const auto b = testing::printed_bundle();
  const auto groups = suggest_groups(b, 1.0, 3);
  const auto feasible =
      oracle::feasible_subsets(testing::cells_of(b.nnsm), 3, 1.0);
  ASSERT_FALSE(feasible.empty());
  ASSERT_FALSE(groups.empty());
  std::set<std::size_t> used;
  for (const auto& g : groups) {
    EXPECT_LE(g.cohesion, 1.0);
    EXPECT_GE(g.members.size(), 2u);
    EXPECT_LE(g.members.size(), 3u);
    auto it = std::find_if(feasible.begin(), feasible.end(),
                           [&](const oracle::Subset& s) { return s.members == g.members; });
    ASSERT_NE(it, feasible.end());
    EXPECT_NEAR(it->cohesion, g.cohesion, 1e-12);
    EXPECT_TRUE(it->fully_linked);
    for (auto m : g.members) EXPECT_TRUE(used.insert(m).second);
  }
  // No feasible subset is left entirely among ungrouped attributes with a
  // linked pair that greedy could still have seeded.
  for (const auto& s : feasible) {
    if (s.members.size() != 2) continue;
    const bool free = std::none_of(s.members.begin(), s.members.end(),
                                   [&](std::size_t m) { return used.count(m); });
    EXPECT_FALSE(free) << s.members[0] << "," << s.members[1];
  }
  EXPECT_EQ(suggest_groups(b, 1.0, 3), groups);
}

TEST(SuggestGroups, Boundaries) {
  const auto b = testing::printed_bundle();
  EXPECT_TRUE(suggest_groups(b, 0.0, 3).empty());
  EXPECT_THROW(suggest_groups(b, -1.0, 3), std::invalid_argument);
  EXPECT_THROW(suggest_groups(b, 11.0, 3), std::invalid_argument);
  EXPECT_THROW(suggest_groups(b, 1.0, 1), std::invalid_argument);

  // Two attributes with a scale of 0 form one group.
  const auto two = bundle_of({{"a", "b"}}, {"a", "b"});
  const auto g = suggest_groups(two, 0.0, 4);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(g[0].cohesion, 0.0);
}

TEST(SuggestGroups, GroupsAreCappedAndDisjoint) {
  const auto b = testing::printed_bundle();
  for (std::size_t max = 2; max <= 5; ++max) {
    const auto groups = suggest_groups(b, 10.0, max);
    std::set<std::string> seen;
    for (const auto& g : groups) {
      EXPECT_LE(g.members.size(), max);
      EXPECT_EQ(group_cohesion(b, g.members), g.cohesion);
      for (const auto& n : g.names) EXPECT_TRUE(seen.insert(n).second);
    }
  }
}

TEST(ExplainPair, WorkedExamplePair) {
  const auto b = run_pipeline(testing::example_qaum());
  const auto e = explain_pair(b, "a1", "a2");
  EXPECT_EQ(e.co_occurring_queries, (std::vector<std::string>{"q1", "q7", "q8"}));
  EXPECT_EQ(e.adm, 3);
  EXPECT_EQ(e.total_measure_first, 26);
  EXPECT_EQ(e.total_measure_second, 23);
  EXPECT_EQ(e.pdm_forward, b.pdm.at(0, 1));
  EXPECT_EQ(e.pdm_backward, b.pdm.at(1, 0));
  EXPECT_EQ(e.sd_first, b.mvsd.sd(0));
  EXPECT_EQ(e.nsm_forward, b.nsm.at(0, 1));
  EXPECT_EQ(e.nnsm_backward, b.nnsm.at(1, 0));
}

TEST(ExplainPair, CoOccurrenceCountEqualsAdm) {
  const auto b = run_pipeline(testing::example_qaum());
  for (const auto& h : b.attributes()) {
    for (const auto& k : b.attributes()) {
      if (h == k) continue;
      const auto e = explain_pair(b, h, k);
      EXPECT_EQ(static_cast<std::int64_t>(e.co_occurring_queries.size()), e.adm);
    }
  }
}

TEST(ExplainPair, DisjointPairAndErrors) {
  const auto b = run_pipeline(testing::example_qaum());
  const auto e = explain_pair(b, "a4", "a8");
  EXPECT_EQ(e.adm, 0);
  EXPECT_TRUE(e.co_occurring_queries.empty());
  EXPECT_FALSE(e.pdm_forward || e.pdm_backward || e.nsm_forward ||
               e.nsm_backward || e.nnsm_forward || e.nnsm_backward);
  EXPECT_THROW(explain_pair(b, "a1", "a1"), DiagonalPairError);
  try {
    explain_pair(b, "a1", "zz");
    FAIL();
  } catch (const UnknownAttributeError& err) {
    EXPECT_EQ(err.name(), "zz");
  }
}

TEST(DiffScales, IdentityHasZeroDeltas) {
  const auto b = run_pipeline(testing::example_qaum());
  const auto d = diff_scales(b, b);
  EXPECT_EQ(d.shared.size(), 10u);
  EXPECT_EQ(d.pairs.size(), 45u);
  for (const auto& p : d.pairs) {
    if (p.nnsm_delta) {
      EXPECT_EQ(*p.nnsm_delta, 0.0);
    }
    EXPECT_EQ(p.old_rank, p.new_rank);
  }
}

TEST(DiffScales, DisjointCatalogsAreRejected) {
  const auto a = bundle_of({{"a", "b"}}, {"a", "b"});
  const auto z = bundle_of({{"x", "y"}}, {"x", "y"});
  EXPECT_THROW(diff_scales(a, z), Error);
}

TEST(DiffScales, PartialOverlap) {
  const auto a = bundle_of({{"a", "b"}, {"b", "c"}}, {"a", "b", "c"});
  const auto z = bundle_of({{"b", "c"}, {"c", "d"}}, {"b", "c", "d"});
  const auto d = diff_scales(a, z);
  EXPECT_EQ(d.shared, (Labels{"b", "c"}));
  EXPECT_EQ(d.only_old, (Labels{"a"}));
  EXPECT_EQ(d.only_new, (Labels{"d"}));
  EXPECT_EQ(d.pairs.size(), 1u);
}

}  // namespace
}  // namespace attrscale
