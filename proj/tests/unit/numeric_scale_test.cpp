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


#include <cmath>
#include <set>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace attrscale {
namespace {

namespace printed = testing::printed;
namespace oracle = testing::oracle;

UsageSet usage_of(const std::vector<std::vector<std::string>>& queries,
                  const Labels& catalog) {
  std::vector<QueryRecord> records;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    records.push_back({"q" + std::to_string(i + 1), std::nullopt,
                       AttributeList{queries[i]}});
  }
  return build_usage_set(records, AttributeCatalog(catalog), 0.0);
}

TEST(BuildQaum, ReproducesExampleUsage) {
  auto records = load_workload(testing::fixture("example10.jsonl"),
                               InputFormat::jsonl_attrs);
  auto u = build_usage_set(records, AttributeCatalog(printed::attribute_names()), 0.0);
  auto qaum = build_qaum(u);
  EXPECT_EQ(qaum, testing::example_qaum());
  const std::vector<bool> q1{1, 1, 1, 1, 1, 0, 0, 0, 1, 0};
  for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(qaum.at(0, k), q1[k]);
}

TEST(BuildQaum, TinyWorkloads) {
  auto one = build_qaum(usage_of({{"a1", "a2"}}, {"a1", "a2"}));
  EXPECT_TRUE(one.at(0, 0) && one.at(0, 1));
  auto two = build_qaum(usage_of({{"a1"}, {"a2"}}, {"a1", "a2"}));
  EXPECT_TRUE(two.at(0, 0) && !two.at(0, 1) && !two.at(1, 0) && two.at(1, 1));
}

TEST(BuildAdm, CoOccurrenceCounts) {
  auto adm = build_adm(testing::example_qaum());
  EXPECT_EQ(adm.count(0, 1), 3);  // q1, q7, q8
  EXPECT_EQ(adm.count(0, 4), 3);  // q1, q4, q8
  EXPECT_FALSE(adm.at(3, 3));
  EXPECT_TRUE(adm.symmetric());
  auto disjoint = build_adm(build_qaum(usage_of({{"a1"}, {"a2"}}, {"a1", "a2"})));
  EXPECT_EQ(disjoint.count(0, 1), 0);
  EXPECT_EQ(disjoint.total_measures(), (std::vector<std::int64_t>{0, 0}));
}

TEST(BuildAdm, MatchesRecountAndListsPrintedErrata) {
  const auto adm = build_adm(testing::example_qaum());
  const auto recount = oracle::recount_dependencies(testing::example_dense(), 10);
  std::set<std::tuple<std::size_t, std::size_t, std::int64_t, std::int64_t>> diff;
  for (std::size_t h = 0; h < 10; ++h) {
    for (std::size_t k = 0; k < 10; ++k) {
      EXPECT_EQ(adm.count(h, k), recount[h][k]);
      if (printed::kDependency[h][k] != recount[h][k]) {
        diff.emplace(h + 1, k + 1, printed::kDependency[h][k], recount[h][k]);
      }
    }
  }
  // (row, column, printed, recounted), 1-based attribute numbers.
  const std::set<std::tuple<std::size_t, std::size_t, std::int64_t, std::int64_t>>
      errata{{1, 5, 2, 3},  {1, 6, 3, 4},  {2, 6, 2, 1}, {3, 7, 2, 1},
             {3, 10, 2, 3}, {5, 2, 2, 3},  {6, 1, 3, 4}, {6, 2, 2, 1},
             {7, 3, 2, 1},  {10, 3, 2, 3}};
  EXPECT_EQ(diff, errata);
  EXPECT_EQ(adm.total_measures(), oracle::row_sums(recount));
  EXPECT_EQ(adm.total_measures(),
            (std::vector<std::int64_t>{26, 23, 26, 16, 22, 24, 16, 18, 28, 25}));
}

TEST(BuildAdm, PrintedTotalsAreItsOwnRowSums) {
  const auto adm = testing::printed_adm();
  for (std::size_t h = 0; h < 10; ++h) {
    EXPECT_EQ(adm.total_measure(h), printed::kTotalMeasure[h]);
  }
  EXPECT_FALSE(adm.symmetric());
}

TEST(BuildPdm, Examples) {
  const auto pdm = build_pdm(testing::printed_adm());
  EXPECT_DOUBLE_EQ(*pdm.at(0, 1), 0.125);
  EXPECT_FALSE(pdm.at(3, 7));
  EXPECT_FALSE(pdm.at(7, 3));
  EXPECT_FALSE(pdm.at(2, 2));
  auto pair = build_pdm(build_adm(build_qaum(usage_of({{"a", "b"}}, {"a", "b"}))));
  EXPECT_EQ(pair.at(0, 1), 1.0);
  EXPECT_EQ(pair.at(1, 0), 1.0);
}

TEST(BuildPdm, IsolatedRowIsUndefinedAndWarned) {
  WarningLog w;
  auto pdm = build_pdm(build_adm(build_qaum(usage_of({{"a"}, {"b"}}, {"a", "b"}))), &w);
  EXPECT_FALSE(pdm.at(0, 1));
  EXPECT_FALSE(pdm.at(1, 0));
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].kind, WarningKind::isolated_attribute);
  EXPECT_EQ(w[1].attribute, "b");
}

TEST(ComputeMvsd, MeanAndExactVariance) {
  const auto adm = testing::printed_adm();
  const auto stats = compute_mvsd(adm, build_pdm(adm));
  const auto exact = oracle::exact_stats(testing::printed_adm_grid());
  EXPECT_NEAR(stats.entries[0]->mean, 70.0 / 24.0, 1e-12);
  EXPECT_EQ(exact[0]->mean, oracle::Rational(70, 24));
  // E[x^2] = 216/24 = 9, so Var = 9 - (70/24)^2.
  EXPECT_EQ(exact[0]->variance, oracle::Rational(9) - oracle::Rational(70, 24) * oracle::Rational(70, 24));
  EXPECT_NEAR(stats.entries[0]->variance, 0.4930555555555556, 1e-12);
  EXPECT_NEAR(stats.entries[0]->sd, 0.7021791477, 1e-9);
  for (std::size_t h = 0; h < 10; ++h) {
    EXPECT_NEAR(stats.entries[h]->variance,
                exact[h]->variance.convert_to<double>(), 1e-12);
  }
}

TEST(ComputeMvsd, OnePointDistribution) {
  auto adm = build_adm(build_qaum(usage_of({{"a", "b"}}, {"a", "b"})));
  auto stats = compute_mvsd(adm, build_pdm(adm));
  EXPECT_EQ(stats.entries[0]->mean, 1.0);
  EXPECT_EQ(stats.entries[0]->variance, 0.0);
  EXPECT_EQ(stats.entries[0]->sd, 0.0);
}

TEST(ComputeNsm, PrintedStatisticsAnchors) {
  const auto nsm = compute_nsm(testing::printed_adm(), testing::printed_stats());
  EXPECT_NEAR(*nsm.at(0, 1), 0.30, 1e-12);
  EXPECT_NEAR(*nsm.at(8, 9), 0.02, 1e-12);
  EXPECT_NEAR(*nsm.at(1, 3), 0.90, 1e-12);
  EXPECT_FALSE(nsm.at(7, 3));
}

TEST(ComputeNsm, EqualDeviationsGiveZero) {
  auto adm = build_adm(testing::example_qaum());
  StatsTable s{adm.attributes(), std::vector<std::optional<AttributeStats>>(
                                     10, AttributeStats{1, 1, 1})};
  auto nsm = compute_nsm(adm, s);
  for (std::size_t h = 0; h < 10; ++h) {
    for (std::size_t k = 0; k < 10; ++k) {
      if (nsm.at(h, k)) {
        EXPECT_EQ(*nsm.at(h, k), 0.0);
      }
    }
  }
}

TEST(ComputeNnsm, RowScaledToTen) {
  WarningLog w;
  const auto nnsm = compute_nnsm(
      compute_nsm(testing::printed_adm(), testing::printed_stats()), &w);
  EXPECT_NEAR(*nnsm.at(0, 7), 10.0, 1e-12);
  EXPECT_NEAR(*nnsm.at(0, 1), 0.30 / 1.30 * 10.0, 1e-9);
  // Row a3 at full precision: (1.07/3) / (1.10/2) * 10.
  EXPECT_NEAR(*nnsm.at(2, 0), (1.07 / 3.0) / (1.10 / 2.0) * 10.0, 1e-9);
  EXPECT_NEAR(*nnsm.at(2, 0), 6.48, 0.005);
  EXPECT_TRUE(w.empty());
}

TEST(ComputeNnsm, AllZeroRowIsADegenerateTie) {
  MaskedMatrix nsm(MatrixKind::nsm, {"a", "b", "c"});
  nsm.set(0, 1, 0.0);
  nsm.set(0, 2, 0.0);
  nsm.set(1, 0, 2.0);
  WarningLog w;
  auto nnsm = compute_nnsm(nsm, &w);
  EXPECT_EQ(nnsm.at(0, 1), 0.0);
  EXPECT_EQ(nnsm.at(0, 2), 0.0);
  EXPECT_EQ(nnsm.at(1, 0), 10.0);
  EXPECT_FALSE(nnsm.at(2, 0));
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].kind, WarningKind::degenerate_tie);
  EXPECT_EQ(w[0].attribute, "a");
}

TEST(RunPipeline, ExampleWorkloadAgainstOracle) {
  const auto b = run_pipeline(testing::example_qaum());
  const auto ref = oracle::reference_pipeline(testing::example_dense(), 10);
  EXPECT_EQ(b.qaum, testing::example_qaum());
  for (std::size_t h = 0; h < 10; ++h) {
    for (std::size_t k = 0; k < 10; ++k) {
      EXPECT_EQ(b.adm.count(h, k), ref.adm[h][k]);
      ASSERT_EQ(b.nnsm.defined(h, k), ref.nnsm[h][k].has_value());
      if (ref.nnsm[h][k]) {
        EXPECT_NEAR(*b.nnsm.at(h, k), *ref.nnsm[h][k], 1e-9);
      }
    }
  }
  EXPECT_TRUE(b.warnings.empty());
}

TEST(RunPipeline, SingleQueryIsADegenerateTie) {
  auto b = run_pipeline(usage_of({{"a1", "a2"}}, {"a1", "a2"}));
  EXPECT_EQ(b.nsm.at(0, 1), 0.0);
  EXPECT_EQ(b.nnsm.at(0, 1), 0.0);
  ASSERT_EQ(b.warnings.size(), 2u);
  EXPECT_EQ(b.warnings[0].kind, WarningKind::degenerate_tie);
}

TEST(RunPipeline, DisjointQueriesAreIsolated) {
  auto b = run_pipeline(usage_of({{"a1"}, {"a2"}}, {"a1", "a2"}));
  EXPECT_EQ(b.isolated_attributes(), (std::vector<std::string>{"a1", "a2"}));
  EXPECT_FALSE(b.pdm.at(0, 1));
  EXPECT_FALSE(b.mvsd.entries[0]);
  EXPECT_FALSE(b.nnsm.at(1, 0));
}

TEST(RunPipeline, StatisticsOverrideMustMatchLabels) {
  PipelineOptions opt;
  opt.mvsd_override = testing::printed_stats();
  auto b = run_pipeline(testing::example_qaum(), opt);
  EXPECT_EQ(b.mvsd, testing::printed_stats());
  ASSERT_EQ(b.warnings.size(), 1u);
  EXPECT_EQ(b.warnings[0].kind, WarningKind::mvsd_override);
  opt.mvsd_override->attributes[0] = "zz";
  EXPECT_THROW(run_pipeline(testing::example_qaum(), opt), InputError);
}

}  // namespace
}  // namespace attrscale
