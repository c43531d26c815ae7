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


#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace attrscale {
namespace {

AttributeCatalog ten() { return AttributeCatalog(testing::printed::attribute_names()); }

std::vector<std::string> names(const ColumnExtraction& ex,
                               const AttributeCatalog& c) {
  std::vector<std::string> out;
  for (auto i : ex.attributes) out.push_back(c.name(i));
  return out;
}

std::vector<std::string> extract(const std::string& sql,
                                 const AttributeCatalog& c = ten()) {
  return names(extract_attributes(sql, c), c);
}

using V = std::vector<std::string>;

TEST(ExtractAttributes, SingleProjection) {
  EXPECT_EQ(extract("SELECT a1 FROM t"), V{"a1"});
}

TEST(ExtractAttributes, AliasedTableAcrossClauses) {
  EXPECT_EQ(extract("SELECT x.a1 FROM t x WHERE x.a2 > 5 ORDER BY a9"),
            (V{"a1", "a2", "a9"}));
}

TEST(ExtractAttributes, NoColumnsGivesEmptySet) {
  auto ex = extract_attributes("SELECT 1", ten());
  EXPECT_TRUE(ex.empty());
}

TEST(ExtractAttributes, CaseInsensitiveAndQuoted) {
  EXPECT_EQ(extract("select A1, \"a2\", `a3`, [a4] from T"),
            (V{"a1", "a2", "a3", "a4"}));
}

TEST(ExtractAttributes, ExpressionsFunctionsAndPredicates) {
  EXPECT_EQ(extract("SELECT SUM(a1) + a2 * 2, CASE WHEN a3 > 1 THEN a4 "
                    "ELSE a5 END FROM t WHERE a6 IN (1, 2) AND a7 BETWEEN 1 "
                    "AND 3 AND a8 LIKE 'x' AND a9 IS NOT NULL AND "
                    "CAST(a10 AS INT) = 1"),
            (V{"a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10"}));
}

TEST(ExtractAttributes, JoinsGroupingAndSelectAliases) {
  EXPECT_EQ(extract("SELECT p.a1 AS total, q.a2 FROM t p LEFT JOIN u q ON "
                    "p.a3 = q.a3 GROUP BY p.a1, q.a2 HAVING COUNT(*) > 1 "
                    "ORDER BY total DESC NULLS LAST LIMIT 3 OFFSET 1;"),
            (V{"a1", "a2", "a3"}));
}

TEST(ExtractAttributes, StringsCommentsAndParametersAreNotColumns) {
  EXPECT_EQ(extract("SELECT a1 FROM t -- a2\nWHERE a3 = 'a4 it''s' /* a5 */ "
                    "AND a6 = ? AND a7 = :a8 AND a9 = @a10"),
            (V{"a1", "a3", "a6", "a7", "a9"}));
}

TEST(ExtractAttributes, UnknownIdentifiersAreReported) {
  auto ex = extract_attributes("SELECT a1, zz FROM t", ten());
  EXPECT_EQ(names(ex, ten()), V{"a1"});
  ASSERT_EQ(ex.unresolved.size(), 1u);
  EXPECT_EQ(ex.unresolved[0].reference, "zz");
  EXPECT_EQ(ex.unresolved[0].offset, 11u);
}

TEST(ExtractAttributes, WildcardIsNotExpanded) {
  auto ex = extract_attributes("SELECT * FROM t", ten());
  EXPECT_TRUE(ex.attributes.empty());
  ASSERT_EQ(ex.unresolved.size(), 1u);
}

TEST(ExtractAttributes, QualifiedCatalogResolvesThroughTables) {
  AttributeCatalog c({"orders.id", "orders.total", "items.id"});
  EXPECT_EQ(extract("SELECT o.total FROM orders o JOIN items i ON o.id = i.id",
                    c),
            (V{"orders.id", "orders.total", "items.id"}));
  auto ex = extract_attributes("SELECT id FROM orders, items", c);
  EXPECT_TRUE(ex.attributes.empty());
  ASSERT_EQ(ex.unresolved.size(), 1u);
  EXPECT_NE(ex.unresolved[0].reason.find("ambiguous"), std::string::npos);
  EXPECT_EQ(extract("SELECT total FROM orders", c), V{"orders.total"});
}

TEST(ExtractAttributes, UnsupportedConstructs) {
  for (const char* sql :
       {"WITH x AS (SELECT a1 FROM t) SELECT a1 FROM x",
        "SELECT a1 FROM t UNION SELECT a2 FROM t",
        "SELECT a1 FROM (SELECT a1 FROM t) s",
        "SELECT a1 FROM t WHERE a2 IN (SELECT a2 FROM u)",
        "SELECT a1 FROM t WHERE EXISTS (SELECT 1)",
        "SELECT ROW_NUMBER() OVER (ORDER BY a1) FROM t",
        "UPDATE t SET a1 = 1", "DELETE FROM t"}) {
    try {
      extract_attributes(sql, ten());
      ADD_FAILURE() << sql;
    } catch (const SqlError& e) {
      EXPECT_EQ(e.kind(), SqlError::Kind::unsupported) << sql;
    }
  }
}

TEST(ExtractAttributes, ParseErrorsCarryOffsets) {
  try {
    extract_attributes("SELECT a1 FROM t WHERE 'open", ten());
    FAIL();
  } catch (const SqlError& e) {
    EXPECT_EQ(e.kind(), SqlError::Kind::parse);
    EXPECT_EQ(e.offset(), 23u);
  }
  EXPECT_THROW(extract_attributes("SELECT a1 FROM", ten()), SqlError);
  EXPECT_THROW(extract_attributes("SELECT (a1 FROM t", ten()), SqlError);
  EXPECT_THROW(extract_attributes("", ten()), SqlError);
  EXPECT_THROW(extract_attributes("SELECT a1", AttributeCatalog()),
               std::invalid_argument);
}

TEST(Tokenizer, SplitsSymbolsAndSkipsComments) {
  auto tokens = sql::tokenize("a<=b -- x\n/* y */ c<>'d'");
  std::vector<std::string> text;
  for (const auto& t : tokens) {
    if (t.kind != sql::TokenKind::end) text.push_back(t.text);
  }
  EXPECT_EQ(text, (V{"a", "<=", "b", "c", "<>", "d"}));
  EXPECT_THROW(sql::tokenize("a /* open"), SqlError);
}

}  // namespace
}  // namespace attrscale
