/*
 * Copyright 2026 The housebench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "housebench/csv.h"

#include <gtest/gtest.h>

#include "housebench/errors.h"
#include "housebench/synthgen.h"
#include "test_util.h"

namespace housebench {
namespace {

std::string ErrorOf(const std::string& csv) {
  try {
    ParseDataset(csv, testing::SmallSchema());
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(CsvTest, EmptyCellIsMissingOnlyThere) {
  const Dataset ds = ParseDataset(
      "id,price,area,age,Region,pool\nA1,100,,3,North,1\nA2,200,50,4,South,0\nA3,300,70,5,East,NA\n",
      testing::SmallSchema());
  const size_t area = ds.ColumnIndex("area");
  for (size_t r = 0; r < ds.num_rows(); ++r) {
    for (size_t c = 0; c < ds.num_columns(); ++c) {
      const bool expected = (r == 0 && c == area) || (r == 2 && c == ds.ColumnIndex("pool"));
      EXPECT_EQ(ds.is_missing(r, c), expected) << r << "," << c;
    }
  }
  EXPECT_EQ(ds.CellText(1, ds.ColumnIndex("Region")), "South");
  EXPECT_EQ(ds.CellText(0, 0), "A1");
}

TEST(CsvTest, UnknownLevelNamesTheValue) {
  const std::string msg = ErrorOf("id,price,area,age,Region,pool\n1,100,1,3,Westside,1\n");
  EXPECT_NE(msg.find("Westside"), std::string::npos) << msg;
  EXPECT_NE(msg.find("Region"), std::string::npos) << msg;
}

TEST(CsvTest, UnparseableNumberReportsCoordinates) {
  const std::string msg = ErrorOf("id,price,area,age,Region,pool\n1,100,1,3,North,1\n2,100,abc,3,North,1\n");
  EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("area"), std::string::npos) << msg;
}

TEST(CsvTest, HeaderProblemsAreErrors) {
  EXPECT_NE(ErrorOf("id,price,area,age,Region,pool,extra\n1,1,1,1,North,1,1\n"), "");
  EXPECT_NE(ErrorOf("id,price,area,area,Region,pool\n1,1,1,1,North,1\n").find("duplicate"),
            std::string::npos);
  EXPECT_NE(ErrorOf("id,price,area,Region,pool\n1,1,1,North,1\n"), "");
  EXPECT_NE(ErrorOf("id,price,area,age,Region,pool\n1,1,1,1,North,2\n"), "");
}

TEST(CsvTest, QuotedFields) {
  const auto rows = ParseCsv("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "x, y");
  EXPECT_EQ(rows[1][1], "say \"hi\"");
  EXPECT_EQ(EscapeCsvField("a,b"), "\"a,b\"");
}

TEST(CsvTest, ShortestRoundTripFormatting) {
  for (double v : {0.1, 1.0 / 3.0, 896332.0, -2.5e-12}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
}

TEST(CsvTest, SyntheticDatasetRoundTrips) {
  GeneratorConfig cfg;
  cfg.n = 120;
  cfg.seed = 3;
  cfg.missing_rate = 0.1;
  cfg.outlier_rate = 0.05;
  const Dataset original = Generate(cfg).dataset;
  testing::TempDir dir("csv_roundtrip");
  WriteDataset(original, dir.path() / "d.csv", dir.path() / "s.json");
  const Dataset reloaded = LoadCsv(dir.path() / "d.csv", dir.path() / "s.json");
  EXPECT_TRUE(reloaded == original);
}

TEST(CsvTest, MissingSchemaFileNamesPath) {
  try {
    LoadSchema("/nonexistent/schema.json");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/schema.json"), std::string::npos);
  }
}

TEST(SchemaJsonTest, UnknownKeyRejected) {
  EXPECT_THROW(SchemaFromJson(nlohmann::json::parse(
                   R"([{"name": "p", "kind": "numeric", "role": "target", "colour": 1}])")),
               DataError);
}

}  // namespace
}  // namespace housebench
