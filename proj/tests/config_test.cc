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


#include "housebench/config.h"

#include <fstream>

#include <gtest/gtest.h>

#include "housebench/errors.h"
#include "test_util.h"

namespace housebench {
namespace {

using nlohmann::json;

TEST(ConfigTest, SyntheticDefaults) {
  const RunConfig cfg = ParseRunConfig(json::parse(R"({"data": {"synthetic": {"n": 50, "seed": 3}}})"));
  ASSERT_TRUE(cfg.data.synthetic.has_value());
  EXPECT_EQ(cfg.data.synthetic->n, 50u);
  EXPECT_EQ(cfg.plan.repeats, 20);
  EXPECT_EQ(cfg.plan.models.size(), 4u);
  EXPECT_EQ(cfg.analysis.pdp_points, 20);
  EXPECT_EQ(LoadData(cfg.data).num_rows(), 50u);
}

TEST(ConfigTest, FullDocument) {
  const RunConfig cfg = ParseRunConfig(json::parse(R"({
    "data": {"csv": "a.csv", "schema": "/abs/s.json"},
    "pipeline": {"winsor": "two_sided", "r_threshold": 0.7, "target_transform": "none",
                 "hedonic_log_features": []},
    "experiment": {"models": ["RF", "HP"], "repeats": 3, "base_seed": 9,
                   "fractions": [0.6, 0.2, 0.2], "threads": 2,
                   "grids": {"RF": {"mtry": [2, 4]}}, "params": {"RF": {"n_trees": 20}}},
    "analysis": {"importance_source": "oob", "pdp_features": ["Age"], "pdp_grids": {"Age": [1, 2, 3]}},
    "output": {"dir": "results", "plots": false}
  })"), "/base");
  EXPECT_EQ(cfg.data.csv, std::filesystem::path("/base/a.csv"));
  EXPECT_EQ(cfg.data.schema, std::filesystem::path("/abs/s.json"));
  EXPECT_EQ(cfg.plan.pipeline.winsor.mode, WinsorMode::kTwoSided);
  EXPECT_EQ(cfg.plan.pipeline.screen.r_threshold, 0.7);
  EXPECT_EQ(cfg.plan.pipeline.target_transform, TargetTransform::kNone);
  EXPECT_EQ(cfg.plan.models, (std::vector<ModelFamily>{ModelFamily::kRF, ModelFamily::kHP}));
  EXPECT_EQ(cfg.plan.fractions.train, 0.6);
  EXPECT_EQ(cfg.plan.search, SearchMode::kGrid);
  const auto grid = cfg.plan.Grid(ModelFamily::kRF);
  ASSERT_EQ(grid.size(), 2u);
  EXPECT_EQ(std::get<ForestConfig>(grid[1]).mtry, 4);
  EXPECT_EQ(std::get<ForestConfig>(grid[1]).n_trees, 20);
  EXPECT_EQ(cfg.analysis.pdp_grids.at("Age").size(), 3u);
  EXPECT_EQ(cfg.analysis.importance_source, ImportanceSource::kOob);
  EXPECT_EQ(cfg.output.dir, std::filesystem::path("/base/results"));
  EXPECT_FALSE(cfg.output.plots);
}

TEST(ConfigTest, RandomSearchKeys) {
  const RunConfig cfg = ParseRunConfig(json::parse(R"({
    "data": {"synthetic": {}},
    "experiment": {"search": "random", "search_points": 2,
                   "grids": {"KNN": {"k": [1, 2, 3, 4]}}}
  })"));
  EXPECT_EQ(cfg.plan.search, SearchMode::kRandom);
  EXPECT_EQ(cfg.plan.Grid(ModelFamily::kKNN).size(), 2u);
  EXPECT_EQ(cfg.plan.ToJson().at("search"), "random");
}

TEST(ConfigTest, InvalidDocumentsRejected) {
  for (const char* doc : {
           R"({})",
           R"({"data": {"synthetic": {}}, "extra": 1})",
           R"({"data": {"csv": "a.csv"}})",
           R"({"data": {"csv": "a", "schema": "b", "synthetic": {}}})",
           R"({"data": {"synthetic": {"rows": 5}}})",
           R"({"data": {"synthetic": {}}, "pipeline": {"winsor": "both"}})",
           R"({"data": {"synthetic": {}}, "experiment": {"models": ["SVM"]}})",
           R"({"data": {"synthetic": {}}, "experiment": {"fractions": [0.5, 0.5]}})",
           R"({"data": {"synthetic": {}}, "experiment": {"grids": {"KNN": {"kk": [1]}}}})",
           R"({"data": {"synthetic": {}}, "experiment": {"repeats": "many"}})",
           R"({"data": {"synthetic": {}}, "experiment": {"search": "bayes"}})",
           R"({"data": {"synthetic": {}}, "analysis": {"importance_source": "test"}})",
           R"({"data": {"synthetic": {}}, "experiment": {"search_points": -2}})",
       }) {
    EXPECT_THROW(ParseRunConfig(json::parse(doc)), ConfigError) << doc;
  }
}

TEST(ConfigTest, LoadResolvesAgainstFileDirectory) {
  const testing::TempDir dir("config");
  std::ofstream(dir.path() / "c.json") << R"({"data": {"csv": "d.csv", "schema": "s.json"}})";
  const RunConfig cfg = LoadRunConfig(dir.path() / "c.json");
  EXPECT_EQ(cfg.data.csv, dir.path() / "d.csv");
  EXPECT_THROW(LoadRunConfig(dir.path() / "missing.json"), ConfigError);
  std::ofstream(dir.path() / "bad.json") << "{not json";
  EXPECT_THROW(LoadRunConfig(dir.path() / "bad.json"), ConfigError);
}

}  // namespace
}  // namespace housebench
