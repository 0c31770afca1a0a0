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


#ifndef HOUSEBENCH_EXPERIMENT_H_
#define HOUSEBENCH_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "housebench/data_model.h"
#include "housebench/metrics.h"
#include "housebench/models.h"
#include "housebench/preprocess.h"
#include "json.hpp"

namespace housebench {

enum class SearchMode { kGrid, kRandom };

struct ExperimentPlan {
  std::vector<ModelFamily> models = {ModelFamily::kHP, ModelFamily::kANN, ModelFamily::kRF,
                                     ModelFamily::kKNN};
  int repeats = 20;
  uint64_t base_seed = 0;
  SplitFractions fractions;
  // Per-family grid objects {key: [values]}; a missing family uses {base}.
  std::map<ModelFamily, nlohmann::json> grids;
  // kRandom keeps `search_points` grid points per family, drawn without
  // replacement from a base_seed stream; 0 or a count above the grid size
  // keeps the whole grid.
  SearchMode search = SearchMode::kGrid;
  int search_points = 0;
  // Per-family fixed settings applied under every grid point.
  std::map<ModelFamily, nlohmann::json> base_params;
  // Re-evaluates every repeat with the across-repeat averaged structure.
  bool fixed_structure_rerun = false;
  // Repeats evaluated concurrently.
  int threads = 1;
  // Test rows exported from repeat 0 for the predicted-vs-actual chart.
  int prediction_rows = 20;
  PipelineOptions pipeline;

  void Validate() const;
  std::vector<HyperParams> Grid(ModelFamily family) const;
  nlohmann::json ToJson() const;
};

nlohmann::json PipelineOptionsToJson(const PipelineOptions& options);

// Seed used by `family` in repeat `repeat`.
uint64_t ModelSeed(uint64_t base_seed, int repeat, ModelFamily family);

struct GridSearchResult {
  size_t best_index = 0;
  HyperParams best;
  double validation_mse = 0.0;
  // NaN for grid points that failed to train.
  std::vector<double> scores;
  std::vector<std::string> warnings;
};

// Trains every grid point on `train` and keeps the lowest validation MSE
// (first point on ties). Failing points are skipped with a warning; throws
// ModelError when all of them fail.
GridSearchResult GridSearch(const std::vector<HyperParams>& grid, const DesignMatrix& train,
                            const DesignMatrix& validation, uint64_t seed);

struct ModelRepeatResult {
  ModelFamily family = ModelFamily::kHP;
  bool ok = false;
  std::string error;
  HyperParams chosen;
  double validation_mse = 0.0;
  MetricSet train;
  MetricSet validation;
  MetricSet test;
  std::vector<std::string> warnings;
};

struct RepeatResult {
  int repeat = 0;
  uint64_t split_seed = 0;
  size_t n_train = 0;
  size_t n_validation = 0;
  size_t n_test = 0;
  std::string pipeline_fingerprint;
  std::vector<DroppedFeature> dropped;
  // Roster order.
  std::vector<ModelRepeatResult> models;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;
};

struct PartitionSummary {
  Summary rmse;
  Summary mae;
  Summary mape;
  Summary r2;
};

struct ModelSummary {
  ModelFamily family = ModelFamily::kHP;
  int successful_repeats = 0;
  PartitionSummary train;
  PartitionSummary validation;
  PartitionSummary test;
  std::optional<AveragedParams> averaged_params;
  // Test metrics of the fixed-structure rerun, per repeat.
  std::vector<std::optional<MetricSet>> fixed_test;
  std::optional<PartitionSummary> fixed_summary;
};

struct PairwiseTest {
  ModelFamily a = ModelFamily::kHP;
  ModelFamily b = ModelFamily::kHP;
  // "test_rmse" or "test_mape".
  std::string metric;
  int pairs = 0;
  PairedTTestResult result;
};

struct PredictionSample {
  std::vector<std::string> row_ids;
  std::vector<double> actual;
  std::map<ModelFamily, std::vector<double>> predicted;
};

struct ComparisonReport {
  ExperimentPlan plan;
  size_t n_rows = 0;
  std::vector<RepeatResult> repeats;
  std::vector<ModelSummary> summaries;
  std::vector<PairwiseTest> tests;
  PredictionSample predictions;

  bool has_failures() const;
  const ModelSummary* Find(ModelFamily family) const;
  // Per-repeat values of a metric ("rmse", "mae", "mape", "r2") on a
  // partition ("train", "validation", "test"); NaN where the model failed.
  std::vector<double> Values(ModelFamily family, const std::string& partition,
                             const std::string& metric) const;
  nlohmann::json ToJson() const;
  // Rows are metrics; columns are model x partition; cells "mean (std)".
  std::string MetricsTableCsv() const;
};

// Repeat-0 state kept for coefficient tables, loss curves and PDPs.
struct RepeatArtifacts {
  SplitIndices split;
  PipelineFit pipeline;
  std::map<Coding, DesignMatrix> train;
  std::map<Coding, DesignMatrix> validation;
  std::map<Coding, DesignMatrix> test;
  std::map<ModelFamily, TrainedModel> models;
};

ComparisonReport RunExperiment(const ExperimentPlan& plan, const Dataset& ds,
                               RepeatArtifacts* first_repeat = nullptr);

}  // namespace housebench

#endif  // HOUSEBENCH_EXPERIMENT_H_
