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


#ifndef HOUSEBENCH_CONFIG_H_
#define HOUSEBENCH_CONFIG_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "housebench/experiment.h"
#include "housebench/synthgen.h"
#include "json.hpp"

namespace housebench {

// Exactly one of (csv, schema) or synthetic.
struct DataSource {
  std::filesystem::path csv;
  std::filesystem::path schema;
  std::optional<GeneratorConfig> synthetic;
};

enum class ImportanceSource { kValidation, kOob };

struct AnalysisOptions {
  int importance_repeats = 10;
  // kValidation permutes the validation fold; kOob uses each tree's
  // out-of-bag training rows.
  ImportanceSource importance_source = ImportanceSource::kValidation;
  int pdp_points = 20;
  // Empty selects the three most important numeric features.
  std::vector<std::string> pdp_features;
  // Raw-unit grids that replace the default percentile grid.
  std::map<std::string, std::vector<double>> pdp_grids;
  double pdp_lower_q = 0.05;
  double pdp_upper_q = 0.95;
};

struct OutputOptions {
  std::filesystem::path dir = "housebench_out";
  bool plots = true;
};

struct RunConfig {
  DataSource data;
  ExperimentPlan plan;
  AnalysisOptions analysis;
  OutputOptions output;
};

// Relative paths resolve against `base_dir`. Unknown keys are ConfigErrors.
RunConfig ParseRunConfig(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Dataset named by the config, generated or loaded.
Dataset LoadData(const DataSource& source);

}  // namespace housebench

#endif  // HOUSEBENCH_CONFIG_H_
