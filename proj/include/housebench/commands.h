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


#ifndef HOUSEBENCH_COMMANDS_H_
#define HOUSEBENCH_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "housebench/config.h"
#include "housebench/interpret.h"

namespace housebench {

struct CommandOptions {
  std::filesystem::path config;
  // Replaces experiment.base_seed and the synthetic generator seed.
  std::optional<uint64_t> seed;
  std::optional<std::filesystem::path> out;
  bool no_plots = false;
};

// Loads the config and applies the command-line overrides.
RunConfig ResolveConfig(const CommandOptions& options);

// Each command returns the process exit code: 0 success, 1 usage or config
// error, 2 data error, 3 model failure. Progress goes to `out`, diagnostics
// to `err`.
int RunSynthesize(const CommandOptions& options, std::ostream& out, std::ostream& err);
int RunDescribe(const CommandOptions& options, std::ostream& out, std::ostream& err);
int RunPrepare(const CommandOptions& options, std::ostream& out, std::ostream& err);
int RunCompare(const CommandOptions& options, std::ostream& out, std::ostream& err);
int RunImportance(const CommandOptions& options, std::ostream& out, std::ostream& err);
int RunPdp(const CommandOptions& options, std::ostream& out, std::ostream& err);
int RunReport(const CommandOptions& options, std::ostream& out, std::ostream& err);

// Random forest interpretation on repeat 0 of the plan.
struct ForestAnalysis {
  std::vector<FeatureImportance> importance;
  std::vector<PdpCurve> curves;
};

// Permutation importance on the validation fold of repeat 0 and partial
// dependence over the training fold. Requires RF in the roster.
ForestAnalysis AnalyzeForest(const RunConfig& cfg, const Dataset& ds, bool with_pdp);

// Lower-case file-name stem, e.g. "Walk to E.School" -> "walk_to_e_school".
std::string Slug(const std::string& name);

}  // namespace housebench

#endif  // HOUSEBENCH_COMMANDS_H_
