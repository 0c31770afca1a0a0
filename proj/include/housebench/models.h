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


#ifndef HOUSEBENCH_MODELS_H_
#define HOUSEBENCH_MODELS_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "housebench/ann.h"
#include "housebench/forest.h"
#include "housebench/hedonic.h"
#include "housebench/interpret.h"
#include "housebench/knn.h"
#include "housebench/preprocess.h"
#include "json.hpp"

namespace housebench {

enum class ModelFamily { kHP = 0, kANN = 1, kRF = 2, kKNN = 3 };

inline constexpr ModelFamily kAllFamilies[] = {ModelFamily::kHP, ModelFamily::kANN,
                                               ModelFamily::kRF, ModelFamily::kKNN};

// "HP", "ANN", "RF", "KNN".
std::string FamilyName(ModelFamily family);
ModelFamily ParseFamily(const std::string& name);
// Hedonic coding for HP, full coding otherwise.
Coding FamilyCoding(ModelFamily family);

struct HedonicParams {
  HcType hc = HcType::kHC0;
};

using HyperParams = std::variant<HedonicParams, NetworkConfig, ForestConfig, KnnConfig>;

ModelFamily FamilyOf(const HyperParams& params);
HyperParams DefaultParams(ModelFamily family);
nlohmann::json ParamsToJson(const HyperParams& params);
// Unknown keys are ConfigErrors.
HyperParams ParamsFromJson(ModelFamily family, const nlohmann::json& doc);
// Hyperparameter names a grid may vary (seeds are assigned per repeat).
const std::vector<std::string>& TunableKeys(ModelFamily family);

// Cartesian product of a grid object {key: [values...]} (a scalar counts as
// a one-value list) over `base`. Keys vary in sorted order, the last key
// fastest. An empty or null grid yields {base}.
std::vector<HyperParams> ExpandGrid(ModelFamily family, const nlohmann::json& grid,
                                    const nlohmann::json& base = nlohmann::json::object());

// Across-repeat average of chosen hyperparameters: numeric keys are
// averaged, integer keys rounded, categorical keys take the most frequent
// value (first seen on ties). Returns the raw averages and the rounded
// configuration.
struct AveragedParams {
  nlohmann::json raw;
  HyperParams rounded;
};
AveragedParams AverageParams(ModelFamily family, const std::vector<HyperParams>& chosen);

using ModelState = std::variant<OlsFit, NetworkState, ForestFit, KnnFit>;

struct TrainedModel {
  HyperParams params;
  ModelState state;

  ModelFamily family() const { return FamilyOf(params); }
  Eigen::VectorXd Predict(const Eigen::MatrixXd& x) const;
  PredictFn AsPredictFn() const;
  nlohmann::json ToJson() const;
};

// Trains one model. `seed` replaces the configuration seed of stochastic
// families. The validation design drives ANN early stopping only.
TrainedModel TrainModel(const HyperParams& params, const DesignMatrix& train,
                        const DesignMatrix& validation, uint64_t seed);

}  // namespace housebench

#endif  // HOUSEBENCH_MODELS_H_
