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


#ifndef HOUSEBENCH_INTERPRET_H_
#define HOUSEBENCH_INTERPRET_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "housebench/forest.h"
#include "housebench/preprocess.h"

namespace housebench {

// Model-agnostic prediction callback over design rows.
using PredictFn = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

struct FeatureImportance {
  std::string feature;
  // Mean increase in MSE over the permutation repeats.
  double importance = 0.0;
  // Sample standard deviation of the increase across repeats.
  double std_dev = 0.0;
};

// Increase in MSE on `dm` when the rows of `columns` are jointly reordered
// by `permutation` (row i takes the values of row permutation[i]).
double PermutationDelta(const PredictFn& predict, const DesignMatrix& dm,
                        const std::vector<Eigen::Index>& columns,
                        const std::vector<size_t>& permutation);

// Permutation importance of every source feature of `dm`, all indicator
// columns of a feature permuted together. Sorted by decreasing importance;
// ties keep design order.
std::vector<FeatureImportance> PermutationImportance(const PredictFn& predict,
                                                     const DesignMatrix& dm, int repeats,
                                                     uint64_t seed);

// Out-of-bag variant for a fitted forest: each tree is scored on the rows it
// never drew, before and after permuting the feature among those rows, and
// the per-tree increases are averaged. `train` must be the design the forest
// was fitted on. Trees with fewer than two OOB rows are skipped.
std::vector<FeatureImportance> OobPermutationImportance(const ForestFit& fit,
                                                        const DesignMatrix& train, int repeats,
                                                        uint64_t seed);

std::string ImportanceCsv(const std::vector<FeatureImportance>& table);

struct PdpPoint {
  // Level name for categorical curves, empty for numeric ones.
  std::string label;
  double raw_value = 0.0;
  double design_value = 0.0;
  double mean_prediction = 0.0;
};

struct PdpCurve {
  std::string feature;
  std::vector<PdpPoint> points;

  std::vector<double> predictions() const;
  std::string ToCsv() const;
};

// Sweeps the single design column of numeric `feature` over `design_grid`
// (design scale) on every background row and averages the predictions.
// `raw_grid`, when non-empty, labels the points in original units. Throws
// ConfigError for an empty grid or values outside the observed range.
PdpCurve PartialDependence(const PredictFn& predict, const DesignMatrix& background,
                           const std::string& feature, const std::vector<double>& design_grid,
                           const std::vector<double>& raw_grid = {});

// One point per indicator column of categorical `feature`, plus the
// all-zero reference level when the design has an intercept.
PdpCurve CategoricalPartialDependence(const PredictFn& predict, const DesignMatrix& background,
                                      const std::string& feature);

// `points` values evenly spaced over [lo, hi].
std::vector<double> LinearGrid(double lo, double hi, int points);

// Number of sign changes between consecutive non-zero discrete slopes.
int SlopeSignChanges(const std::vector<double>& values);

}  // namespace housebench

#endif  // HOUSEBENCH_INTERPRET_H_
