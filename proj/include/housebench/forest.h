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


#ifndef HOUSEBENCH_FOREST_H_
#define HOUSEBENCH_FOREST_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "housebench/preprocess.h"
#include "housebench/random.h"
#include "json.hpp"

namespace housebench {

struct ForestConfig {
  int n_trees = 250;
  // 0 selects round(p / 3) at fit time.
  int mtry = 7;
  // Negative means unlimited. The root is at depth 0.
  int max_depth = -1;
  int min_leaf = 5;
  bool bootstrap = true;
  uint64_t seed = 0;
  int num_threads = 1;

  void Validate() const;
  // Effective mtry for `num_features` design columns.
  int ResolveMtry(Eigen::Index num_features) const;
  nlohmann::json ToJson() const;
  static ForestConfig FromJson(const nlohmann::json& doc);
};

// Flat node storage. Internal nodes send x[feature] <= threshold left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double prediction = 0.0;
  int count = 0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;

  double PredictRow(const Eigen::MatrixXd& x, Eigen::Index row) const;
  Eigen::VectorXd Predict(const Eigen::MatrixXd& x) const;
  int Depth() const;
};

// Grows one CART tree on `rows` of (x, y); repeated row indices act as
// bootstrap multiplicities. Candidate features at each node come from `rng`.
Tree FitTree(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
             std::span<const size_t> rows, const ForestConfig& cfg, Rng& rng);

struct ForestFit {
  ForestConfig config;
  Eigen::Index num_features = 0;
  std::vector<Tree> trees;
  // Rows drawn for each tree (with repetition when bootstrapping).
  std::vector<std::vector<size_t>> samples;
  // Mean over trees that did not see the row; NaN when every tree saw it.
  Eigen::VectorXd oob_predictions;
  std::vector<int> oob_counts;

  nlohmann::json ToJson() const;
  static ForestFit FromJson(const nlohmann::json& doc);
};

ForestFit FitForest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const ForestConfig& cfg);
ForestFit FitForest(const DesignMatrix& dm, const ForestConfig& cfg);

Eigen::VectorXd PredictForest(const ForestFit& fit, const Eigen::MatrixXd& x);

// MSE of the out-of-bag predictions over rows with at least one OOB tree.
double OobError(const ForestFit& fit, const Eigen::VectorXd& y);

}  // namespace housebench

#endif  // HOUSEBENCH_FOREST_H_
