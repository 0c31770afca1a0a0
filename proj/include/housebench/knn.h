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


#ifndef HOUSEBENCH_KNN_H_
#define HOUSEBENCH_KNN_H_

#include <string>

#include <Eigen/Dense>

#include "housebench/preprocess.h"
#include "json.hpp"

namespace housebench {

enum class DistanceKind { kEuclidean, kManhattan, kMinkowski, kChebyshev };

std::string DistanceName(DistanceKind kind);
DistanceKind ParseDistance(const std::string& name);

struct KnnConfig {
  int k = 7;
  DistanceKind distance = DistanceKind::kEuclidean;
  // Order of the Minkowski distance.
  double p = 2.0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static KnnConfig FromJson(const nlohmann::json& doc);
};

double Distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                const Eigen::Ref<const Eigen::VectorXd>& b, const KnnConfig& cfg);

// Owns copies of the training data.
struct KnnFit {
  KnnConfig config;
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

KnnFit FitKnn(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KnnConfig& cfg);
KnnFit FitKnn(const DesignMatrix& dm, const KnnConfig& cfg);

// Mean target of the k nearest training rows; distance ties go to the lower
// training-row index. Cost is O(n_train * n_query * p).
Eigen::VectorXd PredictKnn(const KnnFit& fit, const Eigen::MatrixXd& x);

}  // namespace housebench

#endif  // HOUSEBENCH_KNN_H_
