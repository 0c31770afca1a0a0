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

#ifndef HOUSEBENCH_HEDONIC_H_
#define HOUSEBENCH_HEDONIC_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "housebench/preprocess.h"
#include "json.hpp"

namespace housebench {

struct OlsFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  Eigen::VectorXd fitted;
  Eigen::MatrixXd xtx_inverse;
  Eigen::Index df_resid = 0;
  std::vector<std::string> names;

  nlohmann::json ToJson() const;
  static OlsFit FromJson(const nlohmann::json& doc);
};

// Least squares through a column-pivoted Householder QR with rank tolerance
// 1e-10 relative to the largest |R| diagonal. (X'X)^-1 is recovered from R.
// Throws ModelError naming the dependent columns when X is rank deficient,
// and when n <= p.
OlsFit FitOls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
              std::vector<std::string> names = {});
OlsFit FitOls(const DesignMatrix& dm);

// HC0 is White's estimator; HC1 rescales it by n / (n - p).
enum class HcType { kHC0, kHC1 };

struct RobustInference {
  Eigen::MatrixXd covariance;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd t_stats;
  // Two-sided, standard normal reference.
  Eigen::VectorXd p_values;
};

RobustInference WhiteCovariance(const OlsFit& fit, const Eigen::MatrixXd& x,
                                HcType type = HcType::kHC0);

struct WhiteTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int df = 0;
  int aux_terms = 0;
  double r_squared = 0.0;
  std::vector<std::string> dropped_terms;
};

// Regresses the squared residuals on levels, squares of non-indicator
// regressors and cross products among the `max_cross_terms`
// highest-variance regressors. Statistic n R^2 against chi-squared with
// (retained auxiliary terms - 1) degrees of freedom. Collinear auxiliary
// terms are dropped and listed.
WhiteTestResult WhiteTest(const OlsFit& fit, const Eigen::MatrixXd& x,
                          bool has_intercept = true, int max_cross_terms = 10);

Eigen::VectorXd PredictOls(const OlsFit& fit, const Eigen::MatrixXd& x);

// Coefficient table: term, coefficient, robust SE, t, p and significance
// stars (*** p < 0.01, ** p < 0.05, * p < 0.1).
std::string CoefficientTableCsv(const OlsFit& fit, const RobustInference& inf);
std::string SignificanceStars(double p_value);

}  // namespace housebench

#endif  // HOUSEBENCH_HEDONIC_H_
