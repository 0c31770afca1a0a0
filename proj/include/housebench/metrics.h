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


#ifndef HOUSEBENCH_METRICS_H_
#define HOUSEBENCH_METRICS_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace housebench {

struct MetricSet {
  double rmse = 0.0;
  double mae = 0.0;
  // Percent.
  double mape = 0.0;
  double r2 = 0.0;

  nlohmann::json ToJson() const;
};

double Rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);
double Mae(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);
// Throws DataError when some y is zero.
double Mape(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);
// Throws DataError when y has zero variance.
double RSquared(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

MetricSet ComputeMetrics(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

struct PairedTTestResult {
  double t = 0.0;
  double p_value = 1.0;
  int df = 0;
  double mean_diff = 0.0;
  double std_diff = 0.0;
  // Differences with zero spread and non-zero mean: t is infinite, p is 0.
  bool degenerate = false;

  nlohmann::json ToJson() const;
};

// Two-sided paired t-test on a - b with Student-t reference (m - 1 df).
PairedTTestResult PairedTTest(const std::vector<double>& a, const std::vector<double>& b);

// Sample mean and (n - 1) standard deviation.
double Mean(const std::vector<double>& values);
double SampleStd(const std::vector<double>& values);

}  // namespace housebench

#endif  // HOUSEBENCH_METRICS_H_
