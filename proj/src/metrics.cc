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


#include "housebench/metrics.h"

#include <cmath>
#include <limits>
#include <numeric>

#include "housebench/errors.h"
#include "housebench/stats.h"

namespace housebench {

using nlohmann::json;

namespace {

void CheckLengths(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  if (y.size() != y_hat.size()) throw DataError("targets and predictions differ in length");
  if (y.size() == 0) throw DataError("metrics need at least one prediction");
}

json FiniteOrText(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

double Rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  CheckLengths(y, y_hat);
  return std::sqrt((y - y_hat).squaredNorm() / static_cast<double>(y.size()));
}

double Mae(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  CheckLengths(y, y_hat);
  return (y - y_hat).cwiseAbs().mean();
}

double Mape(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  CheckLengths(y, y_hat);
  if ((y.array() == 0.0).any()) throw DataError("MAPE is undefined for a zero target");
  return 100.0 * ((y - y_hat).array() / y.array()).abs().mean();
}

double RSquared(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  CheckLengths(y, y_hat);
  const double sst = (y.array() - y.mean()).square().sum();
  if (sst == 0.0) throw DataError("R^2 is undefined for a constant target");
  return 1.0 - (y - y_hat).squaredNorm() / sst;
}

MetricSet ComputeMetrics(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  return {Rmse(y, y_hat), Mae(y, y_hat), Mape(y, y_hat), RSquared(y, y_hat)};
}

json MetricSet::ToJson() const {
  return {{"rmse", rmse}, {"mae", mae}, {"mape", mape}, {"r2", r2}};
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double SampleStd(const std::vector<double>& values) {
  if (values.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

PairedTTestResult PairedTTest(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DataError("paired samples differ in length");
  if (a.size() < 2) throw DataError("paired t-test needs at least two pairs");
  std::vector<double> d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  PairedTTestResult out;
  out.df = static_cast<int>(d.size()) - 1;
  out.mean_diff = Mean(d);
  out.std_diff = SampleStd(d);
  if (out.std_diff == 0.0) {
    if (out.mean_diff == 0.0) {
      out.t = 0.0;
      out.p_value = 1.0;
    } else {
      out.t = std::copysign(std::numeric_limits<double>::infinity(), out.mean_diff);
      out.p_value = 0.0;
      out.degenerate = true;
    }
    return out;
  }
  out.t = out.mean_diff / (out.std_diff / std::sqrt(static_cast<double>(d.size())));
  out.p_value = StudentTTwoSidedP(out.t, out.df);
  return out;
}

json PairedTTestResult::ToJson() const {
  return {{"t", FiniteOrText(t)},
          {"p_value", p_value},
          {"df", df},
          {"mean_diff", mean_diff},
          {"std_diff", std_diff},
          {"degenerate", degenerate}};
}

}  // namespace housebench
