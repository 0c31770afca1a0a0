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
#include <random>

#include <boost/math/distributions/students_t.hpp>
#include <gtest/gtest.h>

#include "housebench/errors.h"

namespace housebench {
namespace {

TEST(MetricsTest, HandExample) {
  const Eigen::Vector3d y(1, 2, 4), yh(1, 3, 3);
  const MetricSet m = ComputeMetrics(y, yh);
  EXPECT_NEAR(m.rmse, std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(m.mae, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.mape, 25.0, 1e-12);
  EXPECT_NEAR(m.r2, 1.0 - 2.0 / (42.0 / 9.0), 1e-15);
}

TEST(MetricsTest, ConstantPrediction) {
  const MetricSet m = ComputeMetrics(Eigen::Vector3d(1, 2, 4), Eigen::Vector3d(2, 2, 2));
  EXPECT_NEAR(m.rmse, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_NEAR(m.mae, 1.0, 1e-12);
  EXPECT_NEAR(m.mape, 50.0, 1e-12);
  EXPECT_NEAR(m.r2, 1.0 - 5.0 / (14.0 / 3.0), 1e-12);
}

TEST(MetricsTest, Properties) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal(5.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd y(30), yh(30);
    for (int i = 0; i < 30; ++i) {
      y(i) = normal(gen);
      yh(i) = y(i) + 0.3 * normal(gen) - 1.5;
    }
    EXPECT_GE(Rmse(y, yh), Mae(y, yh));
    const double sse = (y - yh).squaredNorm();
    const double sst = (y.array() - y.mean()).square().sum();
    EXPECT_NEAR(RSquared(y, yh), 1.0 - sse / sst, 1e-12);
    EXPECT_NEAR(Rmse(y, yh), std::sqrt(sse / 30.0), 1e-12);
  }
  const Eigen::Vector3d y(1, 2, 3);
  EXPECT_EQ(ComputeMetrics(y, y).r2, 1.0);
  EXPECT_NEAR(RSquared(y, Eigen::Vector3d::Constant(2.0)), 0.0, 1e-15);
  EXPECT_EQ(Rmse(y, y), 0.0);
}

TEST(MetricsTest, DegenerateInputsRejected) {
  EXPECT_THROW(Mape(Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 1)), DataError);
  EXPECT_THROW(RSquared(Eigen::Vector2d(2, 2), Eigen::Vector2d(1, 1)), DataError);
}

TEST(PairedTTest, AgainstDirectFormula) {
  const std::vector<double> a = {0.31, 0.29, 0.35, 0.30, 0.33, 0.28};
  const std::vector<double> b = {0.36, 0.30, 0.37, 0.35, 0.34, 0.33};
  double mean = 0.0;
  for (size_t i = 0; i < a.size(); ++i) mean += (a[i] - b[i]) / a.size();
  double ss = 0.0;
  for (size_t i = 0; i < a.size(); ++i) ss += std::pow(a[i] - b[i] - mean, 2);
  const double sd = std::sqrt(ss / (a.size() - 1));
  const double t = mean / (sd / std::sqrt(a.size()));
  const boost::math::students_t_distribution<double> dist(5);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  const PairedTTestResult r = PairedTTest(a, b);
  EXPECT_EQ(r.df, 5);
  EXPECT_NEAR(r.t, t, 1e-12);
  EXPECT_NEAR(r.p_value, p, 1e-12);
  EXPECT_NEAR(r.mean_diff, mean, 1e-15);
  EXPECT_NEAR(r.std_diff, sd, 1e-15);
  EXPECT_FALSE(r.degenerate);
  // Antisymmetric in its arguments.
  EXPECT_NEAR(PairedTTest(b, a).t, -t, 1e-12);
}

TEST(PairedTTest, IdenticalSamples) {
  const std::vector<double> a = {1, 2, 3};
  const PairedTTestResult r = PairedTTest(a, a);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(PairedTTest, ConstantShiftIsDegenerate) {
  const PairedTTestResult r = PairedTTest({1, 2, 3}, {2, 3, 4});
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.t, -std::numeric_limits<double>::infinity());
  EXPECT_EQ(r.p_value, 0.0);
  EXPECT_EQ(r.ToJson()["t"], "-inf");
}

TEST(PairedTTest, InvalidInputs) {
  EXPECT_THROW(PairedTTest({1}, {2}), DataError);
  EXPECT_THROW(PairedTTest({1, 2}, {2}), DataError);
}

TEST(MetricsTest, MeanAndSampleStd) {
  EXPECT_DOUBLE_EQ(Mean({1, 2, 3, 4}), 2.5);
  EXPECT_NEAR(SampleStd({1, 2, 3, 4}), std::sqrt(5.0 / 3.0), 1e-15);
}

}  // namespace
}  // namespace housebench
