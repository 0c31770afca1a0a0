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


#include "housebench/knn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "housebench/errors.h"
#include "test_util.h"

namespace housebench {
namespace {

KnnConfig WithDistance(DistanceKind kind, double p = 2.0) {
  KnnConfig cfg;
  cfg.distance = kind;
  cfg.p = p;
  return cfg;
}

TEST(KnnTest, DistancesByHand) {
  const Eigen::Vector2d a(0, 0), b(3, 4);
  EXPECT_DOUBLE_EQ(Distance(a, b, WithDistance(DistanceKind::kEuclidean)), 5.0);
  EXPECT_DOUBLE_EQ(Distance(a, b, WithDistance(DistanceKind::kManhattan)), 7.0);
  EXPECT_DOUBLE_EQ(Distance(a, b, WithDistance(DistanceKind::kChebyshev)), 4.0);
  const Eigen::Vector2d c(1, 1);
  EXPECT_NEAR(Distance(a, c, WithDistance(DistanceKind::kMinkowski, 3.0)), std::cbrt(2.0), 1e-15);
  EXPECT_NEAR(Distance(a, b, WithDistance(DistanceKind::kMinkowski, 2.0)), 5.0, 1e-15);
}

TEST(KnnTest, NamesRoundTrip) {
  for (DistanceKind k : {DistanceKind::kEuclidean, DistanceKind::kManhattan, DistanceKind::kMinkowski,
                         DistanceKind::kChebyshev}) {
    EXPECT_EQ(ParseDistance(DistanceName(k)), k);
  }
  EXPECT_THROW(ParseDistance("cosine"), ConfigError);
}

TEST(KnnTest, KEqualsNPredictsTrainingMean) {
  std::mt19937_64 gen(1);
  const Eigen::MatrixXd x = testing::RandomMatrix(15, 3, gen);
  const Eigen::VectorXd y = testing::RandomMatrix(15, 1, gen).col(0);
  KnnConfig cfg;
  cfg.k = 15;
  const Eigen::VectorXd pred = PredictKnn(FitKnn(x, y, cfg), testing::RandomMatrix(4, 3, gen));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(pred(i), y.mean(), 1e-12);
}

TEST(KnnTest, KLargerThanTrainingSetRejected) {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 2);
  KnnConfig cfg;
  cfg.k = 4;
  EXPECT_THROW(FitKnn(x, Eigen::VectorXd::Zero(3), cfg), ModelError);
}

// Oracle: full sort of (distance, index) pairs.
TEST(KnnTest, MatchesFullSortOracle) {
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<int> grid(0, 3);
  Eigen::MatrixXd x(60, 2), q(20, 2);
  // Integer coordinates produce many exact distance ties.
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = grid(gen);
  for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] = grid(gen);
  const Eigen::VectorXd y = testing::RandomMatrix(60, 1, gen).col(0);
  for (DistanceKind kind : {DistanceKind::kEuclidean, DistanceKind::kManhattan, DistanceKind::kChebyshev}) {
    for (int k : {1, 5, 7, 60}) {
      KnnConfig cfg = WithDistance(kind);
      cfg.k = k;
      const Eigen::VectorXd pred = PredictKnn(FitKnn(x, y, cfg), q);
      for (Eigen::Index r = 0; r < q.rows(); ++r) {
        std::vector<std::pair<double, Eigen::Index>> d;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
          const Eigen::VectorXd diff = (x.row(i) - q.row(r)).transpose();
          double v = 0.0;
          if (kind == DistanceKind::kEuclidean) v = diff.norm();
          if (kind == DistanceKind::kManhattan) v = diff.cwiseAbs().sum();
          if (kind == DistanceKind::kChebyshev) v = diff.cwiseAbs().maxCoeff();
          d.emplace_back(v, i);
        }
        std::sort(d.begin(), d.end());
        double sum = 0.0;
        for (int j = 0; j < k; ++j) sum += y(d[static_cast<size_t>(j)].second);
        EXPECT_NEAR(pred(r), sum / k, 1e-12);
      }
    }
  }
}

TEST(KnnTest, DuplicatedTrainingRowsNoEffectWhenKEqualsOne) {
  std::mt19937_64 gen(3);
  const Eigen::MatrixXd x = testing::RandomMatrix(10, 2, gen);
  const Eigen::VectorXd y = testing::RandomMatrix(10, 1, gen).col(0);
  Eigen::MatrixXd x2(20, 2);
  x2 << x, x;
  Eigen::VectorXd y2(20);
  y2 << y, y;
  KnnConfig cfg;
  cfg.k = 1;
  const Eigen::VectorXd pa = PredictKnn(FitKnn(x, y, cfg), x);
  const Eigen::VectorXd pb = PredictKnn(FitKnn(x2, y2, cfg), x);
  EXPECT_EQ(pa, pb);
  EXPECT_EQ(pa, y);
}

TEST(KnnTest, ExactMatchAndHull) {
  std::mt19937_64 gen(4);
  const Eigen::MatrixXd x = testing::RandomMatrix(30, 3, gen);
  const Eigen::VectorXd y = testing::RandomMatrix(30, 1, gen).col(0);
  KnnConfig cfg;
  cfg.k = 1;
  EXPECT_EQ(PredictKnn(FitKnn(x, y, cfg), x.row(12)), y.segment(12, 1));
  cfg.k = 4;
  const Eigen::VectorXd p = PredictKnn(FitKnn(x, y, cfg), 5.0 * testing::RandomMatrix(40, 3, gen));
  EXPECT_GE(p.minCoeff(), y.minCoeff());
  EXPECT_LE(p.maxCoeff(), y.maxCoeff());
}

TEST(KnnTest, RowPermutationInvariantForDistinctDistances) {
  std::mt19937_64 gen(5);
  const Eigen::MatrixXd x = testing::RandomMatrix(50, 3, gen);
  const Eigen::VectorXd y = testing::RandomMatrix(50, 1, gen).col(0);
  std::vector<int> order(50);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), gen);
  const Eigen::MatrixXd xp = x(order, Eigen::all);
  const Eigen::VectorXd yp = y(order);
  const Eigen::MatrixXd q = testing::RandomMatrix(20, 3, gen);
  KnnConfig cfg;
  cfg.k = 5;
  const Eigen::VectorXd a = PredictKnn(FitKnn(x, y, cfg), q), b = PredictKnn(FitKnn(xp, yp, cfg), q);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(KnnTest, DuplicatedRowsDoubleTheNeighbourhood) {
  std::mt19937_64 gen(6);
  const Eigen::MatrixXd x = testing::RandomMatrix(25, 2, gen);
  const Eigen::VectorXd y = testing::RandomMatrix(25, 1, gen).col(0);
  Eigen::MatrixXd x2(50, 2);
  x2 << x, x;
  Eigen::VectorXd y2(50);
  y2 << y, y;
  const Eigen::MatrixXd q = testing::RandomMatrix(15, 2, gen);
  for (int m : {1, 3, 6}) {
    KnnConfig a, b;
    a.k = m;
    b.k = 2 * m;
    EXPECT_LT((PredictKnn(FitKnn(x, y, a), q) - PredictKnn(FitKnn(x2, y2, b), q)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(KnnConfigTest, RoundTripAndValidation) {
  KnnConfig cfg = WithDistance(DistanceKind::kMinkowski, 3.0);
  cfg.k = 5;
  EXPECT_EQ(KnnConfig::FromJson(cfg.ToJson()).ToJson(), cfg.ToJson());
  cfg.k = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

}  // namespace
}  // namespace housebench
