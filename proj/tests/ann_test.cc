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


#include "housebench/ann.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "housebench/errors.h"
#include "test_util.h"

namespace housebench {
namespace {

NetworkState TinyNetwork() {
  NetworkConfig cfg;
  cfg.hidden_layers = 1;
  cfg.units_per_layer = 1;
  cfg.l2_lambda = 0.0;
  NetworkState s = InitNetwork(cfg, 2);
  s.layers[0].weights << 1.0, -1.0;
  s.layers[0].bias << 0.5;
  s.layers[1].weights << 2.0;
  s.layers[1].bias << 0.1;
  return s;
}

TEST(AnnTest, ForwardByHand) {
  const NetworkState s = TinyNetwork();
  Eigen::MatrixXd x(2, 2);
  x << 1, 2, 3, 1;
  const Eigen::VectorXd out = Forward(s, x);
  EXPECT_NEAR(out(0), 0.1, 1e-15);  // ReLU clips 1 - 2 + 0.5
  EXPECT_NEAR(out(1), 5.1, 1e-15);  // 2 * 2.5 + 0.1
}

TEST(AnnTest, LossIncludesWeightPenaltyOnly) {
  NetworkState s = TinyNetwork();
  s.config.l2_lambda = 0.5;
  Eigen::MatrixXd x(2, 2);
  x << 1, 2, 3, 1;
  Eigen::VectorXd y(2);
  y << 0.0, 5.0;
  // MSE = (0.01 + 0.01) / 2; weights^2 = 1 + 1 + 4.
  EXPECT_NEAR(Loss(s, x, y), 0.01 + 0.5 * 6.0, 1e-12);
}

TEST(AnnTest, InitBoundsAndDeterminism) {
  NetworkConfig cfg;
  cfg.units_per_layer = 16;
  cfg.seed = 9;
  const NetworkState a = InitNetwork(cfg, 10);
  const NetworkState b = InitNetwork(cfg, 10);
  ASSERT_EQ(a.layers.size(), 3u);
  for (size_t l = 0; l < a.layers.size(); ++l) {
    const auto& w = a.layers[l].weights;
    const double bound = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    EXPECT_LE(w.cwiseAbs().maxCoeff(), bound);
    EXPECT_TRUE(a.layers[l].bias.isZero());
    EXPECT_EQ(w, b.layers[l].weights);
  }
  EXPECT_EQ(a.layers[0].weights.cols(), 10);
  EXPECT_EQ(a.layers[2].weights.rows(), 1);
  cfg.seed = 10;
  EXPECT_NE(InitNetwork(cfg, 10).layers[0].weights, a.layers[0].weights);
}

TEST(AnnTest, GradientMatchesCentralDifferences) {
  NetworkConfig cfg;
  cfg.units_per_layer = 5;
  cfg.l2_lambda = 0.01;
  cfg.seed = 3;
  NetworkState s = InitNetwork(cfg, 3);
  std::mt19937_64 gen(5);
  for (DenseLayer& layer : s.layers) layer.bias = testing::RandomMatrix(layer.bias.size(), 1, gen).col(0) * 0.1;
  const Eigen::MatrixXd x = testing::RandomMatrix(12, 3, gen);
  const Eigen::VectorXd y = testing::RandomMatrix(12, 1, gen).col(0);
  const Gradients g = Backward(s, x, y);
  const double h = 1e-6;
  for (size_t l = 0; l < s.layers.size(); ++l) {
    for (Eigen::Index i = 0; i < s.layers[l].weights.size(); ++i) {
      NetworkState plus = s, minus = s;
      plus.layers[l].weights.data()[i] += h;
      minus.layers[l].weights.data()[i] -= h;
      const double numeric = (Loss(plus, x, y) - Loss(minus, x, y)) / (2 * h);
      EXPECT_NEAR(g[l].weights.data()[i], numeric, 1e-6) << l << " " << i;
    }
    for (Eigen::Index i = 0; i < s.layers[l].bias.size(); ++i) {
      NetworkState plus = s, minus = s;
      plus.layers[l].bias(i) += h;
      minus.layers[l].bias(i) -= h;
      const double numeric = (Loss(plus, x, y) - Loss(minus, x, y)) / (2 * h);
      EXPECT_NEAR(g[l].bias(i), numeric, 1e-6) << l << " " << i;
    }
  }
}

TEST(AnnTest, ZeroWeightsGiveZeroHiddenGradient) {
  NetworkConfig cfg;
  cfg.units_per_layer = 4;
  cfg.l2_lambda = 0.0;
  NetworkState s = InitNetwork(cfg, 3);
  for (DenseLayer& layer : s.layers) layer.weights.setZero();
  std::mt19937_64 gen(1);
  const Gradients g = Backward(s, testing::RandomMatrix(6, 3, gen), testing::RandomMatrix(6, 1, gen).col(0));
  EXPECT_TRUE(g[0].weights.isZero());
  EXPECT_TRUE(g[1].weights.isZero());
}

TEST(AnnTest, LinearUnitGradientMatchesLeastSquares) {
  NetworkConfig cfg;
  cfg.hidden_layers = 0;
  cfg.l2_lambda = 0.0;
  cfg.seed = 2;
  const NetworkState s = InitNetwork(cfg, 3);
  std::mt19937_64 gen(2);
  const Eigen::MatrixXd x = testing::RandomMatrix(10, 3, gen);
  const Eigen::VectorXd y = testing::RandomMatrix(10, 1, gen).col(0);
  const Eigen::VectorXd resid = Forward(s, x) - y;
  const Gradients g = Backward(s, x, y);
  ASSERT_EQ(g.size(), 1u);
  const Eigen::VectorXd expected = 2.0 / 10.0 * x.transpose() * resid;
  EXPECT_LT((g[0].weights.row(0).transpose() - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(g[0].bias(0), 2.0 / 10.0 * resid.sum(), 1e-12);
}

TEST(AnnTest, AdamMatchesScalarRecurrence) {
  NetworkState s = TinyNetwork();
  s.config.learning_rate = 0.01;
  const double start = s.layers[1].weights(0, 0);
  const std::vector<double> grads = {0.5, -2.0, 0.25};
  double m = 0.0, v = 0.0, w = start;
  for (size_t t = 1; t <= grads.size(); ++t) {
    Gradients g;
    for (const DenseLayer& layer : s.layers) {
      g.push_back({Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                   Eigen::VectorXd::Zero(layer.bias.size())});
    }
    g[1].weights(0, 0) = grads[t - 1];
    AdamStep(s, g);
    m = 0.9 * m + 0.1 * grads[t - 1];
    v = 0.999 * v + 0.001 * grads[t - 1] * grads[t - 1];
    const double mh = m / (1.0 - std::pow(0.9, t));
    const double vh = v / (1.0 - std::pow(0.999, t));
    w -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
    EXPECT_NEAR(s.layers[1].weights(0, 0), w, 1e-14);
  }
  EXPECT_EQ(s.step, 3);
  EXPECT_EQ(s.layers[0].weights(0, 0), 1.0);  // zero gradient, zero moments
}

TEST(EarlyStoppingTest, StopsAfterPatienceWithoutStrictImprovement) {
  EarlyStopping es(2);
  EXPECT_FALSE(es.Observe(0, 5.0));
  EXPECT_FALSE(es.Observe(1, 4.0));
  EXPECT_TRUE(es.improved());
  EXPECT_FALSE(es.Observe(2, 4.0));
  EXPECT_FALSE(es.improved());
  EXPECT_TRUE(es.Observe(3, 4.0));
  EXPECT_EQ(es.best_epoch(), 1);
  EXPECT_EQ(es.best_loss(), 4.0);
}

DesignMatrix LinearDesign(int n, uint64_t seed) {
  std::mt19937_64 gen(seed);
  DesignMatrix dm;
  dm.x = testing::RandomMatrix(n, 3, gen);
  dm.y = dm.x * Eigen::Vector3d(1.0, -0.5, 0.25);
  return dm;
}

NetworkConfig SmallConfig() {
  NetworkConfig cfg;
  cfg.units_per_layer = 8;
  cfg.max_epochs = 300;
  cfg.early_stop_patience = 20;
  cfg.learning_rate = 0.01;
  cfg.seed = 4;
  return cfg;
}

TEST(TrainNetworkTest, ZeroEpochsReturnsInitialState) {
  NetworkConfig cfg = SmallConfig();
  cfg.max_epochs = 0;
  const NetworkState s = TrainNetwork(cfg, LinearDesign(20, 1), LinearDesign(10, 2));
  EXPECT_EQ(s.layers[0].weights, InitNetwork(cfg, 3).layers[0].weights);
  EXPECT_EQ(s.history.epochs_run, 0);
}

TEST(TrainNetworkTest, LearnsAndRestoresBestEpoch) {
  const DesignMatrix train = LinearDesign(120, 1), val = LinearDesign(40, 2);
  const NetworkState s = TrainNetwork(SmallConfig(), train, val);
  const TrainingHistory& h = s.history;
  ASSERT_GT(h.epochs_run, 0);
  ASSERT_EQ(h.validation_loss.size(), static_cast<size_t>(h.epochs_run));
  ASSERT_GT(h.best_epoch, 0);
  const double best = h.validation_loss[static_cast<size_t>(h.best_epoch - 1)];
  for (double v : h.validation_loss) EXPECT_GE(v, best);
  const double mse = (Forward(s, val.x) - val.y).squaredNorm() / 40.0;
  EXPECT_NEAR(mse, best, 1e-12);
  EXPECT_LT(best, 0.1 * val.y.squaredNorm() / 40.0);
  EXPECT_LT(h.train_loss.back(), h.train_loss.front());
}

TEST(TrainNetworkTest, DeterministicForSeed) {
  const DesignMatrix train = LinearDesign(60, 1), val = LinearDesign(20, 2);
  NetworkConfig cfg = SmallConfig();
  cfg.batch_size = 16;
  const NetworkState a = TrainNetwork(cfg, train, val);
  const NetworkState b = TrainNetwork(cfg, train, val);
  EXPECT_EQ(a.layers[1].weights, b.layers[1].weights);
  EXPECT_EQ(a.history.validation_loss, b.history.validation_loss);
}

TEST(TrainNetworkTest, PatienceBoundsEpochsPastBest) {
  const DesignMatrix train = LinearDesign(60, 1), val = LinearDesign(20, 2);
  NetworkConfig cfg = SmallConfig();
  cfg.max_epochs = 100000;
  cfg.learning_rate = 0.05;
  const NetworkState s = TrainNetwork(cfg, train, val);
  EXPECT_LT(s.history.epochs_run, 100000);
  EXPECT_EQ(s.history.epochs_run - s.history.best_epoch, cfg.early_stop_patience);
}

TEST(TrainNetworkTest, FitsOneFeatureLinearData) {
  std::mt19937_64 gen(6);
  DesignMatrix train, val;
  train.x = testing::RandomMatrix(100, 1, gen);
  train.y = 1.5 * train.x.col(0).array() + 0.5;
  val.x = testing::RandomMatrix(30, 1, gen);
  val.y = 1.5 * val.x.col(0).array() + 0.5;
  NetworkConfig cfg = SmallConfig();
  cfg.max_epochs = 2000;
  cfg.early_stop_patience = 2000;
  cfg.l2_lambda = 0.0;
  const NetworkState s = TrainNetwork(cfg, train, val);
  EXPECT_LT(std::sqrt((Forward(s, train.x) - train.y).squaredNorm() / 100.0), 0.05);
}

TEST(TrainNetworkTest, SmallStepsNeverIncreaseFullBatchLoss) {
  NetworkConfig cfg = SmallConfig();
  cfg.l2_lambda = 0.0;
  cfg.learning_rate = 1e-4;
  cfg.max_epochs = 200;
  cfg.early_stop_patience = 1000;
  const NetworkState s = TrainNetwork(cfg, LinearDesign(40, 1), LinearDesign(10, 2));
  for (size_t i = 1; i < s.history.train_loss.size(); ++i) {
    EXPECT_LE(s.history.train_loss[i], s.history.train_loss[i - 1] * (1.0 + 1e-12));
  }
}

TEST(TrainNetworkTest, FullBatchIgnoresRowOrder) {
  const DesignMatrix train = LinearDesign(40, 1), val = LinearDesign(10, 2);
  DesignMatrix reversed = train;
  reversed.x = train.x.colwise().reverse();
  reversed.y = train.y.reverse();
  NetworkConfig cfg = SmallConfig();
  cfg.max_epochs = 50;
  const NetworkState a = TrainNetwork(cfg, train, val);
  const NetworkState b = TrainNetwork(cfg, reversed, val);
  EXPECT_LT((Forward(a, val.x) - Forward(b, val.x)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(TrainNetworkTest, DivergenceRaisesModelError) {
  NetworkConfig cfg = SmallConfig();
  cfg.learning_rate = 1e200;
  DesignMatrix train = LinearDesign(30, 1);
  train.y *= 1e150;
  try {
    TrainNetwork(cfg, train, LinearDesign(10, 2));
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("learning rate"), std::string::npos);
  }
}

TEST(TrainNetworkTest, StateJsonRoundTrip) {
  const NetworkState s = TrainNetwork(SmallConfig(), LinearDesign(30, 1), LinearDesign(10, 2));
  const NetworkState back = NetworkState::FromJson(s.ToJson());
  const DesignMatrix probe = LinearDesign(5, 3);
  EXPECT_EQ(Forward(back, probe.x), Forward(s, probe.x));
}

TEST(NetworkConfigTest, ValidatesAndRoundTrips) {
  NetworkConfig cfg;
  cfg.units_per_layer = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = SmallConfig();
  const NetworkConfig back = NetworkConfig::FromJson(cfg.ToJson());
  EXPECT_EQ(back.ToJson(), cfg.ToJson());
}

}  // namespace
}  // namespace housebench
