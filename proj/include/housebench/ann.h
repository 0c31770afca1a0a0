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

#ifndef HOUSEBENCH_ANN_H_
#define HOUSEBENCH_ANN_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "housebench/preprocess.h"
#include "json.hpp"

namespace housebench {

// Two dense ReLU layers of 192 units, L2 0.001, Adam at 0.001, MSE loss.
struct NetworkConfig {
  int hidden_layers = 2;
  int units_per_layer = 192;
  double l2_lambda = 0.001;
  double learning_rate = 0.001;
  int max_epochs = 100000;
  // 0 means full batch.
  int batch_size = 0;
  int early_stop_patience = 100;
  uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static NetworkConfig FromJson(const nlohmann::json& doc);
};

// One affine layer; weights are (fan_out x fan_in).
struct DenseLayer {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
};

using Gradients = std::vector<DenseLayer>;

struct TrainingHistory {
  // Regularized training loss of each epoch (before that epoch's update when
  // full batch) and unregularized validation MSE after the update.
  std::vector<double> train_loss;
  std::vector<double> validation_loss;
  // 0 is the initial state.
  int best_epoch = 0;
  int epochs_run = 0;

  std::string ToCsv() const;
};

struct NetworkState {
  NetworkConfig config;
  std::vector<DenseLayer> layers;
  std::vector<DenseLayer> first_moment;
  std::vector<DenseLayer> second_moment;
  int64_t step = 0;
  TrainingHistory history;

  Eigen::Index input_dim() const { return layers.front().weights.cols(); }
  nlohmann::json ToJson() const;
  static NetworkState FromJson(const nlohmann::json& doc);
};

// Glorot-uniform weights with bound sqrt(6 / (fan_in + fan_out)), zero
// biases, zero Adam moments.
NetworkState InitNetwork(const NetworkConfig& cfg, Eigen::Index input_dim);

Eigen::VectorXd Forward(const NetworkState& state, const Eigen::MatrixXd& x);

// Mean squared error plus l2_lambda times the sum of squared weights
// (biases are not penalized).
double Loss(const NetworkState& state, const Eigen::MatrixXd& x,
            const Eigen::VectorXd& y);

// Exact gradient of Loss. The ReLU subgradient at 0 is 0.
Gradients Backward(const NetworkState& state, const Eigen::MatrixXd& x,
                   const Eigen::VectorXd& y);

// Adam with beta1 = 0.9, beta2 = 0.999, eps = 1e-8 and bias correction.
void AdamStep(NetworkState& state, const Gradients& gradients);

// Tracks the best validation loss and signals a stop after `patience`
// epochs without strict improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  // Returns true when training should stop after observing `loss` at
  // `epoch`.
  bool Observe(int epoch, double loss);
  bool improved() const { return improved_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  int patience_;
  int best_epoch_ = -1;
  double best_loss_ = 0.0;
  bool improved_ = false;
};

// Trains on `train`, restores the parameters of the epoch with the lowest
// validation MSE. Throws ModelError on a non-finite loss.
NetworkState TrainNetwork(const NetworkConfig& cfg, const DesignMatrix& train,
                          const DesignMatrix& validation);

}  // namespace housebench

#endif  // HOUSEBENCH_ANN_H_
