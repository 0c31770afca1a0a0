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
#include <numeric>
#include <sstream>

#include "housebench/csv.h"
#include "housebench/errors.h"
#include "housebench/random.h"

namespace housebench {

using nlohmann::json;

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

std::vector<DenseLayer> ZerosLike(const std::vector<DenseLayer>& layers) {
  std::vector<DenseLayer> out;
  for (const DenseLayer& l : layers) {
    out.push_back({Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()),
                   Eigen::VectorXd::Zero(l.bias.size())});
  }
  return out;
}

double WeightPenalty(const NetworkState& state) {
  double sum = 0.0;
  for (const DenseLayer& l : state.layers) sum += l.weights.squaredNorm();
  return state.config.l2_lambda * sum;
}

void CheckInput(const NetworkState& state, const Eigen::MatrixXd& x) {
  if (x.cols() != state.input_dim()) {
    throw ModelError("network expects " + std::to_string(state.input_dim()) +
                     " input columns, got " + std::to_string(x.cols()));
  }
}

// Pre-activations of every layer; the last entry is the (n x 1) output.
std::vector<Eigen::MatrixXd> PreActivations(const NetworkState& state,
                                            const Eigen::MatrixXd& x) {
  std::vector<Eigen::MatrixXd> z;
  z.reserve(state.layers.size());
  Eigen::MatrixXd a = x;
  for (size_t l = 0; l < state.layers.size(); ++l) {
    const DenseLayer& layer = state.layers[l];
    Eigen::MatrixXd zl = a * layer.weights.transpose();
    zl.rowwise() += layer.bias.transpose();
    if (l + 1 < state.layers.size()) a = zl.cwiseMax(0.0);
    z.push_back(std::move(zl));
  }
  return z;
}

// Loss and gradient in one pass.
double LossAndGradients(const NetworkState& state, const Eigen::MatrixXd& x,
                        const Eigen::VectorXd& y, Gradients* grads) {
  CheckInput(state, x);
  if (y.size() != x.rows()) throw ModelError("network inputs and targets differ in length");
  const std::vector<Eigen::MatrixXd> z = PreActivations(state, x);
  const double n = static_cast<double>(x.rows());
  const Eigen::VectorXd residual = z.back().col(0) - y;
  const double loss = residual.squaredNorm() / n + WeightPenalty(state);
  if (grads == nullptr) return loss;

  grads->resize(state.layers.size());
  Eigen::MatrixXd delta = (2.0 / n) * residual;
  for (size_t l = state.layers.size(); l-- > 0;) {
    const DenseLayer& layer = state.layers[l];
    DenseLayer& g = (*grads)[l];
    if (l == 0) {
      g.weights = delta.transpose() * x;
    } else {
      g.weights = delta.transpose() * z[l - 1].cwiseMax(0.0);
    }
    g.weights += 2.0 * state.config.l2_lambda * layer.weights;
    g.bias = delta.colwise().sum().transpose();
    if (l > 0) {
      Eigen::MatrixXd upstream = delta * layer.weights;
      delta = upstream.cwiseProduct((z[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return loss;
}

json MatrixToJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<size_t>(c)] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd MatrixFromJson(const json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    const auto row = j[r].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ModelError("ragged weight matrix in network artifact");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), c) = row[static_cast<size_t>(c)];
  }
  return m;
}

}  // namespace

void NetworkConfig::Validate() const {
  if (hidden_layers < 0) throw ConfigError("hidden_layers must be non-negative");
  if (units_per_layer < 1) throw ConfigError("units_per_layer must be at least 1");
  if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  if (!(l2_lambda >= 0)) throw ConfigError("l2_lambda must be non-negative");
  if (max_epochs < 0) throw ConfigError("max_epochs must be non-negative");
  if (batch_size < 0) throw ConfigError("batch_size must be non-negative (0 = full)");
  if (early_stop_patience < 1) throw ConfigError("early_stop_patience must be at least 1");
}

json NetworkConfig::ToJson() const {
  return {{"hidden_layers", hidden_layers},
          {"units_per_layer", units_per_layer},
          {"l2_lambda", l2_lambda},
          {"learning_rate", learning_rate},
          {"max_epochs", max_epochs},
          {"batch_size", batch_size},
          {"early_stop_patience", early_stop_patience},
          {"seed", seed}};
}

NetworkConfig NetworkConfig::FromJson(const json& doc) {
  NetworkConfig cfg;
  cfg.hidden_layers = doc.value("hidden_layers", cfg.hidden_layers);
  cfg.units_per_layer = doc.value("units_per_layer", cfg.units_per_layer);
  cfg.l2_lambda = doc.value("l2_lambda", cfg.l2_lambda);
  cfg.learning_rate = doc.value("learning_rate", cfg.learning_rate);
  cfg.max_epochs = doc.value("max_epochs", cfg.max_epochs);
  cfg.batch_size = doc.value("batch_size", cfg.batch_size);
  cfg.early_stop_patience = doc.value("early_stop_patience", cfg.early_stop_patience);
  cfg.seed = doc.value("seed", cfg.seed);
  return cfg;
}

std::string TrainingHistory::ToCsv() const {
  std::ostringstream out;
  out << "epoch,train_loss,validation_mse\n";
  for (size_t e = 0; e < train_loss.size(); ++e) {
    out << e + 1 << ',' << FormatDouble(train_loss[e]) << ','
        << FormatDouble(validation_loss[e]) << '\n';
  }
  return out.str();
}

NetworkState InitNetwork(const NetworkConfig& cfg, Eigen::Index input_dim) {
  cfg.Validate();
  if (input_dim < 1) throw ModelError("network input dimension must be at least 1");
  NetworkState state;
  state.config = cfg;
  Rng rng = Rng::Stream(cfg.seed, 0);
  Eigen::Index fan_in = input_dim;
  for (int l = 0; l <= cfg.hidden_layers; ++l) {
    const Eigen::Index fan_out = l == cfg.hidden_layers ? 1 : cfg.units_per_layer;
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    DenseLayer layer;
    layer.weights.resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < fan_out; ++r) {
      for (Eigen::Index c = 0; c < fan_in; ++c) layer.weights(r, c) = rng.Uniform(-bound, bound);
    }
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    state.layers.push_back(std::move(layer));
    fan_in = fan_out;
  }
  state.first_moment = ZerosLike(state.layers);
  state.second_moment = ZerosLike(state.layers);
  return state;
}

Eigen::VectorXd Forward(const NetworkState& state, const Eigen::MatrixXd& x) {
  CheckInput(state, x);
  return PreActivations(state, x).back().col(0);
}

double Loss(const NetworkState& state, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return LossAndGradients(state, x, y, nullptr);
}

Gradients Backward(const NetworkState& state, const Eigen::MatrixXd& x,
                   const Eigen::VectorXd& y) {
  Gradients grads;
  LossAndGradients(state, x, y, &grads);
  return grads;
}

void AdamStep(NetworkState& state, const Gradients& gradients) {
  if (gradients.size() != state.layers.size()) {
    throw ModelError("gradient layer count does not match the network");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(kBeta1, t);
  const double correction2 = 1.0 - std::pow(kBeta2, t);
  const double lr = state.config.learning_rate;
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    param.array() -= lr * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + kAdamEpsilon);
  };
  for (size_t l = 0; l < state.layers.size(); ++l) {
    update(state.layers[l].weights, state.first_moment[l].weights,
           state.second_moment[l].weights, gradients[l].weights);
    update(state.layers[l].bias, state.first_moment[l].bias, state.second_moment[l].bias,
           gradients[l].bias);
  }
}

bool EarlyStopping::Observe(int epoch, double loss) {
  improved_ = best_epoch_ < 0 || loss < best_loss_;
  if (improved_) {
    best_epoch_ = epoch;
    best_loss_ = loss;
    return false;
  }
  return epoch - best_epoch_ >= patience_;
}

NetworkState TrainNetwork(const NetworkConfig& cfg, const DesignMatrix& train,
                          const DesignMatrix& validation) {
  NetworkState state = InitNetwork(cfg, train.num_cols());
  if (cfg.max_epochs == 0) return state;
  if (validation.num_cols() != train.num_cols()) {
    throw ModelError("training and validation designs have different columns");
  }
  if (validation.num_rows() == 0) throw ModelError("early stopping needs validation rows");

  auto validation_mse = [&] {
    return (Forward(state, validation.x) - validation.y).squaredNorm() /
           static_cast<double>(validation.num_rows());
  };
  auto check_finite = [&](double value, int epoch) {
    if (!std::isfinite(value)) {
      throw ModelError("non-finite loss at epoch " + std::to_string(epoch) +
                       " (learning rate " + FormatDouble(cfg.learning_rate) +
                       "); lower the learning rate or check input scaling");
    }
  };

  EarlyStopping stopper(cfg.early_stop_patience);
  stopper.Observe(0, validation_mse());
  std::vector<DenseLayer> best = state.layers;
  Rng batch_rng = Rng::Stream(cfg.seed, 1);
  const Eigen::Index n = train.num_rows();
  const bool full_batch = cfg.batch_size == 0 || cfg.batch_size >= n;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    double train_loss = 0.0;
    Gradients grads;
    if (full_batch) {
      train_loss = LossAndGradients(state, train.x, train.y, &grads);
      check_finite(train_loss, epoch);
      AdamStep(state, grads);
    } else {
      const std::vector<size_t> order = RandomPermutation(static_cast<size_t>(n), batch_rng);
      for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch_size)) {
        const size_t stop = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
        std::vector<Eigen::Index> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                       order.begin() + static_cast<std::ptrdiff_t>(stop));
        const Eigen::MatrixXd xb = train.x(rows, Eigen::all);
        const Eigen::VectorXd yb = train.y(rows);
        const double batch_loss = LossAndGradients(state, xb, yb, &grads);
        check_finite(batch_loss, epoch);
        train_loss += batch_loss * static_cast<double>(stop - start) / static_cast<double>(n);
        AdamStep(state, grads);
      }
    }
    const double val = validation_mse();
    check_finite(val, epoch);
    state.history.train_loss.push_back(train_loss);
    state.history.validation_loss.push_back(val);
    state.history.epochs_run = epoch;
    const bool stop = stopper.Observe(epoch, val);
    if (stopper.improved()) best = state.layers;
    if (stop) break;
  }
  state.history.best_epoch = stopper.best_epoch();
  state.layers = std::move(best);
  return state;
}

json NetworkState::ToJson() const {
  json layers_json = json::array();
  for (const DenseLayer& l : layers) {
    layers_json.push_back({{"weights", MatrixToJson(l.weights)},
                           {"bias", std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size())}});
  }
  return {{"version", 1},
          {"config", config.ToJson()},
          {"input_dim", layers.front().weights.cols()},
          {"layers", layers_json},
          {"best_epoch", history.best_epoch},
          {"epochs_run", history.epochs_run}};
}

NetworkState NetworkState::FromJson(const json& doc) {
  NetworkState state;
  try {
    if (doc.at("version").get<int>() != 1) throw ModelError("unsupported network artifact version");
    state.config = NetworkConfig::FromJson(doc.at("config"));
    Eigen::Index fan_in = doc.at("input_dim").get<Eigen::Index>();
    for (const json& lj : doc.at("layers")) {
      DenseLayer l;
      l.weights = MatrixFromJson(lj.at("weights"), fan_in);
      const auto bias = lj.at("bias").get<std::vector<double>>();
      l.bias = Eigen::Map<const Eigen::VectorXd>(bias.data(), static_cast<Eigen::Index>(bias.size()));
      if (l.bias.size() != l.weights.rows()) throw ModelError("bias size mismatch in network artifact");
      fan_in = l.weights.rows();
      state.layers.push_back(std::move(l));
    }
    state.history.best_epoch = doc.value("best_epoch", 0);
    state.history.epochs_run = doc.value("epochs_run", 0);
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed network artifact: ") + e.what());
  }
  if (state.layers.empty()) throw ModelError("network artifact has no layers");
  state.first_moment = ZerosLike(state.layers);
  state.second_moment = ZerosLike(state.layers);
  return state;
}

}  // namespace housebench
