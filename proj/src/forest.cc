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


#include "housebench/forest.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "housebench/errors.h"

namespace housebench {

using nlohmann::json;

namespace {

struct NodeSplit {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Best split of `rows` over the candidate features.
NodeSplit FindSplit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                const std::vector<size_t>& rows, const std::vector<int>& features,
                int min_leaf) {
  const size_t n = rows.size();
  double total = 0.0;
  for (size_t r : rows) total += y(static_cast<Eigen::Index>(r));
  const double parent = total * total / static_cast<double>(n);

  NodeSplit best;
  std::vector<std::pair<double, double>> sorted(n);
  for (int f : features) {
    for (size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(rows[i]);
      sorted[i] = {x(r, f), y(r)};
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double left = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
      left += sorted[i].second;
      const size_t n_left = i + 1;
      const size_t n_right = n - n_left;
      if (sorted[i].first == sorted[i + 1].first) continue;
      if (n_left < static_cast<size_t>(min_leaf)) continue;
      if (n_right < static_cast<size_t>(min_leaf)) break;
      const double right = total - left;
      const double gain = left * left / static_cast<double>(n_left) +
                          right * right / static_cast<double>(n_right) - parent;
      if (gain > best.gain) {
        double threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
        if (!(threshold < sorted[i + 1].first)) threshold = sorted[i].first;
        best = {f, threshold, gain};
      }
    }
  }
  return best;
}

std::vector<int> DrawFeatures(int p, int mtry, Rng& rng) {
  std::vector<int> all(static_cast<size_t>(p));
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < mtry; ++i) {
    const size_t j = static_cast<size_t>(i) + rng.UniformIndex(static_cast<size_t>(p - i));
    std::swap(all[static_cast<size_t>(i)], all[j]);
  }
  all.resize(static_cast<size_t>(mtry));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

void ForestConfig::Validate() const {
  if (n_trees < 1) throw ConfigError("n_trees must be at least 1");
  if (mtry < 0) throw ConfigError("mtry must be non-negative (0 = round(p/3))");
  if (min_leaf < 1) throw ConfigError("min_leaf must be at least 1");
  if (num_threads < 1) throw ConfigError("num_threads must be at least 1");
}

int ForestConfig::ResolveMtry(Eigen::Index num_features) const {
  const int p = static_cast<int>(num_features);
  if (mtry == 0) return std::max(1, static_cast<int>(std::lround(p / 3.0)));
  if (mtry > p) {
    throw ConfigError("mtry " + std::to_string(mtry) + " exceeds the " + std::to_string(p) +
                      " design columns");
  }
  return mtry;
}

json ForestConfig::ToJson() const {
  return {{"n_trees", n_trees},     {"mtry", mtry},           {"max_depth", max_depth},
          {"min_leaf", min_leaf},   {"bootstrap", bootstrap}, {"seed", seed},
          {"num_threads", num_threads}};
}

ForestConfig ForestConfig::FromJson(const json& doc) {
  ForestConfig cfg;
  cfg.n_trees = doc.value("n_trees", cfg.n_trees);
  cfg.mtry = doc.value("mtry", cfg.mtry);
  cfg.max_depth = doc.value("max_depth", cfg.max_depth);
  cfg.min_leaf = doc.value("min_leaf", cfg.min_leaf);
  cfg.bootstrap = doc.value("bootstrap", cfg.bootstrap);
  cfg.seed = doc.value("seed", cfg.seed);
  cfg.num_threads = doc.value("num_threads", cfg.num_threads);
  return cfg;
}

double Tree::PredictRow(const Eigen::MatrixXd& x, Eigen::Index row) const {
  int node = 0;
  while (!nodes[static_cast<size_t>(node)].is_leaf()) {
    const TreeNode& n = nodes[static_cast<size_t>(node)];
    node = x(row, n.feature) <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<size_t>(node)].prediction;
}

Eigen::VectorXd Tree::Predict(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out(r) = PredictRow(x, r);
  return out;
}

int Tree::Depth() const {
  std::vector<int> depth(nodes.size(), 0);
  int deepest = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, depth[i]);
    if (!nodes[i].is_leaf()) {
      depth[static_cast<size_t>(nodes[i].left)] = depth[i] + 1;
      depth[static_cast<size_t>(nodes[i].right)] = depth[i] + 1;
    }
  }
  return deepest;
}

Tree FitTree(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
             std::span<const size_t> rows, const ForestConfig& cfg, Rng& rng) {
  cfg.Validate();
  if (x.cols() < 1) throw ModelError("tree needs at least one feature");
  if (rows.empty()) throw ModelError("tree needs at least one row");
  const int p = static_cast<int>(x.cols());
  const int mtry = cfg.ResolveMtry(p);

  struct Pending {
    int node;
    int depth;
    std::vector<size_t> rows;
  };
  Tree tree;
  tree.nodes.emplace_back();
  std::vector<Pending> stack;
  stack.push_back({0, 0, std::vector<size_t>(rows.begin(), rows.end())});
  // Depth-first, left child first, so node numbering is deterministic.
  while (!stack.empty()) {
    Pending job = std::move(stack.back());
    stack.pop_back();
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (size_t r : job.rows) {
      const double v = y(static_cast<Eigen::Index>(r));
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    TreeNode& node = tree.nodes[static_cast<size_t>(job.node)];
    node.count = static_cast<int>(job.rows.size());
    node.prediction = sum / static_cast<double>(job.rows.size());

    const bool depth_reached = cfg.max_depth >= 0 && job.depth >= cfg.max_depth;
    if (depth_reached || lo == hi ||
        job.rows.size() < 2 * static_cast<size_t>(cfg.min_leaf)) {
      continue;
    }
    const NodeSplit split = FindSplit(x, y, job.rows, DrawFeatures(p, mtry, rng), cfg.min_leaf);
    if (split.feature < 0) continue;

    std::vector<size_t> left;
    std::vector<size_t> right;
    for (size_t r : job.rows) {
      (x(static_cast<Eigen::Index>(r), split.feature) <= split.threshold ? left : right)
          .push_back(r);
    }
    const int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& parent = tree.nodes[static_cast<size_t>(job.node)];
    parent.feature = split.feature;
    parent.threshold = split.threshold;
    parent.left = left_id;
    parent.right = left_id + 1;
    stack.push_back({left_id + 1, job.depth + 1, std::move(right)});
    stack.push_back({left_id, job.depth + 1, std::move(left)});
  }
  return tree;
}

ForestFit FitForest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const ForestConfig& cfg) {
  cfg.Validate();
  if (x.rows() != y.size()) throw ModelError("forest inputs and targets differ in length");
  if (x.rows() < 1) throw ModelError("forest needs at least one row");
  cfg.ResolveMtry(x.cols());
  const size_t n = static_cast<size_t>(x.rows());
  const size_t n_trees = static_cast<size_t>(cfg.n_trees);

  ForestFit fit;
  fit.config = cfg;
  fit.num_features = x.cols();
  fit.trees.resize(n_trees);
  fit.samples.resize(n_trees);

  auto grow = [&](size_t t) {
    Rng rng = Rng::Stream(cfg.seed, t);
    std::vector<size_t> sample(n);
    if (cfg.bootstrap) {
      for (size_t& s : sample) s = rng.UniformIndex(n);
      std::sort(sample.begin(), sample.end());
    } else {
      std::iota(sample.begin(), sample.end(), 0);
    }
    fit.trees[t] = FitTree(x, y, sample, cfg, rng);
    fit.samples[t] = std::move(sample);
  };

  const size_t workers = std::min(n_trees, static_cast<size_t>(cfg.num_threads));
  if (workers <= 1) {
    for (size_t t = 0; t < n_trees; ++t) grow(t);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t t = next++; t < n_trees; t = next++) {
          try {
            grow(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  fit.oob_predictions = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  fit.oob_counts.assign(n, 0);
  if (cfg.bootstrap) {
    std::vector<char> in_bag(n);
    for (size_t t = 0; t < n_trees; ++t) {
      std::fill(in_bag.begin(), in_bag.end(), 0);
      for (size_t s : fit.samples[t]) in_bag[s] = 1;
      for (size_t r = 0; r < n; ++r) {
        if (in_bag[r]) continue;
        fit.oob_predictions(static_cast<Eigen::Index>(r)) +=
            fit.trees[t].PredictRow(x, static_cast<Eigen::Index>(r));
        ++fit.oob_counts[r];
      }
    }
  }
  for (size_t r = 0; r < n; ++r) {
    double& v = fit.oob_predictions(static_cast<Eigen::Index>(r));
    v = fit.oob_counts[r] > 0 ? v / fit.oob_counts[r] : std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

ForestFit FitForest(const DesignMatrix& dm, const ForestConfig& cfg) {
  return FitForest(dm.x, dm.y, cfg);
}

Eigen::VectorXd PredictForest(const ForestFit& fit, const Eigen::MatrixXd& x) {
  if (x.cols() != fit.num_features) {
    throw ModelError("forest expects " + std::to_string(fit.num_features) +
                     " columns, got " + std::to_string(x.cols()));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.rows());
  for (const Tree& tree : fit.trees) out += tree.Predict(x);
  return out / static_cast<double>(fit.trees.size());
}

double OobError(const ForestFit& fit, const Eigen::VectorXd& y) {
  if (!fit.config.bootstrap) throw ModelError("OOB error requires bootstrap sampling");
  if (y.size() != fit.oob_predictions.size()) {
    throw ModelError("OOB targets do not match the training rows");
  }
  double sse = 0.0;
  int used = 0;
  for (Eigen::Index r = 0; r < y.size(); ++r) {
    if (fit.oob_counts[static_cast<size_t>(r)] == 0) continue;
    const double e = fit.oob_predictions(r) - y(r);
    sse += e * e;
    ++used;
  }
  if (used == 0) throw ModelError("no row was left out of every tree's sample");
  return sse / used;
}

json ForestFit::ToJson() const {
  json trees_json = json::array();
  for (const Tree& tree : trees) {
    json nodes = json::array();
    for (const TreeNode& n : tree.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.prediction, n.count});
    }
    trees_json.push_back(std::move(nodes));
  }
  return {{"version", 1},
          {"config", config.ToJson()},
          {"num_features", num_features},
          {"trees", trees_json}};
}

ForestFit ForestFit::FromJson(const json& doc) {
  ForestFit fit;
  try {
    if (doc.at("version").get<int>() != 1) throw ModelError("unsupported forest artifact version");
    fit.config = ForestConfig::FromJson(doc.at("config"));
    fit.num_features = doc.at("num_features").get<Eigen::Index>();
    for (const json& tj : doc.at("trees")) {
      Tree tree;
      for (const json& nj : tj) {
        TreeNode n;
        n.feature = nj.at(0).get<int>();
        n.threshold = nj.at(1).get<double>();
        n.left = nj.at(2).get<int>();
        n.right = nj.at(3).get<int>();
        n.prediction = nj.at(4).get<double>();
        n.count = nj.at(5).get<int>();
        tree.nodes.push_back(n);
      }
      if (tree.nodes.empty()) throw ModelError("empty tree in forest artifact");
      fit.trees.push_back(std::move(tree));
    }
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed forest artifact: ") + e.what());
  }
  if (fit.trees.empty()) throw ModelError("forest artifact has no trees");
  return fit;
}

}  // namespace housebench
