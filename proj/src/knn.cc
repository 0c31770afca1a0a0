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
#include <utility>
#include <vector>

#include "housebench/errors.h"

namespace housebench {

using nlohmann::json;

std::string DistanceName(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kEuclidean: return "euclidean";
    case DistanceKind::kManhattan: return "manhattan";
    case DistanceKind::kMinkowski: return "minkowski";
    case DistanceKind::kChebyshev: return "chebyshev";
  }
  return "euclidean";
}

DistanceKind ParseDistance(const std::string& name) {
  for (DistanceKind kind : {DistanceKind::kEuclidean, DistanceKind::kManhattan,
                            DistanceKind::kMinkowski, DistanceKind::kChebyshev}) {
    if (DistanceName(kind) == name) return kind;
  }
  throw ConfigError("unknown distance '" + name + "'");
}

void KnnConfig::Validate() const {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (distance == DistanceKind::kMinkowski && !(p > 0)) {
    throw ConfigError("minkowski order p must be positive");
  }
}

json KnnConfig::ToJson() const {
  json doc = {{"k", k}, {"distance", DistanceName(distance)}};
  if (distance == DistanceKind::kMinkowski) doc["p"] = p;
  return doc;
}

KnnConfig KnnConfig::FromJson(const json& doc) {
  KnnConfig cfg;
  cfg.k = doc.value("k", cfg.k);
  if (doc.contains("distance")) cfg.distance = ParseDistance(doc.at("distance").get<std::string>());
  cfg.p = doc.value("p", cfg.p);
  return cfg;
}

double Distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                const Eigen::Ref<const Eigen::VectorXd>& b, const KnnConfig& cfg) {
  if (a.size() != b.size()) throw ModelError("distance between vectors of different length");
  const auto diff = (a - b).array().abs();
  switch (cfg.distance) {
    case DistanceKind::kEuclidean: return std::sqrt(diff.square().sum());
    case DistanceKind::kManhattan: return diff.sum();
    case DistanceKind::kChebyshev: return a.size() == 0 ? 0.0 : diff.maxCoeff();
    case DistanceKind::kMinkowski: return std::pow(diff.pow(cfg.p).sum(), 1.0 / cfg.p);
  }
  return 0.0;
}

KnnFit FitKnn(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KnnConfig& cfg) {
  cfg.Validate();
  if (x.rows() != y.size()) throw ModelError("kNN inputs and targets differ in length");
  if (cfg.k > x.rows()) {
    throw ModelError("k=" + std::to_string(cfg.k) + " exceeds the " + std::to_string(x.rows()) +
                     " training rows");
  }
  return KnnFit{cfg, x, y};
}

KnnFit FitKnn(const DesignMatrix& dm, const KnnConfig& cfg) { return FitKnn(dm.x, dm.y, cfg); }

Eigen::VectorXd PredictKnn(const KnnFit& fit, const Eigen::MatrixXd& x) {
  if (x.cols() != fit.x.cols()) {
    throw ModelError("kNN expects " + std::to_string(fit.x.cols()) + " columns, got " +
                     std::to_string(x.cols()));
  }
  const Eigen::Index n = fit.x.rows();
  const auto k = static_cast<size_t>(fit.config.k);
  if (fit.config.k > n) throw ModelError("k exceeds the number of training rows");

  // Row-major copies keep each row contiguous for the distance scan.
  const Eigen::MatrixXd train_t = fit.x.transpose();
  const Eigen::MatrixXd query_t = x.transpose();
  Eigen::VectorXd out(x.rows());
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<size_t>(n));
  for (Eigen::Index q = 0; q < x.rows(); ++q) {
    for (Eigen::Index i = 0; i < n; ++i) {
      dist[static_cast<size_t>(i)] = {Distance(train_t.col(i), query_t.col(q), fit.config), i};
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    std::sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k));
    double sum = 0.0;
    for (size_t j = 0; j < k; ++j) sum += fit.y(dist[j].second);
    out(q) = sum / static_cast<double>(k);
  }
  return out;
}

}  // namespace housebench
