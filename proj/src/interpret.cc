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


#include "housebench/interpret.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "housebench/csv.h"
#include "housebench/errors.h"
#include "housebench/random.h"

namespace housebench {

namespace {

double Mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& y) {
  if (pred.size() != y.size()) throw ModelError("prediction length does not match targets");
  return (pred - y).squaredNorm() / static_cast<double>(y.size());
}

std::vector<Eigen::Index> RequireColumns(const DesignMatrix& dm, const std::string& feature) {
  std::vector<Eigen::Index> cols = dm.FeatureColumns(feature);
  if (cols.empty()) throw ConfigError("feature '" + feature + "' is not in the design");
  return cols;
}

}  // namespace

double PermutationDelta(const PredictFn& predict, const DesignMatrix& dm,
                        const std::vector<Eigen::Index>& columns,
                        const std::vector<size_t>& permutation) {
  if (permutation.size() != static_cast<size_t>(dm.num_rows())) {
    throw ConfigError("permutation length does not match the design rows");
  }
  const double baseline = Mse(predict(dm.x), dm.y);
  Eigen::MatrixXd shuffled = dm.x;
  for (Eigen::Index c : columns) {
    for (size_t r = 0; r < permutation.size(); ++r) {
      shuffled(static_cast<Eigen::Index>(r), c) = dm.x(static_cast<Eigen::Index>(permutation[r]), c);
    }
  }
  return Mse(predict(shuffled), dm.y) - baseline;
}

std::vector<FeatureImportance> PermutationImportance(const PredictFn& predict,
                                                     const DesignMatrix& dm, int repeats,
                                                     uint64_t seed) {
  if (dm.num_rows() < 1) throw DataError("permutation importance needs evaluation rows");
  if (repeats < 1) throw ConfigError("importance repeats must be at least 1");
  const double baseline = Mse(predict(dm.x), dm.y);
  const std::vector<std::string> features = dm.Features();
  std::vector<FeatureImportance> table;
  for (size_t f = 0; f < features.size(); ++f) {
    const std::vector<Eigen::Index> cols = dm.FeatureColumns(features[f]);
    Rng rng = Rng::Stream(seed, f);
    std::vector<double> deltas;
    Eigen::MatrixXd shuffled = dm.x;
    for (int rep = 0; rep < repeats; ++rep) {
      const std::vector<size_t> perm = RandomPermutation(static_cast<size_t>(dm.num_rows()), rng);
      for (Eigen::Index c : cols) {
        for (size_t r = 0; r < perm.size(); ++r) {
          shuffled(static_cast<Eigen::Index>(r), c) = dm.x(static_cast<Eigen::Index>(perm[r]), c);
        }
      }
      deltas.push_back(Mse(predict(shuffled), dm.y) - baseline);
    }
    for (Eigen::Index c : cols) shuffled.col(c) = dm.x.col(c);
    const double mean = std::accumulate(deltas.begin(), deltas.end(), 0.0) / repeats;
    double ss = 0.0;
    for (double d : deltas) ss += (d - mean) * (d - mean);
    table.push_back({features[f], mean, repeats > 1 ? std::sqrt(ss / (repeats - 1)) : 0.0});
  }
  std::stable_sort(table.begin(), table.end(),
                   [](const auto& a, const auto& b) { return a.importance > b.importance; });
  return table;
}

std::vector<FeatureImportance> OobPermutationImportance(const ForestFit& fit,
                                                        const DesignMatrix& train, int repeats,
                                                        uint64_t seed) {
  if (repeats < 1) throw ConfigError("importance repeats must be at least 1");
  if (train.x.cols() != fit.num_features || fit.samples.size() != fit.trees.size()) {
    throw ModelError("OOB importance needs the forest's own training design");
  }
  const Eigen::Index n = train.num_rows();
  // OOB row lists and baseline squared errors, per tree.
  std::vector<std::vector<Eigen::Index>> oob;
  std::vector<const Tree*> trees;
  std::vector<double> base_mse;
  for (size_t t = 0; t < fit.trees.size(); ++t) {
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (size_t r : fit.samples[t]) {
      if (r >= static_cast<size_t>(n)) throw ModelError("forest sample index outside the design");
      seen[r] = 1;
    }
    std::vector<Eigen::Index> rows;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (!seen[static_cast<size_t>(r)]) rows.push_back(r);
    }
    if (rows.size() < 2) continue;
    double sse = 0.0;
    for (Eigen::Index r : rows) {
      const double e = fit.trees[t].PredictRow(train.x, r) - train.y(r);
      sse += e * e;
    }
    base_mse.push_back(sse / static_cast<double>(rows.size()));
    oob.push_back(std::move(rows));
    trees.push_back(&fit.trees[t]);
  }
  if (trees.empty()) throw ModelError("no tree has out-of-bag rows; enable bootstrap");

  const std::vector<std::string> features = train.Features();
  std::vector<FeatureImportance> table;
  Eigen::MatrixXd shuffled = train.x;
  for (size_t f = 0; f < features.size(); ++f) {
    const std::vector<Eigen::Index> cols = train.FeatureColumns(features[f]);
    Rng rng = Rng::Stream(seed, f);
    std::vector<double> deltas;
    for (int rep = 0; rep < repeats; ++rep) {
      double total = 0.0;
      for (size_t t = 0; t < trees.size(); ++t) {
        const std::vector<Eigen::Index>& rows = oob[t];
        const std::vector<size_t> perm = RandomPermutation(rows.size(), rng);
        for (Eigen::Index c : cols) {
          for (size_t i = 0; i < rows.size(); ++i) shuffled(rows[i], c) = train.x(rows[perm[i]], c);
        }
        double sse = 0.0;
        for (Eigen::Index r : rows) {
          const double e = trees[t]->PredictRow(shuffled, r) - train.y(r);
          sse += e * e;
        }
        total += sse / static_cast<double>(rows.size()) - base_mse[t];
        for (Eigen::Index c : cols) {
          for (Eigen::Index r : rows) shuffled(r, c) = train.x(r, c);
        }
      }
      deltas.push_back(total / static_cast<double>(trees.size()));
    }
    const double mean = std::accumulate(deltas.begin(), deltas.end(), 0.0) / repeats;
    double ss = 0.0;
    for (double d : deltas) ss += (d - mean) * (d - mean);
    table.push_back({features[f], mean, repeats > 1 ? std::sqrt(ss / (repeats - 1)) : 0.0});
  }
  std::stable_sort(table.begin(), table.end(),
                   [](const auto& a, const auto& b) { return a.importance > b.importance; });
  return table;
}

std::string ImportanceCsv(const std::vector<FeatureImportance>& table) {
  std::ostringstream out;
  out << "rank,feature,importance,std\n";
  for (size_t i = 0; i < table.size(); ++i) {
    out << i + 1 << ',' << EscapeCsvField(table[i].feature) << ','
        << FormatDouble(table[i].importance) << ',' << FormatDouble(table[i].std_dev) << '\n';
  }
  return out.str();
}

std::vector<double> PdpCurve::predictions() const {
  std::vector<double> out;
  for (const PdpPoint& p : points) out.push_back(p.mean_prediction);
  return out;
}

std::string PdpCurve::ToCsv() const {
  std::ostringstream out;
  out << "feature,value,design_value,mean_prediction\n";
  for (const PdpPoint& p : points) {
    out << EscapeCsvField(feature) << ','
        << (p.label.empty() ? FormatDouble(p.raw_value) : EscapeCsvField(p.label)) << ','
        << FormatDouble(p.design_value) << ',' << FormatDouble(p.mean_prediction) << '\n';
  }
  return out.str();
}

PdpCurve PartialDependence(const PredictFn& predict, const DesignMatrix& background,
                           const std::string& feature, const std::vector<double>& design_grid,
                           const std::vector<double>& raw_grid) {
  if (design_grid.empty()) throw ConfigError("partial dependence grid is empty");
  if (!raw_grid.empty() && raw_grid.size() != design_grid.size()) {
    throw ConfigError("raw and design grids differ in length");
  }
  if (background.num_rows() < 1) throw DataError("partial dependence needs background rows");
  const std::vector<Eigen::Index> cols = RequireColumns(background, feature);
  if (cols.size() != 1) {
    throw ConfigError("feature '" + feature + "' is categorical; use the categorical curve");
  }
  const Eigen::Index col = cols.front();
  const double lo = background.x.col(col).minCoeff();
  const double hi = background.x.col(col).maxCoeff();
  const double slack = 1e-9 * std::max(1.0, hi - lo);

  PdpCurve curve{feature, {}};
  Eigen::MatrixXd x = background.x;
  for (size_t g = 0; g < design_grid.size(); ++g) {
    const double v = design_grid[g];
    if (!(v >= lo - slack && v <= hi + slack)) {
      throw ConfigError("grid value " + FormatDouble(raw_grid.empty() ? v : raw_grid[g]) +
                        " for '" + feature + "' lies outside the observed range");
    }
    x.col(col).setConstant(v);
    curve.points.push_back({"", raw_grid.empty() ? v : raw_grid[g], v, predict(x).mean()});
  }
  return curve;
}

PdpCurve CategoricalPartialDependence(const PredictFn& predict, const DesignMatrix& background,
                                      const std::string& feature) {
  if (background.num_rows() < 1) throw DataError("partial dependence needs background rows");
  const std::vector<Eigen::Index> cols = RequireColumns(background, feature);
  PdpCurve curve{feature, {}};
  Eigen::MatrixXd x = background.x;
  auto evaluate = [&](std::optional<Eigen::Index> hot, const std::string& label) {
    for (Eigen::Index c : cols) x.col(c).setConstant(hot && *hot == c ? 1.0 : 0.0);
    curve.points.push_back({label, 0.0, hot ? 1.0 : 0.0, predict(x).mean()});
  };
  if (background.has_intercept) evaluate(std::nullopt, "(reference)");
  for (Eigen::Index c : cols) {
    const std::string& level = background.columns[static_cast<size_t>(c)].level;
    evaluate(c, level.empty() ? "1" : level);
  }
  return curve;
}

std::vector<double> LinearGrid(double lo, double hi, int points) {
  if (points < 1) throw ConfigError("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) {
    grid.push_back(i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1));
  }
  return grid;
}

int SlopeSignChanges(const std::vector<double>& values) {
  int changes = 0;
  int previous = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    const double slope = values[i] - values[i - 1];
    const int sign = (slope > 0) - (slope < 0);
    if (sign == 0) continue;
    if (previous != 0 && sign != previous) ++changes;
    previous = sign;
  }
  return changes;
}

}  // namespace housebench
