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

#include "housebench/preprocess.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "housebench/errors.h"

namespace housebench {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string>& LevelsOf(const ColumnSchema& cs) {
  static const std::vector<std::string> kBinaryLevels = {"0", "1"};
  return cs.kind == ColumnKind::kBinary ? kBinaryLevels : cs.levels;
}

std::vector<double> ObservedTrainValues(const Dataset& ds, size_t col,
                                        std::span<const size_t> train_idx) {
  std::vector<double> values;
  values.reserve(train_idx.size());
  for (size_t r : train_idx) {
    if (r >= ds.num_rows()) throw DataError("training row index out of range");
    if (!ds.is_missing(r, col)) values.push_back(ds.value(r, col));
  }
  return values;
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double SampleStd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

size_t ModeLevel(const std::vector<double>& values,
                 const std::vector<std::string>& levels) {
  std::vector<size_t> counts(levels.size(), 0);
  for (double v : values) ++counts[static_cast<size_t>(v)];
  size_t best = 0;
  for (size_t l = 1; l < levels.size(); ++l) {
    if (counts[l] > counts[best] ||
        (counts[l] == counts[best] && levels[l] < levels[best])) {
      best = l;
    }
  }
  return best;
}

double ApplyCaps(double v, const WinsorCaps& caps) {
  if (caps.upper && v > *caps.upper) v = *caps.upper;
  if (caps.lower && v < *caps.lower) v = *caps.lower;
  return v;
}

double HedonicLog(double v, const std::string& name) {
  if (!(v > -1.0)) {
    throw DataError("ln(1 + x) undefined for value " + std::to_string(v) +
                    " of '" + name + "'");
  }
  return std::log1p(v);
}

// Standardized copy of a column block (sample std); constant columns are
// left centered.
Eigen::MatrixXd Standardize(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m.rowwise() - m.colwise().mean();
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double norm = out.col(c).norm();
    if (norm > 0) out.col(c) /= norm;
  }
  return out;
}

double LogDet(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return -INFINITY;
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

std::string Hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Dataset Impute(const Dataset& ds, std::span<const size_t> train_idx) {
  if (train_idx.empty()) throw DataError("imputation needs training rows");
  Dataset out = ds;
  for (size_t c = 0; c < ds.num_columns(); ++c) {
    const ColumnSchema& cs = ds.column_schema(c);
    if (cs.role != ColumnRole::kFeature) continue;
    const std::vector<double> observed = ObservedTrainValues(ds, c, train_idx);
    if (observed.empty()) {
      throw DataError("feature '" + cs.name +
                      "' is entirely missing on the training rows");
    }
    const Column& src = ds.column(c);
    if (std::none_of(src.missing.begin(), src.missing.end(),
                     [](uint8_t m) { return m != 0; })) {
      continue;
    }
    const double fill = cs.kind == ColumnKind::kNumeric
                            ? Mean(observed)
                            : static_cast<double>(ModeLevel(observed, LevelsOf(cs)));
    Column col = src;
    for (size_t r = 0; r < ds.num_rows(); ++r) {
      if (col.missing[r]) {
        col.values[r] = fill;
        col.missing[r] = 0;
      }
    }
    out = out.WithColumn(c, std::move(col));
  }
  return out;
}

WinsorCaps FitWinsorCaps(const Dataset& ds, size_t col,
                         std::span<const size_t> train_idx,
                         const WinsorOptions& options) {
  WinsorCaps caps;
  if (options.mode == WinsorMode::kNone) return caps;
  const std::vector<double> observed = ObservedTrainValues(ds, col, train_idx);
  if (observed.empty()) return caps;
  caps.upper = LinearQuantile(observed, options.upper_q);
  if (options.mode == WinsorMode::kTwoSided) {
    caps.lower = LinearQuantile(observed, options.lower_q);
  }
  return caps;
}

Dataset Winsorize(const Dataset& ds, std::span<const size_t> train_idx,
                  const WinsorOptions& options) {
  if (options.mode == WinsorMode::kNone) return ds;
  Dataset out = ds;
  for (size_t c = 0; c < ds.num_columns(); ++c) {
    const ColumnSchema& cs = ds.column_schema(c);
    if (cs.role != ColumnRole::kFeature || cs.kind != ColumnKind::kNumeric)
      continue;
    const WinsorCaps caps = FitWinsorCaps(ds, c, train_idx, options);
    Column col = ds.column(c);
    bool changed = false;
    for (size_t r = 0; r < ds.num_rows(); ++r) {
      if (col.missing[r]) continue;
      const double capped = ApplyCaps(col.values[r], caps);
      if (capped != col.values[r]) {
        col.values[r] = capped;
        changed = true;
      }
    }
    if (changed) out = out.WithColumn(c, std::move(col));
  }
  return out;
}

CorrelationResult CorrelationMatrix(const Eigen::MatrixXd& columns) {
  if (columns.rows() < 2) {
    throw DataError("correlation needs at least two rows");
  }
  const Eigen::Index p = columns.cols();
  CorrelationResult out;
  out.r = Eigen::MatrixXd::Constant(p, p, kNaN);
  out.constant.assign(static_cast<size_t>(p), false);
  Eigen::MatrixXd centered = columns.rowwise() - columns.colwise().mean();
  Eigen::VectorXd norms(p);
  for (Eigen::Index c = 0; c < p; ++c) {
    norms(c) = centered.col(c).norm();
    out.constant[static_cast<size_t>(c)] =
        columns.col(c).maxCoeff() == columns.col(c).minCoeff() || norms(c) == 0;
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (out.constant[static_cast<size_t>(i)]) continue;
    out.r(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if (out.constant[static_cast<size_t>(j)]) continue;
      const double r = std::clamp(
          centered.col(i).dot(centered.col(j)) / (norms(i) * norms(j)), -1.0, 1.0);
      out.r(i, j) = r;
      out.r(j, i) = r;
    }
  }
  return out;
}

ScreenResult ScreenMulticollinearity(const std::vector<PredictorGroup>& groups,
                                     const ScreenOptions& options) {
  ScreenResult result;
  std::vector<bool> alive(groups.size(), true);
  // A categorical observed at a single level has no contrast columns.
  for (size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].columns.cols() == 0) {
      alive[g] = false;
      result.dropped.push_back({groups[g].name, "constant", 0.0});
    }
  }

  // Constant numeric predictors carry no information and break the
  // correlation screen.
  for (size_t g = 0; g < groups.size(); ++g) {
    if (!alive[g] || !groups[g].numeric) continue;
    const Eigen::VectorXd col = groups[g].columns.col(0);
    if (col.maxCoeff() == col.minCoeff()) {
      alive[g] = false;
      result.dropped.push_back({groups[g].name, "constant", 0.0});
    }
  }

  // Pairwise screen over numeric predictors.
  while (true) {
    std::vector<size_t> numeric;
    for (size_t g = 0; g < groups.size(); ++g) {
      if (alive[g] && groups[g].numeric) numeric.push_back(g);
    }
    if (numeric.size() < 2) break;
    Eigen::MatrixXd block(groups[numeric[0]].columns.rows(),
                          static_cast<Eigen::Index>(numeric.size()));
    for (size_t i = 0; i < numeric.size(); ++i) {
      block.col(static_cast<Eigen::Index>(i)) = groups[numeric[i]].columns.col(0);
    }
    const Eigen::MatrixXd r = CorrelationMatrix(block).r.cwiseAbs();
    const auto k = static_cast<Eigen::Index>(numeric.size());
    double worst = 0.0;
    Eigen::Index wi = -1, wj = -1;
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = i + 1; j < k; ++j) {
        if (r(i, j) > options.r_threshold && r(i, j) > worst) {
          worst = r(i, j);
          wi = i;
          wj = j;
        }
      }
    }
    if (wi < 0) break;
    auto mean_abs = [&](Eigen::Index i) {
      return (r.row(i).sum() - 1.0) / static_cast<double>(k - 1);
    };
    const Eigen::Index victim = mean_abs(wi) > mean_abs(wj) ? wi : wj;
    const size_t g = numeric[static_cast<size_t>(victim)];
    alive[g] = false;
    result.dropped.push_back({groups[g].name, "correlation", worst});
  }

  auto assemble = [&](std::vector<std::pair<size_t, std::pair<Eigen::Index, Eigen::Index>>>* spans) {
    Eigen::Index total = 0;
    Eigen::Index rows = 0;
    for (size_t g = 0; g < groups.size(); ++g) {
      if (!alive[g]) continue;
      spans->push_back({g, {total, groups[g].columns.cols()}});
      total += groups[g].columns.cols();
      rows = groups[g].columns.rows();
    }
    Eigen::MatrixXd m(rows, total);
    for (const auto& [g, span] : *spans) {
      m.middleCols(span.first, span.second) = groups[g].columns;
    }
    return Standardize(m);
  };

  // Exact linear dependence, detected by sequential orthogonalization so the
  // later member of a dependent set is the one removed.
  bool restart = true;
  while (restart) {
    restart = false;
    std::vector<std::pair<size_t, std::pair<Eigen::Index, Eigen::Index>>> spans;
    const Eigen::MatrixXd z = assemble(&spans);
    std::vector<Eigen::VectorXd> basis;
    for (const auto& [g, span] : spans) {
      for (Eigen::Index c = span.first; c < span.first + span.second; ++c) {
        Eigen::VectorXd v = z.col(c);
        const double norm2 = v.squaredNorm();
        for (int pass = 0; pass < 2; ++pass) {
          for (const Eigen::VectorXd& q : basis) v -= q.dot(v) * q;
        }
        if (norm2 == 0 || v.squaredNorm() < 1e-10 * norm2) {
          alive[g] = false;
          result.dropped.push_back({groups[g].name, "singular", 1.0});
          restart = true;
          break;
        }
        basis.push_back(v.normalized());
      }
      if (restart) break;
    }
  }

  // Iterative GVIF screen.
  while (true) {
    std::vector<std::pair<size_t, std::pair<Eigen::Index, Eigen::Index>>> spans;
    const Eigen::MatrixXd z = assemble(&spans);
    result.final_vifs.clear();
    if (spans.empty()) break;
    const Eigen::MatrixXd r = z.transpose() * z;
    const double logdet_all = LogDet(r);
    const Eigen::Index total = r.cols();
    double worst = -1.0;
    size_t worst_index = 0;
    for (size_t s = 0; s < spans.size(); ++s) {
      const auto [start, width] = spans[s].second;
      std::vector<Eigen::Index> rest;
      for (Eigen::Index c = 0; c < total; ++c) {
        if (c < start || c >= start + width) rest.push_back(c);
      }
      const Eigen::MatrixXd r_rest = r(rest, rest);
      const double log_gvif =
          LogDet(r.block(start, start, width, width)) + LogDet(r_rest) - logdet_all;
      GroupVif v;
      v.name = groups[spans[s].first].name;
      v.df = static_cast<int>(width);
      v.gvif = std::exp(log_gvif);
      v.adjusted = std::exp(log_gvif / (2.0 * static_cast<double>(width)));
      if (v.adjusted >= worst) {
        worst = v.adjusted;
        worst_index = s;
      }
      result.final_vifs.push_back(v);
    }
    if (worst <= options.gvif_cutoff) break;
    alive[spans[worst_index].first] = false;
    result.dropped.push_back(
        {groups[spans[worst_index].first].name, "gvif", worst});
  }
  return result;
}

const FeatureFit* PipelineFit::Find(const std::string& name) const {
  for (const FeatureFit& f : features) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

PipelineFit FitPipeline(const Dataset& ds, std::span<const size_t> train_idx,
                        const PipelineOptions& options) {
  if (train_idx.empty()) throw DataError("pipeline fit needs training rows");
  const Dataset imputed = Impute(ds, train_idx);
  const Dataset capped = Winsorize(imputed, train_idx, options.winsor);

  PipelineFit fit;
  fit.target_column = ds.target_column();
  fit.target_transform = options.target_transform;
  for (const ColumnSchema& cs : ds.schema()) fit.schema_names.push_back(cs.name);

  std::set<std::string> log_features(options.hedonic_log_features.begin(),
                                     options.hedonic_log_features.end());
  std::vector<FeatureFit> candidates;
  std::vector<PredictorGroup> groups;
  const auto n_train = static_cast<Eigen::Index>(train_idx.size());
  for (size_t c = 0; c < ds.num_columns(); ++c) {
    const ColumnSchema& cs = ds.column_schema(c);
    if (cs.role != ColumnRole::kFeature) continue;
    FeatureFit f;
    f.name = cs.name;
    f.column = c;
    f.kind = cs.kind;
    const std::vector<double> observed = ObservedTrainValues(ds, c, train_idx);
    PredictorGroup group;
    group.name = cs.name;
    if (cs.kind == ColumnKind::kNumeric) {
      f.impute_mean = Mean(observed);
      f.caps = FitWinsorCaps(imputed, c, train_idx, options.winsor);
      f.hedonic_log = log_features.count(cs.name) > 0;
      std::vector<double> train_values;
      std::vector<double> log_values;
      for (size_t r : train_idx) {
        train_values.push_back(capped.value(r, c));
        if (f.hedonic_log) log_values.push_back(HedonicLog(capped.value(r, c), cs.name));
      }
      f.mean = Mean(train_values);
      f.std = SampleStd(train_values, f.mean);
      if (f.hedonic_log) {
        f.log_mean = Mean(log_values);
        f.log_std = SampleStd(log_values, f.log_mean);
      }
      group.numeric = true;
      const std::vector<double>& scale = f.hedonic_log ? log_values : train_values;
      group.columns = Eigen::Map<const Eigen::VectorXd>(
          scale.data(), static_cast<Eigen::Index>(scale.size()));
    } else {
      f.levels = LevelsOf(cs);
      f.impute_mode = ModeLevel(observed, f.levels);
      std::vector<size_t> counts(f.levels.size(), 0);
      for (size_t r : train_idx) ++counts[static_cast<size_t>(imputed.value(r, c))];
      for (size_t l = 0; l < f.levels.size(); ++l) {
        if (counts[l] == 0) continue;
        if (!f.reference_level) {
          f.reference_level = l;
        } else {
          f.hedonic_levels.push_back(l);
        }
      }
      group.columns.resize(n_train, static_cast<Eigen::Index>(f.hedonic_levels.size()));
      for (Eigen::Index i = 0; i < n_train; ++i) {
        const double v = imputed.value(train_idx[static_cast<size_t>(i)], c);
        for (size_t k = 0; k < f.hedonic_levels.size(); ++k) {
          group.columns(i, static_cast<Eigen::Index>(k)) =
              v == static_cast<double>(f.hedonic_levels[k]) ? 1.0 : 0.0;
        }
      }
    }
    candidates.push_back(std::move(f));
    groups.push_back(std::move(group));
  }

  std::set<std::string> dropped;
  if (options.screen.enabled && n_train >= 2) {
    ScreenResult screen = ScreenMulticollinearity(groups, options.screen);
    fit.dropped = screen.dropped;
    fit.vifs = screen.final_vifs;
    for (const DroppedFeature& d : fit.dropped) dropped.insert(d.name);
  }
  for (FeatureFit& f : candidates) {
    if (!dropped.count(f.name)) fit.features.push_back(std::move(f));
  }
  return fit;
}

double ToDesignScale(const FeatureFit& feature, double raw, Coding coding) {
  if (coding == Coding::kHedonic && feature.hedonic_log) {
    return (HedonicLog(raw, feature.name) - feature.log_mean) / feature.log_std;
  }
  return (raw - feature.mean) / feature.std;
}

DesignMatrix BuildDesign(const Dataset& ds, std::span<const size_t> rows,
                         const PipelineFit& fit, Coding coding) {
  if (ds.num_columns() != fit.schema_names.size()) {
    throw DataError("dataset schema does not match the fitted pipeline");
  }
  for (size_t c = 0; c < ds.num_columns(); ++c) {
    if (ds.column_schema(c).name != fit.schema_names[c]) {
      throw DataError("dataset column '" + ds.column_schema(c).name +
                      "' does not match fitted column '" + fit.schema_names[c] +
                      "'");
    }
  }
  const bool hedonic = coding == Coding::kHedonic;
  DesignMatrix dm;
  dm.has_intercept = hedonic;
  if (hedonic) dm.columns.push_back({"(Intercept)", "", "(Intercept)"});
  for (const FeatureFit& f : fit.features) {
    if (f.kind == ColumnKind::kNumeric) {
      const double sd = hedonic && f.hedonic_log ? f.log_std : f.std;
      if (!(sd > 0)) {
        throw DataError("retained feature '" + f.name +
                        "' has zero training standard deviation");
      }
      dm.columns.push_back(
          {f.name, "", hedonic && f.hedonic_log ? "Ln(" + f.name + ")" : f.name});
    } else if (hedonic) {
      for (size_t l : f.hedonic_levels) {
        dm.columns.push_back({f.name, f.levels[l], f.name + "=" + f.levels[l]});
      }
    } else if (f.kind == ColumnKind::kBinary) {
      dm.columns.push_back({f.name, "1", f.name});
    } else {
      for (const std::string& level : f.levels) {
        dm.columns.push_back({f.name, level, f.name + "=" + level});
      }
    }
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  dm.x.setZero(n, static_cast<Eigen::Index>(dm.columns.size()));
  dm.y.resize(n);
  std::optional<size_t> id_column;
  for (size_t c = 0; c < ds.num_columns(); ++c) {
    if (ds.column_schema(c).role == ColumnRole::kIdentifier) {
      id_column = c;
      break;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const size_t r = rows[static_cast<size_t>(i)];
    if (r >= ds.num_rows()) throw DataError("design row index out of range");
    dm.rows.push_back(r);
    dm.row_ids.push_back(id_column ? ds.CellText(r, *id_column)
                                   : std::to_string(r + 1));
    Eigen::Index col = 0;
    if (hedonic) dm.x(i, col++) = 1.0;
    for (const FeatureFit& f : fit.features) {
      const bool missing = ds.is_missing(r, f.column);
      if (f.kind == ColumnKind::kNumeric) {
        const double raw = ApplyCaps(missing ? f.impute_mean : ds.value(r, f.column), f.caps);
        dm.x(i, col++) = ToDesignScale(f, raw, coding);
        continue;
      }
      const double level =
          missing ? static_cast<double>(f.impute_mode) : ds.value(r, f.column);
      if (hedonic) {
        for (size_t l : f.hedonic_levels) {
          dm.x(i, col++) = level == static_cast<double>(l) ? 1.0 : 0.0;
        }
      } else if (f.kind == ColumnKind::kBinary) {
        dm.x(i, col++) = level;
      } else {
        for (size_t l = 0; l < f.levels.size(); ++l) {
          dm.x(i, col++) = level == static_cast<double>(l) ? 1.0 : 0.0;
        }
      }
    }
    if (ds.is_missing(r, fit.target_column)) {
      throw DataError("target is missing at row " + std::to_string(r + 1));
    }
    const double target = ds.value(r, fit.target_column);
    if (fit.target_transform == TargetTransform::kLog) {
      if (!(target > 0)) {
        throw DataError("non-positive target " + std::to_string(target) +
                        " at row " + std::to_string(r + 1) +
                        " cannot be log-transformed");
      }
      dm.y(i) = std::log(target);
    } else {
      dm.y(i) = target;
    }
  }
  return dm;
}

std::vector<std::string> DesignMatrix::labels() const {
  std::vector<std::string> out;
  for (const ColumnProvenance& c : columns) out.push_back(c.label);
  return out;
}

std::vector<Eigen::Index> DesignMatrix::FeatureColumns(const std::string& feature) const {
  std::vector<Eigen::Index> out;
  for (size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].feature == feature) out.push_back(static_cast<Eigen::Index>(c));
  }
  return out;
}

std::vector<std::string> DesignMatrix::Features() const {
  std::vector<std::string> out;
  for (size_t c = 0; c < columns.size(); ++c) {
    if (has_intercept && c == 0) continue;
    if (out.empty() || out.back() != columns[c].feature) {
      out.push_back(columns[c].feature);
    }
  }
  return out;
}

DesignMatrix DesignMatrix::SelectRows(std::span<const Eigen::Index> selected) const {
  DesignMatrix out;
  out.columns = columns;
  out.has_intercept = has_intercept;
  out.x.resize(static_cast<Eigen::Index>(selected.size()), x.cols());
  out.y.resize(static_cast<Eigen::Index>(selected.size()));
  for (size_t i = 0; i < selected.size(); ++i) {
    const Eigen::Index r = selected[i];
    out.x.row(static_cast<Eigen::Index>(i)) = x.row(r);
    out.y(static_cast<Eigen::Index>(i)) = y(r);
    if (!rows.empty()) out.rows.push_back(rows[static_cast<size_t>(r)]);
    if (!row_ids.empty()) out.row_ids.push_back(row_ids[static_cast<size_t>(r)]);
  }
  return out;
}

json PipelineFit::ToJson() const {
  json features_json = json::array();
  for (const FeatureFit& f : features) {
    json j = {{"name", f.name},
              {"column", f.column},
              {"kind", std::string(ColumnKindName(f.kind))}};
    if (f.kind == ColumnKind::kNumeric) {
      j["impute_mean"] = f.impute_mean;
      if (f.caps.lower) j["lower_cap"] = *f.caps.lower;
      if (f.caps.upper) j["upper_cap"] = *f.caps.upper;
      j["mean"] = f.mean;
      j["std"] = f.std;
      j["hedonic_log"] = f.hedonic_log;
      if (f.hedonic_log) {
        j["log_mean"] = f.log_mean;
        j["log_std"] = f.log_std;
      }
    } else {
      j["impute_mode"] = f.impute_mode;
      j["levels"] = f.levels;
      j["hedonic_levels"] = f.hedonic_levels;
      if (f.reference_level) j["reference_level"] = *f.reference_level;
    }
    features_json.push_back(std::move(j));
  }
  json dropped_json = json::array();
  for (const DroppedFeature& d : dropped) {
    dropped_json.push_back(
        {{"name", d.name}, {"reason", d.reason}, {"statistic", d.statistic}});
  }
  json vifs_json = json::array();
  for (const GroupVif& v : vifs) {
    vifs_json.push_back({{"name", v.name},
                         {"df", v.df},
                         {"gvif", v.gvif},
                         {"adjusted", v.adjusted}});
  }
  return {{"version", 1},
          {"schema", schema_names},
          {"target_column", target_column},
          {"target_transform",
           target_transform == TargetTransform::kLog ? "log" : "none"},
          {"features", features_json},
          {"dropped", dropped_json},
          {"vifs", vifs_json}};
}

PipelineFit PipelineFit::FromJson(const json& doc) {
  PipelineFit fit;
  try {
    if (doc.at("version").get<int>() != 1) {
      throw DataError("unsupported pipeline fit version");
    }
    fit.schema_names = doc.at("schema").get<std::vector<std::string>>();
    fit.target_column = doc.at("target_column").get<size_t>();
    fit.target_transform = doc.at("target_transform").get<std::string>() == "log"
                               ? TargetTransform::kLog
                               : TargetTransform::kNone;
    for (const json& j : doc.at("features")) {
      FeatureFit f;
      f.name = j.at("name").get<std::string>();
      f.column = j.at("column").get<size_t>();
      f.kind = ParseColumnKind(j.at("kind").get<std::string>());
      if (f.kind == ColumnKind::kNumeric) {
        f.impute_mean = j.at("impute_mean").get<double>();
        if (j.contains("lower_cap")) f.caps.lower = j["lower_cap"].get<double>();
        if (j.contains("upper_cap")) f.caps.upper = j["upper_cap"].get<double>();
        f.mean = j.at("mean").get<double>();
        f.std = j.at("std").get<double>();
        f.hedonic_log = j.at("hedonic_log").get<bool>();
        if (f.hedonic_log) {
          f.log_mean = j.at("log_mean").get<double>();
          f.log_std = j.at("log_std").get<double>();
        }
      } else {
        f.impute_mode = j.at("impute_mode").get<size_t>();
        f.levels = j.at("levels").get<std::vector<std::string>>();
        f.hedonic_levels = j.at("hedonic_levels").get<std::vector<size_t>>();
        if (j.contains("reference_level")) {
          f.reference_level = j["reference_level"].get<size_t>();
        }
      }
      fit.features.push_back(std::move(f));
    }
    for (const json& j : doc.at("dropped")) {
      fit.dropped.push_back({j.at("name").get<std::string>(),
                             j.at("reason").get<std::string>(),
                             j.at("statistic").get<double>()});
    }
    for (const json& j : doc.at("vifs")) {
      fit.vifs.push_back({j.at("name").get<std::string>(), j.at("df").get<int>(),
                          j.at("gvif").get<double>(), j.at("adjusted").get<double>()});
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed pipeline fit: ") + e.what());
  }
  return fit;
}

std::string PipelineFit::Fingerprint() const {
  const std::string text = ToJson().dump();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return Hex64(h);
}

}  // namespace housebench
