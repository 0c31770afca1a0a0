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

#ifndef HOUSEBENCH_PREPROCESS_H_
#define HOUSEBENCH_PREPROCESS_H_

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "housebench/data_model.h"
#include "json.hpp"

namespace housebench {

enum class WinsorMode { kNone, kUpper, kTwoSided };
enum class TargetTransform { kLog, kNone };

// Full coding: every categorical level gets an indicator (ANN, RF, kNN).
// Hedonic coding: reference level dropped, intercept added, and the
// configured area features enter as ln(1 + x) (OLS).
enum class Coding { kFull, kHedonic };

struct WinsorOptions {
  WinsorMode mode = WinsorMode::kUpper;
  double upper_q = 0.95;
  double lower_q = 0.05;
};

struct ScreenOptions {
  bool enabled = true;
  double r_threshold = 0.8;
  // Applied to GVIF^(1 / (2 df)).
  double gvif_cutoff = std::sqrt(5.0);
};

struct PipelineOptions {
  WinsorOptions winsor;
  ScreenOptions screen;
  TargetTransform target_transform = TargetTransform::kLog;
  std::vector<std::string> hedonic_log_features = {"Lot Area", "Living Area"};
};

// Replaces missing feature cells: numeric with the training mean,
// categorical and binary with the training mode (ties go to the
// lexicographically smallest level). Throws DataError naming a feature
// column that is entirely missing on the training rows.
Dataset Impute(const Dataset& ds, std::span<const size_t> train_idx);

struct WinsorCaps {
  std::optional<double> lower;
  std::optional<double> upper;
};

// Training-fold caps for one numeric column (missing cells ignored).
WinsorCaps FitWinsorCaps(const Dataset& ds, size_t col,
                         std::span<const size_t> train_idx,
                         const WinsorOptions& options);

// Caps numeric feature columns at training-fold quantiles. Values equal to
// a cap are unchanged.
Dataset Winsorize(const Dataset& ds, std::span<const size_t> train_idx,
                  const WinsorOptions& options = {});

struct CorrelationResult {
  // NaN where a correlation is undefined.
  Eigen::MatrixXd r;
  std::vector<bool> constant;
};

// Pearson correlations between the columns of `columns` (rows are
// observations, usually the training fold).
CorrelationResult CorrelationMatrix(const Eigen::MatrixXd& columns);

// One predictor as it enters the hedonic design: a single numeric or binary
// column, or the reference-dropped indicator block of a categorical.
struct PredictorGroup {
  std::string name;
  bool numeric = false;
  Eigen::MatrixXd columns;
};

struct DroppedFeature {
  std::string name;
  // "constant", "correlation", "singular" or "gvif".
  std::string reason;
  double statistic = 0.0;
};

struct GroupVif {
  std::string name;
  int df = 0;
  double gvif = 1.0;
  // GVIF^(1 / (2 df)); equals sqrt(VIF) for single columns.
  double adjusted = 1.0;
};

struct ScreenResult {
  std::vector<DroppedFeature> dropped;
  std::vector<GroupVif> final_vifs;
};

// Pairwise correlation screen on numeric groups followed by an iterative
// GVIF screen over all groups. Groups are given in schema order, which
// also decides ties (the later group is dropped).
ScreenResult ScreenMulticollinearity(const std::vector<PredictorGroup>& groups,
                                     const ScreenOptions& options);

// Training-fold statistics for one retained feature.
struct FeatureFit {
  std::string name;
  size_t column = 0;
  ColumnKind kind = ColumnKind::kNumeric;

  // Numeric.
  double impute_mean = 0.0;
  WinsorCaps caps;
  double mean = 0.0;
  double std = 1.0;
  bool hedonic_log = false;
  double log_mean = 0.0;
  double log_std = 1.0;

  // Categorical and binary.
  size_t impute_mode = 0;
  std::vector<std::string> levels;
  // Levels whose indicator enters the hedonic coding, i.e. levels observed
  // in training other than the first observed (reference) level.
  std::vector<size_t> hedonic_levels;
  std::optional<size_t> reference_level;
};

struct PipelineFit {
  std::vector<std::string> schema_names;
  size_t target_column = 0;
  TargetTransform target_transform = TargetTransform::kLog;
  std::vector<FeatureFit> features;
  std::vector<DroppedFeature> dropped;
  std::vector<GroupVif> vifs;

  nlohmann::json ToJson() const;
  static PipelineFit FromJson(const nlohmann::json& doc);
  // Stable hash of the serialized state.
  std::string Fingerprint() const;
  const FeatureFit* Find(const std::string& name) const;
};

// Imputation, winsorization and screening statistics from the training
// rows only.
PipelineFit FitPipeline(const Dataset& ds, std::span<const size_t> train_idx,
                        const PipelineOptions& options = {});

struct ColumnProvenance {
  std::string feature;
  // Level name for indicator columns, empty for numeric columns.
  std::string level;
  // Display label, e.g. "Ln(Living Area)" or "Region=North".
  std::string label;
};

struct DesignMatrix {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<ColumnProvenance> columns;
  bool has_intercept = false;
  // Dataset row of each design row.
  std::vector<size_t> rows;
  std::vector<std::string> row_ids;

  Eigen::Index num_rows() const { return x.rows(); }
  Eigen::Index num_cols() const { return x.cols(); }
  std::vector<std::string> labels() const;
  // Design column indices belonging to `feature`.
  std::vector<Eigen::Index> FeatureColumns(const std::string& feature) const;
  // Distinct source features in column order (intercept excluded).
  std::vector<std::string> Features() const;
  DesignMatrix SelectRows(std::span<const Eigen::Index> rows) const;
};

// Applies a fitted pipeline to `rows` of `ds`.
DesignMatrix BuildDesign(const Dataset& ds, std::span<const size_t> rows,
                         const PipelineFit& fit, Coding coding);

// Maps a raw value of a numeric feature to its design-scale value.
double ToDesignScale(const FeatureFit& feature, double raw, Coding coding);

}  // namespace housebench

#endif  // HOUSEBENCH_PREPROCESS_H_
