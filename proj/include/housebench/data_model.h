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

#ifndef HOUSEBENCH_DATA_MODEL_H_
#define HOUSEBENCH_DATA_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace housebench {

enum class ColumnKind { kNumeric, kCategorical, kBinary };
enum class ColumnRole { kFeature, kTarget, kIdentifier };

std::string_view ColumnKindName(ColumnKind kind);
std::string_view ColumnRoleName(ColumnRole role);
ColumnKind ParseColumnKind(std::string_view text);
ColumnRole ParseColumnRole(std::string_view text);

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  ColumnRole role = ColumnRole::kFeature;
  // Declared level order (categorical only). The first level observed in a
  // training fold becomes the reference level of the hedonic coding.
  std::vector<std::string> levels;
  std::string units;

  bool is_numeric() const { return kind == ColumnKind::kNumeric; }
  bool is_feature() const { return role == ColumnRole::kFeature; }
};

using Schema = std::vector<ColumnSchema>;

// Throws DataError unless names are unique, exactly one numeric target
// exists and categorical columns declare at least one distinct level.
void ValidateSchema(const Schema& schema);

// Per-column storage. Numeric cells hold their value, categorical cells the
// level index, binary cells 0 or 1. Identifier columns keep raw text only.
struct Column {
  std::vector<double> values;
  std::vector<uint8_t> missing;
  std::vector<std::string> text;
};

// Immutable column store. All operations producing modified data return a
// new Dataset.
class Dataset {
 public:
  Dataset(Schema schema, std::vector<Column> columns);

  size_t num_rows() const { return num_rows_; }
  size_t num_columns() const { return schema_.size(); }
  const Schema& schema() const { return schema_; }
  const ColumnSchema& column_schema(size_t col) const { return schema_[col]; }
  size_t target_column() const { return target_column_; }

  std::optional<size_t> FindColumn(std::string_view name) const;
  // Throws DataError when the column does not exist.
  size_t ColumnIndex(std::string_view name) const;

  bool is_missing(size_t row, size_t col) const {
    return columns_[col].missing[row] != 0;
  }
  double value(size_t row, size_t col) const {
    return columns_[col].values[row];
  }
  const Column& column(size_t col) const { return columns_[col]; }

  // Cell rendered as CSV text; missing cells render as the empty string.
  std::string CellText(size_t row, size_t col) const;

  // Copy with column `col` replaced. Missing flags must be consistent with
  // the column kind (missing cells carry no value).
  Dataset WithColumn(size_t col, Column column) const;
  Dataset SelectRows(std::span<const size_t> rows) const;

  bool operator==(const Dataset& other) const;

 private:
  Schema schema_;
  std::vector<Column> columns_;
  size_t num_rows_ = 0;
  size_t target_column_ = 0;
};

struct NumericSummary {
  std::string name;
  size_t count = 0;
  // Unset when the column has no observed values (std needs two).
  std::optional<double> mean;
  std::optional<double> std;
  std::optional<double> min;
  std::optional<double> max;
  // Coefficient of variation, reported only when the mean is nonzero.
  std::optional<double> cv;
};

struct LevelFrequency {
  std::string level;
  size_t count = 0;
  double percent = 0.0;
};

struct CategoricalSummary {
  std::string name;
  size_t count = 0;
  std::vector<LevelFrequency> levels;
};

struct DescriptiveStats {
  std::vector<NumericSummary> numeric;
  std::vector<CategoricalSummary> categorical;
};

// Statistics over non-missing cells. Identifier columns are skipped.
DescriptiveStats Describe(const Dataset& ds);

// Renders a ratio as a percentage string, e.g. 0.758 -> "76%".
std::string FormatPercent(double ratio, int decimals = 0);

std::string NumericSummaryCsv(const DescriptiveStats& stats);
std::string CategoricalSummaryCsv(const DescriptiveStats& stats);

struct SplitFractions {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct SplitIndices {
  std::vector<size_t> train;
  std::vector<size_t> validation;
  std::vector<size_t> test;
  uint64_t seed = 0;
};

// Seeded shuffle split. |train| = floor(n * f_train); the remainder is
// divided in proportion to the validation and test fractions, rounding half
// up in favour of validation. Each list is returned sorted.
SplitIndices Split(size_t n, const SplitFractions& fractions, uint64_t seed);
inline SplitIndices Split(const Dataset& ds, const SplitFractions& fractions,
                          uint64_t seed) {
  return Split(ds.num_rows(), fractions, seed);
}

// Quantile with linear interpolation between order statistics:
// h = (m - 1) q, result = x[floor(h)] + frac(h) (x[floor(h)+1] - x[floor(h)]).
double LinearQuantile(std::vector<double> values, double q);

}  // namespace housebench

#endif  // HOUSEBENCH_DATA_MODEL_H_
