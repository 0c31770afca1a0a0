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

#include "housebench/data_model.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "housebench/csv.h"
#include "housebench/errors.h"
#include "housebench/random.h"

namespace housebench {

std::string_view ColumnKindName(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kNumeric:
      return "numeric";
    case ColumnKind::kCategorical:
      return "categorical";
    case ColumnKind::kBinary:
      return "binary";
  }
  return "numeric";
}

std::string_view ColumnRoleName(ColumnRole role) {
  switch (role) {
    case ColumnRole::kFeature:
      return "feature";
    case ColumnRole::kTarget:
      return "target";
    case ColumnRole::kIdentifier:
      return "identifier";
  }
  return "feature";
}

ColumnKind ParseColumnKind(std::string_view text) {
  if (text == "numeric") return ColumnKind::kNumeric;
  if (text == "categorical") return ColumnKind::kCategorical;
  if (text == "binary") return ColumnKind::kBinary;
  throw DataError("unknown column kind '" + std::string(text) + "'");
}

ColumnRole ParseColumnRole(std::string_view text) {
  if (text == "feature") return ColumnRole::kFeature;
  if (text == "target") return ColumnRole::kTarget;
  if (text == "identifier") return ColumnRole::kIdentifier;
  throw DataError("unknown column role '" + std::string(text) + "'");
}

void ValidateSchema(const Schema& schema) {
  std::set<std::string> names;
  int targets = 0;
  for (const ColumnSchema& col : schema) {
    if (col.name.empty()) throw DataError("schema column with empty name");
    if (!names.insert(col.name).second) {
      throw DataError("duplicate column name '" + col.name + "' in schema");
    }
    if (col.role == ColumnRole::kTarget) {
      ++targets;
      if (col.kind != ColumnKind::kNumeric) {
        throw DataError("target column '" + col.name + "' must be numeric");
      }
    }
    if (col.kind == ColumnKind::kCategorical) {
      if (col.levels.empty()) {
        throw DataError("categorical column '" + col.name +
                        "' declares no levels");
      }
      std::set<std::string> levels(col.levels.begin(), col.levels.end());
      if (levels.size() != col.levels.size()) {
        throw DataError("categorical column '" + col.name +
                        "' declares duplicate levels");
      }
    }
  }
  if (targets != 1) {
    throw DataError("schema must have exactly one target column, found " +
                    std::to_string(targets));
  }
}

Dataset::Dataset(Schema schema, std::vector<Column> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
  ValidateSchema(schema_);
  if (columns_.size() != schema_.size()) {
    throw DataError("dataset has " + std::to_string(columns_.size()) +
                    " columns but schema declares " +
                    std::to_string(schema_.size()));
  }
  num_rows_ = columns_.front().missing.size();
  if (num_rows_ == 0) throw DataError("dataset has no rows");
  for (size_t c = 0; c < schema_.size(); ++c) {
    const ColumnSchema& cs = schema_[c];
    Column& col = columns_[c];
    if (cs.role == ColumnRole::kTarget) target_column_ = c;
    if (col.missing.size() != num_rows_) {
      throw DataError("column '" + cs.name + "' has inconsistent row count");
    }
    if (cs.role == ColumnRole::kIdentifier) {
      if (col.text.size() != num_rows_) {
        throw DataError("identifier column '" + cs.name + "' lacks text");
      }
      col.values.assign(num_rows_, 0.0);
      continue;
    }
    if (col.values.size() != num_rows_) {
      throw DataError("column '" + cs.name + "' has inconsistent row count");
    }
    col.text.clear();
    for (size_t r = 0; r < num_rows_; ++r) {
      if (col.missing[r]) {
        col.values[r] = 0.0;
        continue;
      }
      const double v = col.values[r];
      if (!std::isfinite(v)) {
        throw DataError("non-finite value in column '" + cs.name +
                        "' at row " + std::to_string(r + 1));
      }
      if (cs.kind == ColumnKind::kBinary && v != 0.0 && v != 1.0) {
        throw DataError("binary column '" + cs.name + "' holds " +
                        FormatDouble(v) + " at row " + std::to_string(r + 1));
      }
      if (cs.kind == ColumnKind::kCategorical &&
          (v < 0 || v >= static_cast<double>(cs.levels.size()) ||
           v != std::floor(v))) {
        throw DataError("categorical column '" + cs.name +
                        "' holds an invalid level index at row " +
                        std::to_string(r + 1));
      }
    }
  }
}

std::optional<size_t> Dataset::FindColumn(std::string_view name) const {
  for (size_t c = 0; c < schema_.size(); ++c) {
    if (schema_[c].name == name) return c;
  }
  return std::nullopt;
}

size_t Dataset::ColumnIndex(std::string_view name) const {
  if (auto c = FindColumn(name)) return *c;
  throw DataError("unknown column '" + std::string(name) + "'");
}

std::string Dataset::CellText(size_t row, size_t col) const {
  if (is_missing(row, col)) return "";
  const ColumnSchema& cs = schema_[col];
  switch (cs.role == ColumnRole::kIdentifier ? ColumnKind::kNumeric
                                             : cs.kind) {
    case ColumnKind::kCategorical:
      return cs.levels[static_cast<size_t>(value(row, col))];
    case ColumnKind::kBinary:
      return value(row, col) != 0.0 ? "1" : "0";
    case ColumnKind::kNumeric:
      break;
  }
  if (cs.role == ColumnRole::kIdentifier) return columns_[col].text[row];
  return FormatDouble(value(row, col));
}

Dataset Dataset::WithColumn(size_t col, Column column) const {
  std::vector<Column> columns = columns_;
  columns.at(col) = std::move(column);
  return Dataset(schema_, std::move(columns));
}

Dataset Dataset::SelectRows(std::span<const size_t> rows) const {
  std::vector<Column> columns(columns_.size());
  for (size_t c = 0; c < columns_.size(); ++c) {
    const Column& src = columns_[c];
    Column& dst = columns[c];
    for (size_t r : rows) {
      if (r >= num_rows_) throw DataError("row index out of range");
      dst.values.push_back(src.values[r]);
      dst.missing.push_back(src.missing[r]);
      if (!src.text.empty()) dst.text.push_back(src.text[r]);
    }
  }
  return Dataset(schema_, std::move(columns));
}

bool Dataset::operator==(const Dataset& other) const {
  if (num_rows_ != other.num_rows_ || schema_.size() != other.schema_.size())
    return false;
  for (size_t c = 0; c < schema_.size(); ++c) {
    const ColumnSchema& a = schema_[c];
    const ColumnSchema& b = other.schema_[c];
    if (a.name != b.name || a.kind != b.kind || a.role != b.role ||
        a.levels != b.levels || a.units != b.units)
      return false;
    const Column& x = columns_[c];
    const Column& y = other.columns_[c];
    if (x.missing != y.missing || x.values != y.values || x.text != y.text)
      return false;
  }
  return true;
}

DescriptiveStats Describe(const Dataset& ds) {
  DescriptiveStats stats;
  for (size_t c = 0; c < ds.num_columns(); ++c) {
    const ColumnSchema& cs = ds.column_schema(c);
    if (cs.role == ColumnRole::kIdentifier) continue;
    const Column& col = ds.column(c);
    if (cs.kind == ColumnKind::kNumeric) {
      NumericSummary s;
      s.name = cs.name;
      double sum = 0.0;
      double lo = INFINITY, hi = -INFINITY;
      for (size_t r = 0; r < ds.num_rows(); ++r) {
        if (col.missing[r]) continue;
        ++s.count;
        sum += col.values[r];
        lo = std::min(lo, col.values[r]);
        hi = std::max(hi, col.values[r]);
      }
      if (s.count > 0) {
        const double mean = sum / static_cast<double>(s.count);
        s.mean = mean;
        s.min = lo;
        s.max = hi;
        if (s.count > 1) {
          double ss = 0.0;
          for (size_t r = 0; r < ds.num_rows(); ++r) {
            if (!col.missing[r]) ss += (col.values[r] - mean) * (col.values[r] - mean);
          }
          s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
          if (mean != 0.0) s.cv = *s.std / mean;
        }
      }
      stats.numeric.push_back(std::move(s));
      continue;
    }
    CategoricalSummary s;
    s.name = cs.name;
    const std::vector<std::string> levels =
        cs.kind == ColumnKind::kBinary ? std::vector<std::string>{"0", "1"}
                                       : cs.levels;
    std::vector<size_t> counts(levels.size(), 0);
    for (size_t r = 0; r < ds.num_rows(); ++r) {
      if (col.missing[r]) continue;
      ++counts[static_cast<size_t>(col.values[r])];
      ++s.count;
    }
    for (size_t l = 0; l < levels.size(); ++l) {
      LevelFrequency f;
      f.level = levels[l];
      f.count = counts[l];
      f.percent = s.count > 0 ? 100.0 * static_cast<double>(counts[l]) /
                                    static_cast<double>(s.count)
                              : 0.0;
      s.levels.push_back(std::move(f));
    }
    stats.categorical.push_back(std::move(s));
  }
  return stats;
}

std::string FormatPercent(double ratio, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f%%", decimals, 100.0 * ratio);
  return buf;
}

namespace {

std::string Fixed(const std::optional<double>& v, int decimals = 4) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, *v);
  return buf;
}

}  // namespace

std::string NumericSummaryCsv(const DescriptiveStats& stats) {
  std::ostringstream out;
  out << "variable,count,mean,std,min,max,cv_percent\n";
  for (const NumericSummary& s : stats.numeric) {
    out << EscapeCsvField(s.name) << ',' << s.count << ',' << Fixed(s.mean)
        << ',' << Fixed(s.std) << ',' << Fixed(s.min) << ',' << Fixed(s.max)
        << ',' << (s.cv ? Fixed(*s.cv * 100.0, 2) : "") << '\n';
  }
  return out.str();
}

std::string CategoricalSummaryCsv(const DescriptiveStats& stats) {
  std::ostringstream out;
  out << "variable,level,frequency,percent\n";
  for (const CategoricalSummary& s : stats.categorical) {
    for (const LevelFrequency& f : s.levels) {
      out << EscapeCsvField(s.name) << ',' << EscapeCsvField(f.level) << ','
          << f.count << ',' << Fixed(f.percent, 2) << '\n';
    }
  }
  return out.str();
}

SplitIndices Split(size_t n, const SplitFractions& fractions, uint64_t seed) {
  const double total = fractions.train + fractions.validation + fractions.test;
  if (fractions.train <= 0 || fractions.validation <= 0 ||
      fractions.test <= 0 || std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("split fractions must be positive and sum to 1");
  }
  const auto n_train = static_cast<size_t>(
      std::floor(static_cast<double>(n) * fractions.train + 1e-9));
  const size_t rest = n - std::min(n, n_train);
  const double share =
      fractions.validation / (fractions.validation + fractions.test);
  const auto n_validation = std::min(
      rest, static_cast<size_t>(std::floor(static_cast<double>(rest) * share +
                                           0.5 + 1e-9)));
  const size_t n_test = rest - n_validation;
  if (n_train == 0 || n_validation == 0 || n_test == 0) {
    throw DataError("split of " + std::to_string(n) +
                    " rows leaves an empty partition (train " +
                    std::to_string(n_train) + ", validation " +
                    std::to_string(n_validation) + ", test " +
                    std::to_string(n_test) + ")");
  }
  Rng rng(seed);
  const std::vector<size_t> perm = RandomPermutation(n, rng);
  SplitIndices out;
  out.seed = seed;
  out.train.assign(perm.begin(), perm.begin() + n_train);
  out.validation.assign(perm.begin() + n_train,
                        perm.begin() + n_train + n_validation);
  out.test.assign(perm.begin() + n_train + n_validation, perm.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

double LinearQuantile(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

}  // namespace housebench
