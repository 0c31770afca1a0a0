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

#include "housebench/synthgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "housebench/errors.h"
#include "housebench/random.h"

namespace housebench {

namespace {

const std::vector<std::string> kRegions = {"Central", "North",     "South",
                                           "East",    "Gunbarrel", "Rural"};
const std::vector<std::string> kRanks = {"A", "B", "C"};
const std::vector<std::string> kBedrooms = {"0", "1", "2", "3",
                                            "4", "5", "6", "7"};
const std::vector<std::string> kTypes = {"Condominium", "Town-Home",
                                         "Single Family"};
const std::vector<std::string> kCrime = {"1", "2", "3"};

// Level proportions from the reference descriptive tables.
const std::map<std::string, std::vector<double>>& Marginals() {
  static const auto* m = new std::map<std::string, std::vector<double>>{
      {cols::kPool, {0.6464, 0.3536}},
      {cols::kSolar, {0.7112, 0.2888}},
      {cols::kESchoolRank, {0.3281, 0.5383, 0.1336}},
      {cols::kMSchoolRank, {0.1228, 0.6218, 0.2554}},
      {cols::kHSchoolRank, {1.0}},
      {cols::kRegion, {0.2259, 0.2338, 0.1405, 0.1965, 0.1228, 0.0806}},
      {cols::kBedrooms,
       {0.0029, 0.0707, 0.2485, 0.2800, 0.2446, 0.1248, 0.0265, 0.0020}},
      {cols::kPropertyType, {0.3183, 0.0884, 0.5933}},
      {cols::kCrime, {0.0806, 0.4961, 0.4234}},
  };
  return *m;
}

double Clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

ColumnSchema Numeric(const char* name, const char* units,
                     ColumnRole role = ColumnRole::kFeature) {
  return ColumnSchema{name, ColumnKind::kNumeric, role, {}, units};
}

ColumnSchema Categorical(const char* name, std::vector<std::string> levels) {
  return ColumnSchema{name, ColumnKind::kCategorical, ColumnRole::kFeature,
                      std::move(levels), ""};
}

ColumnSchema Binary(const char* name) {
  return ColumnSchema{name, ColumnKind::kBinary, ColumnRole::kFeature,
                      {"0", "1"}, ""};
}

}  // namespace

void GeneratorConfig::Validate() const {
  if (n < 50) throw ConfigError("generator row count must be at least 50");
  if (!(noise_std >= 0)) throw ConfigError("noise_std must be non-negative");
  if (!(missing_rate >= 0 && missing_rate < 1)) {
    throw ConfigError("missing_rate must lie in [0, 1)");
  }
  if (!(outlier_rate >= 0 && outlier_rate < 1)) {
    throw ConfigError("outlier_rate must lie in [0, 1)");
  }
}

double GroundTruth::AgeEffect(double age) const {
  const double z = (age - 50.0) / 50.0;
  return age_linear * std::abs(z) + age_quadratic * z * z;
}

double GroundTruth::LogPrice(const Inputs& in) const {
  double lp = intercept;
  lp += living_slope * region_living_scale[in.region] *
        std::log(in.living_area / 2000.0);
  lp += region_shift[in.region];
  lp += cbd_coef * std::log(1.0 + in.drive_to_cbd / cbd_scale);
  lp += AgeEffect(in.age);
  lp += crime_shift[in.crime] + type_shift[in.property_type];
  lp += e_school_shift[in.e_school] + m_school_shift[in.m_school];
  lp += full_bath_coef * in.full_baths +
        three_quarter_coef * in.three_quarter_baths +
        parking_coef * in.parking + solar_coef * in.solar +
        pool_coef * in.pool;
  lp += lot_coef * std::log(1.0 + in.lot_area / 1000.0);
  return lp;
}

double GroundTruth::Evaluate(const Dataset& ds, size_t row) const {
  auto get = [&](const char* name) {
    const size_t c = ds.ColumnIndex(name);
    if (ds.is_missing(row, c)) {
      throw DataError(std::string("ground truth needs '") + name +
                      "' but row " + std::to_string(row + 1) +
                      " is missing it");
    }
    return ds.value(row, c);
  };
  Inputs in;
  in.living_area = get(cols::kLivingArea);
  in.lot_area = get(cols::kLotArea);
  in.age = get(cols::kAge);
  in.drive_to_cbd = get(cols::kDriveCbd);
  in.full_baths = get(cols::kFullBaths);
  in.three_quarter_baths = get(cols::kThreeQuarterBaths);
  in.parking = get(cols::kParking);
  in.solar = get(cols::kSolar);
  in.pool = get(cols::kPool);
  in.region = static_cast<size_t>(get(cols::kRegion));
  in.crime = static_cast<size_t>(get(cols::kCrime));
  in.property_type = static_cast<size_t>(get(cols::kPropertyType));
  in.e_school = static_cast<size_t>(get(cols::kESchoolRank));
  in.m_school = static_cast<size_t>(get(cols::kMSchoolRank));
  return LogPrice(in);
}

nlohmann::json GroundTruth::ToJson() const {
  return {
      {"target", "ln(House Price)"},
      {"formula",
       "intercept + living_slope*region_living_scale[Region]*ln(Living "
       "Area/2000) + region_shift[Region] + cbd_coef*ln(1 + Drive to "
       "CBD/cbd_scale) + age_linear*|Age-50|/50 + "
       "age_quadratic*((Age-50)/50)^2 + crime_shift[Crime] + "
       "type_shift[Property Type] + e_school_shift[E rank] + "
       "m_school_shift[M rank] + full_bath_coef*Full + "
       "three_quarter_coef*ThreeQuarter + parking_coef*Parking + "
       "solar_coef*Solar + pool_coef*Pool + lot_coef*ln(1 + Lot Area/1000) + "
       "N(0, noise_std^2)"},
      {"intercept", intercept},
      {"living_slope", living_slope},
      {"region_levels", kRegions},
      {"region_living_scale", region_living_scale},
      {"region_shift", region_shift},
      {"cbd_coef", cbd_coef},
      {"cbd_scale", cbd_scale},
      {"age_linear", age_linear},
      {"age_quadratic", age_quadratic},
      {"age_minimum", 50.0},
      {"crime_shift", crime_shift},
      {"type_levels", kTypes},
      {"type_shift", type_shift},
      {"e_school_shift", e_school_shift},
      {"m_school_shift", m_school_shift},
      {"full_bath_coef", full_bath_coef},
      {"three_quarter_coef", three_quarter_coef},
      {"parking_coef", parking_coef},
      {"solar_coef", solar_coef},
      {"pool_coef", pool_coef},
      {"lot_coef", lot_coef},
  };
}

Schema SyntheticSchema() {
  return {
      ColumnSchema{cols::kId, ColumnKind::kNumeric, ColumnRole::kIdentifier,
                   {}, ""},
      Numeric(cols::kPrice, "USD", ColumnRole::kTarget),
      Numeric(cols::kLotArea, "sqft"),
      Numeric(cols::kLivingArea, "sqft"),
      Numeric(cols::kAge, "years"),
      Numeric(cols::kFullBaths, "count"),
      Numeric(cols::kHalfBaths, "count"),
      Numeric(cols::kThreeQuarterBaths, "count"),
      Numeric(cols::kParking, "spaces"),
      Numeric(cols::kHoaFees, "USD/year"),
      Numeric(cols::kDriveCbd, "minutes"),
      Numeric(cols::kWalkESchool, "minutes"),
      Numeric(cols::kWalkMSchool, "minutes"),
      Numeric(cols::kWalkHSchool, "minutes"),
      Numeric(cols::kMarried, "percent"),
      Numeric(cols::kIncome, "USD"),
      Numeric(cols::kPopulation, "persons"),
      Binary(cols::kPool),
      Binary(cols::kSolar),
      Categorical(cols::kESchoolRank, kRanks),
      Categorical(cols::kMSchoolRank, kRanks),
      Categorical(cols::kHSchoolRank, {"A"}),
      Categorical(cols::kRegion, kRegions),
      Categorical(cols::kBedrooms, kBedrooms),
      Categorical(cols::kPropertyType, kTypes),
      Categorical(cols::kCrime, kCrime),
  };
}

std::vector<double> SyntheticMarginals(const std::string& column) {
  auto it = Marginals().find(column);
  if (it == Marginals().end()) {
    throw DataError("no configured marginal for column '" + column + "'");
  }
  return it->second;
}

SyntheticData Generate(const GeneratorConfig& cfg) {
  cfg.Validate();
  const Schema schema = SyntheticSchema();
  std::map<std::string, size_t> index;
  for (size_t c = 0; c < schema.size(); ++c) index[schema[c].name] = c;

  std::vector<Column> columns(schema.size());
  for (Column& col : columns) {
    col.values.assign(cfg.n, 0.0);
    col.missing.assign(cfg.n, 0);
  }
  columns[index[cols::kId]].text.resize(cfg.n);
  auto set = [&](const char* name, size_t row, double v) {
    columns[index.at(name)].values[row] = v;
  };

  const GroundTruth truth;
  std::vector<double> signals(cfg.n);
  std::vector<double> log_prices(cfg.n);

  Rng rng(cfg.seed);
  for (size_t r = 0; r < cfg.n; ++r) {
    char id[32];
    std::snprintf(id, sizeof(id), "P%05zu", r + 1);
    columns[index[cols::kId]].text[r] = id;

    GroundTruth::Inputs in;
    auto draw = [&](const char* name) {
      const size_t level = rng.Categorical(Marginals().at(name));
      set(name, r, static_cast<double>(level));
      return level;
    };
    const size_t pool = draw(cols::kPool);
    const size_t solar = draw(cols::kSolar);
    in.e_school = draw(cols::kESchoolRank);
    in.m_school = draw(cols::kMSchoolRank);
    draw(cols::kHSchoolRank);
    in.region = draw(cols::kRegion);
    const size_t bedrooms = draw(cols::kBedrooms);
    in.property_type = draw(cols::kPropertyType);
    in.crime = draw(cols::kCrime);
    in.pool = static_cast<double>(pool);
    in.solar = static_cast<double>(solar);

    static constexpr double kTypeSize[] = {-0.15, 0.0, 0.15};
    in.living_area = Clamp(
        std::round(std::exp(std::log(450.0 + 420.0 * bedrooms) +
                            kTypeSize[in.property_type] + rng.Normal(0, 0.25))),
        416, 10354);
    in.age = Clamp(std::round(rng.Normal(43.0, 21.0)), 1, 98);

    double lot = 0.0;
    switch (in.property_type) {
      case 0:
        lot = rng.Uniform() < 0.7 ? 0.0 : std::exp(rng.Normal(std::log(2000.0), 0.6));
        break;
      case 1:
        lot = std::exp(rng.Normal(std::log(2500.0), 0.5));
        break;
      default:
        lot = std::exp(rng.Normal(std::log(8000.0), 0.6)) *
              (in.region == 5 ? 5.0 : 1.0);
        break;
    }
    if (cfg.outlier_rate > 0 && rng.Uniform() < cfg.outlier_rate) {
      lot = std::max(lot, 1000.0) * rng.Uniform(5.0, 20.0);
    }
    in.lot_area = std::round(lot);

    in.full_baths = Clamp(std::round(0.5 + 0.35 * bedrooms + rng.Normal(0, 0.5)), 0, 3);
    const double half = static_cast<double>(rng.Categorical({0.60, 0.38, 0.02}));
    in.three_quarter_baths = static_cast<double>(rng.Categorical({0.48, 0.40, 0.12}));
    in.parking = Clamp(
        std::round(1.2 + (in.property_type == 2 ? 0.5 : 0.0) + rng.Normal(0, 0.6)),
        0, 3);
    double hoa = 0.0;
    if (in.property_type == 0) {
      hoa = rng.Uniform(1500, 7113);
    } else if (in.property_type == 1) {
      hoa = rng.Uniform(800, 4000);
    } else if (rng.Uniform() < 0.2) {
      hoa = rng.Uniform(100, 1500);
    }

    static constexpr double kRegionDrive[] = {3, 8, 9, 11, 17, 21};
    in.drive_to_cbd = Clamp(std::round(kRegionDrive[in.region] + rng.Normal(0, 2.5)), 1, 26);
    const double walk_e = Clamp(std::round(2 + 1.6 * in.drive_to_cbd + rng.Normal(0, 8)), 2, 68);
    const double walk_m = Clamp(std::round(2 + 2.6 * in.drive_to_cbd + rng.Normal(0, 12)), 2, 96);
    const double walk_h = Clamp(std::round(1.15 * walk_m + 4 + rng.Normal(0, 6)), 4, 122);
    const double income = Clamp(std::round(rng.Normal(61137.0, 20891.0)), 19985, 96406);
    const double married = Clamp(
        std::round(10.0 * (9.9 + 60.4 * (income - 19985.0) / (96406.0 - 19985.0) +
                           rng.Normal(0, 5))) / 10.0,
        9.9, 70.3);
    const double population = std::round(rng.Uniform(888, 99081));

    set(cols::kLotArea, r, in.lot_area);
    set(cols::kLivingArea, r, in.living_area);
    set(cols::kAge, r, in.age);
    set(cols::kFullBaths, r, in.full_baths);
    set(cols::kHalfBaths, r, half);
    set(cols::kThreeQuarterBaths, r, in.three_quarter_baths);
    set(cols::kParking, r, in.parking);
    set(cols::kHoaFees, r, std::round(hoa));
    set(cols::kDriveCbd, r, in.drive_to_cbd);
    set(cols::kWalkESchool, r, walk_e);
    set(cols::kWalkMSchool, r, walk_m);
    set(cols::kWalkHSchool, r, walk_h);
    set(cols::kMarried, r, married);
    set(cols::kIncome, r, income);
    set(cols::kPopulation, r, population);

    const double signal = truth.LogPrice(in);
    const double noise = cfg.noise_std > 0 ? rng.Normal(0.0, cfg.noise_std) : 0.0;
    signals[r] = signal;
    log_prices[r] = signal + noise;
    set(cols::kPrice, r, std::exp(log_prices[r]));

    if (cfg.missing_rate > 0) {
      for (const char* name : {cols::kLotArea, cols::kSolar, cols::kPool}) {
        if (rng.Uniform() < cfg.missing_rate) {
          columns[index.at(name)].missing[r] = 1;
        }
      }
    }
  }
  return SyntheticData{Dataset(schema, std::move(columns)), truth,
                       std::move(signals), std::move(log_prices)};
}

}  // namespace housebench
