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

#ifndef HOUSEBENCH_SYNTHGEN_H_
#define HOUSEBENCH_SYNTHGEN_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "housebench/data_model.h"
#include "json.hpp"

namespace housebench {

// Column names of the synthetic housing schema.
namespace cols {
inline constexpr char kId[] = "Property ID";
inline constexpr char kPrice[] = "House Price";
inline constexpr char kLotArea[] = "Lot Area";
inline constexpr char kLivingArea[] = "Living Area";
inline constexpr char kAge[] = "Age";
inline constexpr char kFullBaths[] = "Number of Full Bathrooms";
inline constexpr char kHalfBaths[] = "Number of Half Bathrooms";
inline constexpr char kThreeQuarterBaths[] = "Number of 3/4 Bathrooms";
inline constexpr char kParking[] = "Parking";
inline constexpr char kHoaFees[] = "HOA Fees";
inline constexpr char kDriveCbd[] = "Drive to CBD";
inline constexpr char kWalkESchool[] = "Walk to E.School";
inline constexpr char kWalkMSchool[] = "Walk to M.School";
inline constexpr char kWalkHSchool[] = "Walk to H.School";
inline constexpr char kMarried[] = "Married";
inline constexpr char kIncome[] = "Median Household Inc.";
inline constexpr char kPopulation[] = "Neighborhood's Population";
inline constexpr char kPool[] = "Pool, Bath tub, Sauna, or Jacuzzi";
inline constexpr char kSolar[] = "Solar Power";
inline constexpr char kESchoolRank[] = "Nearest E.School Rank";
inline constexpr char kMSchoolRank[] = "Nearest M.School Rank";
inline constexpr char kHSchoolRank[] = "Nearest H.School Rank";
inline constexpr char kRegion[] = "Region";
inline constexpr char kBedrooms[] = "Number of Bedrooms";
inline constexpr char kPropertyType[] = "Property Type";
inline constexpr char kCrime[] = "Neighborhood's Crime Level";
}  // namespace cols

struct GeneratorConfig {
  size_t n = 1018;
  uint64_t seed = 0;
  // Gaussian noise on the log-price scale.
  double noise_std = 0.2;
  // Applied independently to Lot Area, Solar Power and the pool column.
  double missing_rate = 0.0;
  // Rows whose Lot Area receives an upper-tail multiplicative shock.
  double outlier_rate = 0.0;

  void Validate() const;
};

// Noise-free log-price as a function of the generated attributes:
//
//   intercept
//   + living_slope * region_living_scale[region] * ln(living / 2000)
//   + region_shift[region]
//   + cbd_coef * ln(1 + drive / cbd_scale)
//   + age_linear * |age - 50| / 50 + age_quadratic * ((age - 50) / 50)^2
//   + crime_shift[crime] + type_shift[type]
//   + e_school_shift[rank] + m_school_shift[rank]
//   + full_bath_coef * full + three_quarter_coef * three_quarter
//   + parking_coef * parking + solar_coef * solar + pool_coef * pool
//   + lot_coef * ln(1 + lot / 1000)
//
// The age term is U-shaped with its minimum at 50 years and the living-area
// slope varies by region, so a linear hedonic design is misspecified.
struct GroundTruth {
  double intercept = 13.45;
  double living_slope = 0.75;
  std::array<double, 6> region_living_scale = {1.6, 1.2, 1.0, 0.8, 0.5, 0.3};
  std::array<double, 6> region_shift = {0.0, -0.30, -0.30, -0.44, -0.43, -0.64};
  double cbd_coef = -0.45;
  double cbd_scale = 4.0;
  double age_linear = 0.9;
  double age_quadratic = 0.3;
  std::array<double, 3> crime_shift = {-0.20, -0.06, 0.0};
  std::array<double, 3> type_shift = {0.0, 0.05, 0.12};
  std::array<double, 3> e_school_shift = {0.0, -0.06, -0.20};
  std::array<double, 3> m_school_shift = {0.0, -0.10, -0.12};
  double full_bath_coef = 0.05;
  double three_quarter_coef = 0.04;
  double parking_coef = 0.03;
  double solar_coef = 0.08;
  double pool_coef = 0.02;
  double lot_coef = 0.04;

  struct Inputs {
    double living_area = 0;
    double lot_area = 0;
    double age = 0;
    double drive_to_cbd = 0;
    double full_baths = 0;
    double three_quarter_baths = 0;
    double parking = 0;
    double solar = 0;
    double pool = 0;
    size_t region = 0;
    size_t crime = 0;
    size_t property_type = 0;
    size_t e_school = 0;
    size_t m_school = 0;
  };

  double LogPrice(const Inputs& in) const;
  double AgeEffect(double age) const;
  // Reads the inputs from a generated row. Throws DataError when any input
  // cell is missing.
  double Evaluate(const Dataset& ds, size_t row) const;
  nlohmann::json ToJson() const;
};

struct SyntheticData {
  Dataset dataset;
  GroundTruth truth;
  // Noise-free log-price per row and the noisy log-price that was
  // exponentiated into the target column.
  std::vector<double> signal;
  std::vector<double> log_price;
};

Schema SyntheticSchema();

// Level marginals (proportions) used for each categorical/binary column, in
// declared level order.
std::vector<double> SyntheticMarginals(const std::string& column);

SyntheticData Generate(const GeneratorConfig& cfg);

}  // namespace housebench

#endif  // HOUSEBENCH_SYNTHGEN_H_
