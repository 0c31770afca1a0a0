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

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "housebench/csv.h"
#include "housebench/errors.h"
#include "housebench/synthgen.h"
#include "test_util.h"

namespace housebench {
namespace {

using testing::SmallSchema;

const std::string kHeader = "id,price,area,age,Region,pool\n";

std::vector<size_t> All(const Dataset& ds) {
  std::vector<size_t> v(ds.num_rows());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

PipelineOptions NoWinsor() {
  PipelineOptions o;
  o.winsor.mode = WinsorMode::kNone;
  o.hedonic_log_features = {};
  return o;
}

TEST(ImputeTest, NumericMean) {
  const Dataset ds = ParseDataset(kHeader + "1,1,2,1,North,1\n2,1,,2,North,1\n3,1,4,3,North,0\n", SmallSchema());
  const Dataset out = Impute(ds, All(ds));
  const size_t c = ds.ColumnIndex("area");
  EXPECT_FALSE(out.is_missing(1, c));
  EXPECT_DOUBLE_EQ(out.value(1, c), 3.0);
}

TEST(ImputeTest, BinaryMode) {
  const Dataset ds = ParseDataset(
      kHeader + "1,1,1,1,North,1\n2,1,1,1,North,1\n3,1,1,1,North,0\n4,1,1,1,North,\n", SmallSchema());
  EXPECT_EQ(Impute(ds, All(ds)).value(3, ds.ColumnIndex("pool")), 1.0);
}

TEST(ImputeTest, ModeTieGoesToSmallestLevelName) {
  const Dataset ds = ParseDataset(
      kHeader + "1,1,1,1,South,1\n2,1,1,1,East,1\n3,1,1,1,South,0\n4,1,1,1,East,1\n5,1,1,1,,1\n",
      SmallSchema());
  const size_t c = ds.ColumnIndex("Region");
  EXPECT_EQ(Impute(ds, All(ds)).CellText(4, c), "East");
}

TEST(ImputeTest, UsesTrainingRowsOnly) {
  const Dataset ds = ParseDataset(kHeader + "1,1,2,1,North,1\n2,1,,2,North,1\n3,1,100,3,North,0\n",
                                  SmallSchema());
  const std::vector<size_t> train = {0, 1};
  EXPECT_DOUBLE_EQ(Impute(ds, train).value(1, ds.ColumnIndex("area")), 2.0);
}

TEST(ImputeTest, EntirelyMissingColumnNamed) {
  const Dataset ds = ParseDataset(kHeader + "1,1,,1,North,1\n2,1,,2,North,1\n", SmallSchema());
  try {
    Impute(ds, All(ds));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("area"), std::string::npos);
  }
}

Dataset OneToTwenty() {
  std::string csv = kHeader;
  for (int i = 1; i <= 20; ++i) csv += std::to_string(i) + ",1," + std::to_string(i) + ",5,North,1\n";
  return ParseDataset(csv, SmallSchema());
}

TEST(WinsorizeTest, UpperCapAtInterpolatedQuantile) {
  const Dataset ds = OneToTwenty();
  const Dataset out = Winsorize(ds, All(ds));
  const size_t c = ds.ColumnIndex("area");
  EXPECT_NEAR(out.value(19, c), 19.05, 1e-12);
  EXPECT_EQ(out.value(18, c), 19.0);
  EXPECT_EQ(out.value(0, c), 1.0);
  // Constant column untouched.
  EXPECT_EQ(out.value(19, ds.ColumnIndex("age")), 5.0);
}

TEST(WinsorizeTest, TwoSidedCapsBothTails) {
  const Dataset ds = OneToTwenty();
  WinsorOptions o;
  o.mode = WinsorMode::kTwoSided;
  const Dataset out = Winsorize(ds, All(ds), o);
  const size_t c = ds.ColumnIndex("area");
  EXPECT_NEAR(out.value(0, c), 1.95, 1e-12);
  EXPECT_NEAR(out.value(19, c), 19.05, 1e-12);
}

TEST(WinsorizeTest, ValueAtThresholdUnchanged) {
  const Dataset ds = ParseDataset(kHeader + "1,1,1,1,North,1\n2,1,2,1,North,1\n3,1,2,1,North,1\n", SmallSchema());
  const WinsorCaps caps = FitWinsorCaps(ds, ds.ColumnIndex("area"), All(ds), {});
  EXPECT_EQ(*caps.upper, 2.0);
  EXPECT_EQ(Winsorize(ds, All(ds)).value(2, ds.ColumnIndex("area")), 2.0);
}

TEST(CorrelationTest, HandValues) {
  Eigen::MatrixXd m(4, 3);
  m << 1, 1, 4, 2, 3, 3, 3, 2, 2, 4, 4, 1;
  const CorrelationResult r = CorrelationMatrix(m);
  EXPECT_EQ(r.r(0, 0), 1.0);
  EXPECT_NEAR(r.r(0, 1), 0.8, 1e-12);
  EXPECT_NEAR(r.r(0, 2), -1.0, 1e-12);
  EXPECT_NEAR(r.r(1, 0), r.r(0, 1), 0.0);
}

TEST(CorrelationTest, ConstantColumnFlagged) {
  Eigen::MatrixXd m(3, 2);
  m << 1, 5, 2, 5, 3, 5;
  const CorrelationResult r = CorrelationMatrix(m);
  EXPECT_TRUE(r.constant[1]);
  EXPECT_FALSE(r.constant[0]);
  EXPECT_TRUE(std::isnan(r.r(0, 1)));
}

PredictorGroup Numeric(const std::string& name, const Eigen::VectorXd& v) {
  return {name, true, v};
}

TEST(ScreenTest, OrthogonalPredictorsHaveUnitVif) {
  Eigen::VectorXd a(4), b(4);
  a << 1, -1, 1, -1;
  b << 1, 1, -1, -1;
  const ScreenResult s = ScreenMulticollinearity({Numeric("a", a), Numeric("b", b)}, {});
  EXPECT_TRUE(s.dropped.empty());
  ASSERT_EQ(s.final_vifs.size(), 2u);
  EXPECT_NEAR(s.final_vifs[0].gvif, 1.0, 1e-12);
  EXPECT_NEAR(s.final_vifs[1].gvif, 1.0, 1e-12);
}

TEST(ScreenTest, ModerateCorrelationVif) {
  Eigen::VectorXd a(4), b(4);
  a << 1, -1, 1, -1;
  b << 1, 1, -1, -1;
  const Eigen::VectorXd c = 0.6 * a + 0.8 * b;
  const ScreenResult s = ScreenMulticollinearity({Numeric("a", a), Numeric("c", c)}, {});
  EXPECT_TRUE(s.dropped.empty());
  for (const GroupVif& v : s.final_vifs) {
    EXPECT_NEAR(v.gvif, 1.0 / (1.0 - 0.36), 1e-12);
    EXPECT_NEAR(v.adjusted, 1.25, 1e-12);
  }
}

TEST(ScreenTest, DuplicatedColumnIsSingularWhenPairwiseScreenOff) {
  std::mt19937_64 gen(1);
  const Eigen::MatrixXd m = testing::RandomMatrix(30, 2, gen);
  ScreenOptions o;
  o.r_threshold = 1.5;
  const ScreenResult s =
      ScreenMulticollinearity({Numeric("x", m.col(0)), Numeric("z", m.col(1)), Numeric("x copy", m.col(0))}, o);
  ASSERT_EQ(s.dropped.size(), 1u);
  EXPECT_EQ(s.dropped[0].name, "x copy");
  EXPECT_EQ(s.dropped[0].reason, "singular");
}

TEST(ScreenTest, PairwiseScreenDropsMemberWithLargerMeanCorrelation) {
  std::mt19937_64 gen(2);
  const Eigen::MatrixXd m = testing::RandomMatrix(200, 3, gen);
  const Eigen::VectorXd x1 = m.col(0);
  const Eigen::VectorXd x2 = m.col(0) + 0.2 * m.col(1);  // also tied to x3
  const Eigen::VectorXd x3 = m.col(1) + 0.5 * m.col(2);
  const ScreenResult s =
      ScreenMulticollinearity({Numeric("x1", x1), Numeric("x2", x2), Numeric("x3", x3)}, {});
  ASSERT_FALSE(s.dropped.empty());
  EXPECT_EQ(s.dropped[0].name, "x2");
  EXPECT_EQ(s.dropped[0].reason, "correlation");
}

TEST(ScreenTest, ConstantPredictorDropped) {
  Eigen::VectorXd a(4), k = Eigen::VectorXd::Constant(4, 3.0);
  a << 1, 2, 3, 5;
  const ScreenResult s = ScreenMulticollinearity({Numeric("a", a), Numeric("k", k)}, {});
  ASSERT_EQ(s.dropped.size(), 1u);
  EXPECT_EQ(s.dropped[0].reason, "constant");
}

// VIF of a single column equals 1 / (1 - R^2) of its regression on the rest.
TEST(ScreenTest, NumericGvifMatchesRegressionVif) {
  std::mt19937_64 gen(3);
  Eigen::MatrixXd m = testing::RandomMatrix(100, 4, gen);
  m.col(1) += 0.5 * m.col(0);
  m.col(3) += 0.4 * m.col(1) - 0.3 * m.col(2);
  std::vector<PredictorGroup> groups;
  for (int j = 0; j < 4; ++j) groups.push_back(Numeric("x" + std::to_string(j), m.col(j)));
  const ScreenResult s = ScreenMulticollinearity(groups, {});
  ASSERT_EQ(s.final_vifs.size(), 4u);
  for (int j = 0; j < 4; ++j) {
    Eigen::MatrixXd others(100, 4);
    others.col(0).setOnes();
    int k = 1;
    for (int i = 0; i < 4; ++i) {
      if (i != j) others.col(k++) = m.col(i);
    }
    const Eigen::VectorXd y = m.col(j);
    const Eigen::VectorXd beta = (others.transpose() * others).inverse() * others.transpose() * y;
    const double sse = (y - others * beta).squaredNorm();
    const double sst = (y.array() - y.mean()).square().sum();
    EXPECT_NEAR(s.final_vifs[static_cast<size_t>(j)].gvif, 1.0 / (sse / sst), 1e-9);
  }
}

// Categorical group: GVIF = det(R11) det(R22) / det(R), checked directly.
TEST(ScreenTest, CategoricalGvifDeterminantRatio) {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> level(0, 2);
  const Eigen::Index n = 150;
  Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(n, 2);
  Eigen::VectorXd x(n);
  std::normal_distribution<double> normal;
  for (Eigen::Index r = 0; r < n; ++r) {
    const int l = level(gen);
    if (l > 0) ind(r, l - 1) = 1.0;
    x(r) = 0.8 * l + normal(gen);
  }
  const ScreenResult s = ScreenMulticollinearity({Numeric("x", x), {"cat", false, ind}}, {});
  ASSERT_EQ(s.final_vifs.size(), 2u);
  Eigen::MatrixXd all(n, 3);
  all << x, ind;
  const Eigen::MatrixXd centered = all.rowwise() - all.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered;
  const Eigen::VectorXd d = cov.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd r = d.asDiagonal() * cov * d.asDiagonal();
  const double gvif = r(0, 0) * r.block(1, 1, 2, 2).determinant() / r.determinant();
  EXPECT_NEAR(s.final_vifs[0].gvif, gvif, 1e-9);
  EXPECT_NEAR(s.final_vifs[1].gvif, gvif, 1e-9);
  EXPECT_NEAR(s.final_vifs[1].adjusted, std::pow(gvif, 1.0 / 4.0), 1e-9);
}

TEST(ScreenTest, HighGvifDroppedIteratively) {
  std::mt19937_64 gen(5);
  const Eigen::MatrixXd m = testing::RandomMatrix(300, 4, gen);
  std::vector<PredictorGroup> groups;
  for (int j = 0; j < 3; ++j) groups.push_back(Numeric("x" + std::to_string(j), m.col(j)));
  // Near-sum of the others: pairwise r ~ 0.58, below the pairwise threshold.
  groups.push_back(Numeric("sum", m.leftCols(3).rowwise().sum() + 0.3 * m.col(3)));
  const ScreenResult s = ScreenMulticollinearity(groups, {});
  ASSERT_FALSE(s.dropped.empty());
  EXPECT_EQ(s.dropped[0].reason, "gvif");
  for (const GroupVif& v : s.final_vifs) EXPECT_LE(v.adjusted, std::sqrt(5.0));
}

Dataset RegionDataset() {
  return ParseDataset(kHeader +
                          "1,100,1,10,Central,1\n2,200,2,20,North,0\n3,300,3,30,South,1\n"
                          "4,400,1.5,15,East,0\n5,500,2.5,25,Gunbarrel,1\n6,896332,2,5,Rural,0\n",
                      SmallSchema());
}

TEST(DesignTest, StandardizedNumericAndIndicators) {
  const Dataset ds = ParseDataset(kHeader + "1,100,1,10,Central,1\n2,200,2,20,North,0\n3,300,3,40,North,1\n",
                                  SmallSchema());
  PipelineOptions o = NoWinsor();
  o.screen.enabled = false;
  const PipelineFit fit = FitPipeline(ds, All(ds), o);
  const DesignMatrix dm = BuildDesign(ds, All(ds), fit, Coding::kFull);
  const auto area = dm.FeatureColumns("area");
  ASSERT_EQ(area.size(), 1u);
  EXPECT_NEAR(dm.x(0, area[0]), -1.0, 1e-15);
  EXPECT_NEAR(dm.x(1, area[0]), 0.0, 1e-15);
  EXPECT_NEAR(dm.x(2, area[0]), 1.0, 1e-15);
  EXPECT_NEAR(dm.y(2), std::log(300.0), 1e-15);
}

TEST(DesignTest, FullAndHedonicRegionCoding) {
  const Dataset ds = RegionDataset();
  PipelineOptions o = NoWinsor();
  o.screen.enabled = false;
  const PipelineFit fit = FitPipeline(ds, All(ds), o);
  const DesignMatrix full = BuildDesign(ds, All(ds), fit, Coding::kFull);
  const auto cols = full.FeatureColumns("Region");
  ASSERT_EQ(cols.size(), 6u);
  const std::vector<double> north_full = {0, 1, 0, 0, 0, 0};
  for (size_t k = 0; k < 6; ++k) EXPECT_EQ(full.x(1, cols[k]), north_full[k]);

  const DesignMatrix hed = BuildDesign(ds, All(ds), fit, Coding::kHedonic);
  EXPECT_TRUE(hed.has_intercept);
  EXPECT_EQ(hed.columns[0].label, "(Intercept)");
  const auto hcols = hed.FeatureColumns("Region");
  ASSERT_EQ(hcols.size(), 5u);
  EXPECT_EQ(hed.columns[static_cast<size_t>(hcols[0])].level, "North");
  const std::vector<double> north_hed = {1, 0, 0, 0, 0};
  for (size_t k = 0; k < 5; ++k) EXPECT_EQ(hed.x(1, hcols[k]), north_hed[k]);
  for (size_t k = 0; k < 5; ++k) EXPECT_EQ(hed.x(0, hcols[k]), 0.0);
  EXPECT_NEAR(hed.y(5), 13.706, 5e-4);
}

TEST(DesignTest, NonPositivePriceRejected) {
  const Dataset ds = ParseDataset(kHeader + "1,100,1,10,Central,1\n2,0,2,20,North,0\n3,300,3,40,North,1\n",
                                  SmallSchema());
  EXPECT_THROW(
      {
        const PipelineFit fit = FitPipeline(ds, All(ds), NoWinsor());
        BuildDesign(ds, All(ds), fit, Coding::kFull);
      },
      DataError);
}

TEST(DesignTest, ZeroStdRetainedColumnRejected) {
  const Dataset ds = ParseDataset(kHeader + "1,100,1,10,Central,1\n2,200,1,20,North,0\n3,300,1,40,North,1\n",
                                  SmallSchema());
  PipelineOptions o = NoWinsor();
  o.screen.enabled = false;
  EXPECT_THROW(
      {
        const PipelineFit fit = FitPipeline(ds, All(ds), o);
        BuildDesign(ds, All(ds), fit, Coding::kFull);
      },
      DataError);
}

class SyntheticPipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    GeneratorConfig g;
    g.n = 600;
    g.seed = 21;
    g.missing_rate = 0.05;
    g.outlier_rate = 0.02;
    ds_ = Generate(g).dataset;
    split_ = Split(*ds_, {}, 3);
    fit_ = FitPipeline(*ds_, split_.train, {});
  }
  std::optional<Dataset> ds_;
  SplitIndices split_;
  PipelineFit fit_;
};

TEST_F(SyntheticPipelineTest, TrainColumnsStandardized) {
  const DesignMatrix dm = BuildDesign(*ds_, split_.train, fit_, Coding::kFull);
  for (const FeatureFit& f : fit_.features) {
    if (f.kind != ColumnKind::kNumeric) continue;
    const Eigen::VectorXd c = dm.x.col(dm.FeatureColumns(f.name)[0]);
    EXPECT_NEAR(c.mean(), 0.0, 1e-10) << f.name;
    EXPECT_NEAR(std::sqrt((c.array() - c.mean()).square().sum() / (c.size() - 1)), 1.0, 1e-10) << f.name;
  }
  EXPECT_TRUE(dm.x.allFinite());
}

TEST_F(SyntheticPipelineTest, OneHotRowsSumToOne) {
  const DesignMatrix dm = BuildDesign(*ds_, split_.test, fit_, Coding::kFull);
  for (const FeatureFit& f : fit_.features) {
    if (f.kind != ColumnKind::kCategorical) continue;
    const auto cols = dm.FeatureColumns(f.name);
    for (Eigen::Index r = 0; r < dm.num_rows(); ++r) {
      double sum = 0.0;
      for (Eigen::Index c : cols) sum += dm.x(r, c);
      ASSERT_EQ(sum, 1.0) << f.name;
    }
  }
}

TEST_F(SyntheticPipelineTest, ApplyingDoesNotChangeFitAndIsIdempotent) {
  const std::string before = fit_.Fingerprint();
  const DesignMatrix a = BuildDesign(*ds_, split_.validation, fit_, Coding::kHedonic);
  const DesignMatrix b = BuildDesign(*ds_, split_.validation, fit_, Coding::kHedonic);
  EXPECT_EQ(fit_.Fingerprint(), before);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.labels(), b.labels());
}

TEST_F(SyntheticPipelineTest, FitIgnoresNonTrainingRows) {
  // Rewriting a held-out row leaves the fitted statistics unchanged.
  const size_t held_out = split_.test.front();
  const size_t c = ds_->ColumnIndex(cols::kLivingArea);
  Column col = ds_->column(c);
  col.values[held_out] = 1e6;
  const Dataset altered = ds_->WithColumn(c, col);
  EXPECT_EQ(FitPipeline(altered, split_.train, {}).Fingerprint(), fit_.Fingerprint());
}

TEST_F(SyntheticPipelineTest, JsonRoundTrip) {
  const PipelineFit back = PipelineFit::FromJson(fit_.ToJson());
  EXPECT_EQ(back.Fingerprint(), fit_.Fingerprint());
  EXPECT_EQ(BuildDesign(*ds_, split_.test, back, Coding::kHedonic).x,
            BuildDesign(*ds_, split_.test, fit_, Coding::kHedonic).x);
}

TEST_F(SyntheticPipelineTest, ScreenRemovesRedundantColumns) {
  std::vector<std::string> dropped;
  for (const DroppedFeature& d : fit_.dropped) dropped.push_back(d.name);
  EXPECT_FALSE(dropped.empty());
  for (const GroupVif& v : fit_.vifs) EXPECT_LE(v.adjusted, std::sqrt(5.0) + 1e-12) << v.name;
  // The single-level school rank is constant and never enters the design.
  EXPECT_EQ(fit_.Find(cols::kHSchoolRank), nullptr);
}

}  // namespace
}  // namespace housebench
