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

#include "housebench/hedonic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "housebench/csv.h"
#include "housebench/errors.h"
#include "housebench/stats.h"

namespace housebench {

using nlohmann::json;

namespace {

constexpr double kRankTolerance = 1e-10;

std::string ColumnName(const std::vector<std::string>& names, Eigen::Index c) {
  if (static_cast<size_t>(c) < names.size()) return names[static_cast<size_t>(c)];
  return "column " + std::to_string(c);
}

bool IsIndicator(const Eigen::VectorXd& col) {
  return (col.array() == 0.0 || col.array() == 1.0).all();
}

}  // namespace

OlsFit FitOls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
              std::vector<std::string> names) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (y.size() != n) throw ModelError("OLS design and response lengths differ");
  if (p == 0) throw ModelError("OLS design has no columns");
  if (n <= p) {
    throw ModelError("OLS needs more rows than columns (n = " + std::to_string(n) +
                     ", p = " + std::to_string(p) + ")");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(kRankTolerance);
  if (qr.rank() < p) {
    std::string dependent;
    for (Eigen::Index k = qr.rank(); k < p; ++k) {
      if (!dependent.empty()) dependent += ", ";
      dependent += "'" + ColumnName(names, qr.colsPermutation().indices()(k)) + "'";
    }
    throw ModelError("design is rank deficient (rank " + std::to_string(qr.rank()) +
                     " of " + std::to_string(p) + "); dependent columns: " + dependent);
  }
  OlsFit fit;
  fit.names = std::move(names);
  fit.beta = qr.solve(y);
  fit.fitted = x * fit.beta;
  fit.residuals = y - fit.fitted;
  fit.df_resid = n - p;

  // X P = Q R  =>  (X'X)^-1 = P R^-1 R^-T P'.
  const Eigen::MatrixXd r =
      qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd permuted = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  fit.xtx_inverse = perm * permuted * perm.transpose();
  return fit;
}

OlsFit FitOls(const DesignMatrix& dm) { return FitOls(dm.x, dm.y, dm.labels()); }

RobustInference WhiteCovariance(const OlsFit& fit, const Eigen::MatrixXd& x,
                                HcType type) {
  if (x.rows() != fit.residuals.size() || x.cols() != fit.beta.size()) {
    throw ModelError("White covariance needs the design the model was fit on");
  }
  const Eigen::VectorXd e2 = fit.residuals.array().square();
  const Eigen::MatrixXd meat = x.transpose() * e2.asDiagonal() * x;
  RobustInference inf;
  inf.covariance = fit.xtx_inverse * meat * fit.xtx_inverse;
  if (type == HcType::kHC1) {
    inf.covariance *= static_cast<double>(x.rows()) / static_cast<double>(fit.df_resid);
  }
  inf.covariance = 0.5 * (inf.covariance + inf.covariance.transpose()).eval();
  inf.std_errors = inf.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  inf.t_stats = fit.beta.cwiseQuotient(inf.std_errors);
  inf.p_values.resize(fit.beta.size());
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    inf.p_values(j) = NormalTwoSidedP(inf.t_stats(j));
  }
  return inf;
}

WhiteTestResult WhiteTest(const OlsFit& fit, const Eigen::MatrixXd& x,
                          bool has_intercept, int max_cross_terms) {
  const Eigen::Index n = x.rows();
  if (fit.residuals.size() != n) {
    throw ModelError("White test needs the design the model was fit on");
  }
  std::vector<Eigen::Index> regressors;
  for (Eigen::Index c = has_intercept ? 1 : 0; c < x.cols(); ++c) regressors.push_back(c);

  std::vector<Eigen::VectorXd> terms;
  std::vector<std::string> labels;
  terms.push_back(Eigen::VectorXd::Ones(n));
  labels.push_back("(Intercept)");
  for (Eigen::Index c : regressors) {
    terms.push_back(x.col(c));
    labels.push_back(ColumnName(fit.names, c));
  }
  for (Eigen::Index c : regressors) {
    if (IsIndicator(x.col(c))) continue;
    terms.push_back(x.col(c).array().square());
    labels.push_back(ColumnName(fit.names, c) + "^2");
  }
  std::vector<Eigen::Index> by_variance = regressors;
  auto variance = [&](Eigen::Index c) {
    const double mean = x.col(c).mean();
    return (x.col(c).array() - mean).square().sum();
  };
  std::stable_sort(by_variance.begin(), by_variance.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return variance(a) > variance(b); });
  if (static_cast<int>(by_variance.size()) > max_cross_terms) {
    by_variance.resize(static_cast<size_t>(max_cross_terms));
  }
  std::sort(by_variance.begin(), by_variance.end());
  for (size_t i = 0; i < by_variance.size(); ++i) {
    for (size_t j = i + 1; j < by_variance.size(); ++j) {
      terms.push_back(x.col(by_variance[i]).cwiseProduct(x.col(by_variance[j])));
      labels.push_back(ColumnName(fit.names, by_variance[i]) + " x " +
                       ColumnName(fit.names, by_variance[j]));
    }
  }

  const auto total = static_cast<Eigen::Index>(terms.size());
  Eigen::MatrixXd aux(n, total);
  for (Eigen::Index k = 0; k < total; ++k) aux.col(k) = terms[static_cast<size_t>(k)];

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(aux);
  qr.setThreshold(kRankTolerance);
  const Eigen::Index rank = qr.rank();
  WhiteTestResult result;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < rank; ++k) keep.push_back(qr.colsPermutation().indices()(k));
  std::sort(keep.begin(), keep.end());
  for (Eigen::Index k = rank; k < total; ++k) {
    result.dropped_terms.push_back(labels[static_cast<size_t>(qr.colsPermutation().indices()(k))]);
  }
  if (n <= rank) {
    throw ModelError("White test auxiliary design has " + std::to_string(rank) +
                     " terms for " + std::to_string(n) + " rows");
  }
  const Eigen::MatrixXd reduced = aux(Eigen::all, keep);
  const Eigen::VectorXd e2 = fit.residuals.array().square();
  const Eigen::VectorXd coef = reduced.colPivHouseholderQr().solve(e2);
  const Eigen::VectorXd resid = e2 - reduced * coef;
  const double sst = (e2.array() - e2.mean()).square().sum();
  result.aux_terms = static_cast<int>(rank);
  result.df = static_cast<int>(rank) - 1;
  result.r_squared = sst > 0 ? std::max(0.0, 1.0 - resid.squaredNorm() / sst) : 0.0;
  result.statistic = static_cast<double>(n) * result.r_squared;
  result.p_value = result.df > 0 ? ChiSquaredSurvival(result.statistic, result.df) : 1.0;
  return result;
}

Eigen::VectorXd PredictOls(const OlsFit& fit, const Eigen::MatrixXd& x) {
  if (x.cols() != fit.beta.size()) {
    throw ModelError("OLS prediction expects " + std::to_string(fit.beta.size()) +
                     " columns, got " + std::to_string(x.cols()));
  }
  return x * fit.beta;
}

std::string SignificanceStars(double p_value) {
  if (p_value < 0.01) return "***";
  if (p_value < 0.05) return "**";
  if (p_value < 0.1) return "*";
  return "";
}

std::string CoefficientTableCsv(const OlsFit& fit, const RobustInference& inf) {
  std::ostringstream out;
  out << "term,coefficient,robust_std_error,t_statistic,p_value,significance\n";
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    out << EscapeCsvField(ColumnName(fit.names, j)) << ',' << FormatDouble(fit.beta(j))
        << ',' << FormatDouble(inf.std_errors(j)) << ',' << FormatDouble(inf.t_stats(j))
        << ',' << FormatDouble(inf.p_values(j)) << ',' << SignificanceStars(inf.p_values(j))
        << '\n';
  }
  return out.str();
}

json OlsFit::ToJson() const {
  return {{"version", 1},
          {"names", names},
          {"beta", std::vector<double>(beta.data(), beta.data() + beta.size())}};
}

OlsFit OlsFit::FromJson(const json& doc) {
  OlsFit fit;
  try {
    fit.names = doc.at("names").get<std::vector<std::string>>();
    const auto beta = doc.at("beta").get<std::vector<double>>();
    fit.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(),
                                                 static_cast<Eigen::Index>(beta.size()));
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed OLS artifact: ") + e.what());
  }
  return fit;
}

}  // namespace housebench
