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


#include "housebench/models.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "housebench/errors.h"

namespace housebench {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string HcName(HcType hc) { return hc == HcType::kHC0 ? "HC0" : "HC1"; }

HcType ParseHc(const std::string& name) {
  if (name == "HC0") return HcType::kHC0;
  if (name == "HC1") return HcType::kHC1;
  throw ConfigError("unknown covariance type '" + name + "' (expected HC0 or HC1)");
}

void CheckKeys(ModelFamily family, const json& doc, bool allow_seed) {
  if (!doc.is_object()) throw ConfigError(FamilyName(family) + " parameters must be an object");
  const std::vector<std::string>& keys = TunableKeys(family);
  for (const auto& [key, value] : doc.items()) {
    if (allow_seed && key == "seed") continue;
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown " + FamilyName(family) + " hyperparameter '" + key + "'");
    }
  }
}

void ValidateParams(const HyperParams& params) {
  std::visit(Overloaded{[](const HedonicParams&) {},
                        [](const auto& cfg) { cfg.Validate(); }},
             params);
}

json MatrixRows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string FamilyName(ModelFamily family) {
  switch (family) {
    case ModelFamily::kHP: return "HP";
    case ModelFamily::kANN: return "ANN";
    case ModelFamily::kRF: return "RF";
    case ModelFamily::kKNN: return "KNN";
  }
  return "HP";
}

ModelFamily ParseFamily(const std::string& name) {
  for (ModelFamily f : kAllFamilies) {
    if (FamilyName(f) == name) return f;
  }
  throw ConfigError("unknown model family '" + name + "' (expected HP, ANN, RF or KNN)");
}

Coding FamilyCoding(ModelFamily family) {
  return family == ModelFamily::kHP ? Coding::kHedonic : Coding::kFull;
}

ModelFamily FamilyOf(const HyperParams& params) {
  return static_cast<ModelFamily>(params.index());
}

HyperParams DefaultParams(ModelFamily family) {
  switch (family) {
    case ModelFamily::kHP: return HedonicParams{};
    case ModelFamily::kANN: return NetworkConfig{};
    case ModelFamily::kRF: return ForestConfig{};
    case ModelFamily::kKNN: return KnnConfig{};
  }
  return HedonicParams{};
}

const std::vector<std::string>& TunableKeys(ModelFamily family) {
  static const std::map<ModelFamily, std::vector<std::string>> keys = {
      {ModelFamily::kHP, {"hc"}},
      {ModelFamily::kANN,
       {"hidden_layers", "units_per_layer", "l2_lambda", "learning_rate", "max_epochs",
        "batch_size", "early_stop_patience"}},
      {ModelFamily::kRF, {"n_trees", "mtry", "max_depth", "min_leaf", "bootstrap", "num_threads"}},
      {ModelFamily::kKNN, {"k", "distance", "p"}},
  };
  return keys.at(family);
}

json ParamsToJson(const HyperParams& params) {
  return std::visit(Overloaded{[](const HedonicParams& p) { return json{{"hc", HcName(p.hc)}}; },
                               [](const auto& cfg) { return cfg.ToJson(); }},
                    params);
}

HyperParams ParamsFromJson(ModelFamily family, const json& doc) {
  CheckKeys(family, doc, family == ModelFamily::kANN || family == ModelFamily::kRF);
  try {
    switch (family) {
      case ModelFamily::kHP: {
        HedonicParams p;
        if (doc.contains("hc")) p.hc = ParseHc(doc.at("hc").get<std::string>());
        return p;
      }
      case ModelFamily::kANN: return NetworkConfig::FromJson(doc);
      case ModelFamily::kRF: return ForestConfig::FromJson(doc);
      case ModelFamily::kKNN: return KnnConfig::FromJson(doc);
    }
  } catch (const json::exception& e) {
    throw ConfigError(FamilyName(family) + " hyperparameters: " + e.what());
  }
  return HedonicParams{};
}

std::vector<HyperParams> ExpandGrid(ModelFamily family, const json& grid, const json& base) {
  CheckKeys(family, base, true);
  std::vector<json> points = {base};
  if (!grid.is_null()) {
    CheckKeys(family, grid, false);
    for (const auto& [key, values] : grid.items()) {
      const json list = values.is_array() ? values : json::array({values});
      if (list.empty()) throw ConfigError("grid for '" + key + "' has no values");
      std::vector<json> next;
      for (const json& point : points) {
        for (const json& v : list) {
          json p = point;
          p[key] = v;
          next.push_back(std::move(p));
        }
      }
      points = std::move(next);
    }
  }
  std::vector<HyperParams> out;
  for (const json& p : points) {
    HyperParams params = ParamsFromJson(family, p);
    ValidateParams(params);
    out.push_back(std::move(params));
  }
  return out;
}

AveragedParams AverageParams(ModelFamily family, const std::vector<HyperParams>& chosen) {
  if (chosen.empty()) throw ConfigError("no hyperparameters to average");
  std::vector<json> docs;
  for (const HyperParams& p : chosen) docs.push_back(ParamsToJson(p));
  json raw = json::object();
  json rounded = json::object();
  for (const auto& [key, first] : docs.front().items()) {
    if (key == "seed") continue;
    if (first.is_number() && !first.is_boolean()) {
      double sum = 0.0;
      for (const json& d : docs) sum += d.at(key).get<double>();
      const double mean = sum / static_cast<double>(docs.size());
      raw[key] = mean;
      if (first.is_number_integer()) {
        rounded[key] = static_cast<int64_t>(std::llround(mean));
      } else {
        rounded[key] = mean;
      }
    } else {
      // Most frequent value, first seen on ties.
      std::vector<std::pair<json, int>> counts;
      for (const json& d : docs) {
        auto it = std::find_if(counts.begin(), counts.end(),
                               [&](const auto& c) { return c.first == d.at(key); });
        if (it == counts.end()) {
          counts.emplace_back(d.at(key), 1);
        } else {
          ++it->second;
        }
      }
      const auto best = std::max_element(
          counts.begin(), counts.end(),
          [](const auto& a, const auto& b) { return a.second < b.second; });
      raw[key] = best->first;
      rounded[key] = best->first;
    }
  }
  HyperParams params = ParamsFromJson(family, rounded);
  ValidateParams(params);
  return {raw, params};
}

Eigen::VectorXd TrainedModel::Predict(const Eigen::MatrixXd& x) const {
  return std::visit(Overloaded{[&](const OlsFit& s) { return PredictOls(s, x); },
                               [&](const NetworkState& s) { return Forward(s, x); },
                               [&](const ForestFit& s) { return PredictForest(s, x); },
                               [&](const KnnFit& s) { return PredictKnn(s, x); }},
                    state);
}

PredictFn TrainedModel::AsPredictFn() const {
  return [this](const Eigen::MatrixXd& x) { return Predict(x); };
}

json TrainedModel::ToJson() const {
  json state_json = std::visit(
      Overloaded{[](const KnnFit& s) {
                   return json{{"config", s.config.ToJson()},
                               {"x", MatrixRows(s.x)},
                               {"y", std::vector<double>(s.y.data(), s.y.data() + s.y.size())}};
                 },
                 [](const auto& s) { return s.ToJson(); }},
      state);
  return {{"family", FamilyName(family())}, {"params", ParamsToJson(params)}, {"state", state_json}};
}

TrainedModel TrainModel(const HyperParams& params, const DesignMatrix& train,
                        const DesignMatrix& validation, uint64_t seed) {
  ValidateParams(params);
  return std::visit(
      Overloaded{
          [&](const HedonicParams& p) { return TrainedModel{p, FitOls(train)}; },
          [&](NetworkConfig cfg) {
            cfg.seed = seed;
            return TrainedModel{cfg, TrainNetwork(cfg, train, validation)};
          },
          [&](ForestConfig cfg) {
            cfg.seed = seed;
            return TrainedModel{cfg, FitForest(train, cfg)};
          },
          [&](const KnnConfig& cfg) { return TrainedModel{cfg, FitKnn(train, cfg)}; }},
      params);
}

}  // namespace housebench
