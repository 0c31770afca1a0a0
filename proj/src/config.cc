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


#include "housebench/config.h"

#include <initializer_list>

#include "housebench/csv.h"
#include "housebench/errors.h"

namespace housebench {

using nlohmann::json;

namespace {

void AllowKeys(const json& doc, const std::string& section,
               std::initializer_list<const char*> allowed) {
  if (!doc.is_object()) throw ConfigError("'" + section + "' must be an object");
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in '" + section + "'");
  }
}

template <typename T>
void Read(const json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

WinsorMode ParseWinsor(const std::string& mode) {
  if (mode == "none") return WinsorMode::kNone;
  if (mode == "upper") return WinsorMode::kUpper;
  if (mode == "two_sided") return WinsorMode::kTwoSided;
  throw ConfigError("unknown winsor mode '" + mode + "' (none, upper, two_sided)");
}

void ParseData(const json& doc, const std::filesystem::path& base, DataSource& data) {
  AllowKeys(doc, "data", {"csv", "schema", "synthetic"});
  const bool file = doc.contains("csv") || doc.contains("schema");
  const bool synthetic = doc.contains("synthetic");
  if (file == synthetic) {
    throw ConfigError("'data' needs exactly one source: csv + schema, or synthetic");
  }
  if (file) {
    if (!doc.contains("csv") || !doc.contains("schema")) {
      throw ConfigError("'data' needs both 'csv' and 'schema'");
    }
    data.csv = Resolve(base, doc.at("csv").get<std::string>());
    data.schema = Resolve(base, doc.at("schema").get<std::string>());
    return;
  }
  const json& s = doc.at("synthetic");
  AllowKeys(s, "data.synthetic", {"n", "seed", "noise_std", "missing_rate", "outlier_rate"});
  GeneratorConfig g;
  Read(s, "n", g.n);
  Read(s, "seed", g.seed);
  Read(s, "noise_std", g.noise_std);
  Read(s, "missing_rate", g.missing_rate);
  Read(s, "outlier_rate", g.outlier_rate);
  g.Validate();
  data.synthetic = g;
}

void ParsePipeline(const json& doc, PipelineOptions& p) {
  AllowKeys(doc, "pipeline",
            {"winsor", "winsor_upper_q", "winsor_lower_q", "screen", "r_threshold", "gvif_cutoff",
             "target_transform", "hedonic_log_features"});
  if (doc.contains("winsor")) p.winsor.mode = ParseWinsor(doc.at("winsor").get<std::string>());
  Read(doc, "winsor_upper_q", p.winsor.upper_q);
  Read(doc, "winsor_lower_q", p.winsor.lower_q);
  Read(doc, "screen", p.screen.enabled);
  Read(doc, "r_threshold", p.screen.r_threshold);
  Read(doc, "gvif_cutoff", p.screen.gvif_cutoff);
  Read(doc, "hedonic_log_features", p.hedonic_log_features);
  if (doc.contains("target_transform")) {
    const std::string t = doc.at("target_transform").get<std::string>();
    if (t == "log") {
      p.target_transform = TargetTransform::kLog;
    } else if (t == "none") {
      p.target_transform = TargetTransform::kNone;
    } else {
      throw ConfigError("unknown target_transform '" + t + "' (log, none)");
    }
  }
  if (!(p.winsor.lower_q >= 0 && p.winsor.lower_q < p.winsor.upper_q && p.winsor.upper_q <= 1)) {
    throw ConfigError("winsor quantiles must satisfy 0 <= lower < upper <= 1");
  }
}

std::map<ModelFamily, json> ParseFamilyMap(const json& doc, const std::string& section) {
  if (!doc.is_object()) throw ConfigError("'" + section + "' must be an object");
  std::map<ModelFamily, json> out;
  for (const auto& [key, value] : doc.items()) out[ParseFamily(key)] = value;
  return out;
}

void ParseExperiment(const json& doc, ExperimentPlan& plan) {
  AllowKeys(doc, "experiment",
            {"models", "repeats", "base_seed", "fractions", "fixed_structure_rerun", "threads",
             "prediction_rows", "search", "search_points", "grids", "params"});
  if (doc.contains("models")) {
    plan.models.clear();
    for (const std::string& name : doc.at("models").get<std::vector<std::string>>()) {
      plan.models.push_back(ParseFamily(name));
    }
  }
  Read(doc, "repeats", plan.repeats);
  Read(doc, "base_seed", plan.base_seed);
  Read(doc, "fixed_structure_rerun", plan.fixed_structure_rerun);
  Read(doc, "threads", plan.threads);
  Read(doc, "prediction_rows", plan.prediction_rows);
  Read(doc, "search_points", plan.search_points);
  if (doc.contains("search")) {
    const std::string mode = doc.at("search").get<std::string>();
    if (mode == "grid") {
      plan.search = SearchMode::kGrid;
    } else if (mode == "random") {
      plan.search = SearchMode::kRandom;
    } else {
      throw ConfigError("experiment.search must be 'grid' or 'random', got '" + mode + "'");
    }
  }
  if (doc.contains("fractions")) {
    const auto f = doc.at("fractions").get<std::vector<double>>();
    if (f.size() != 3) throw ConfigError("'fractions' needs three values");
    plan.fractions = {f[0], f[1], f[2]};
  }
  if (doc.contains("grids")) plan.grids = ParseFamilyMap(doc.at("grids"), "experiment.grids");
  if (doc.contains("params")) {
    plan.base_params = ParseFamilyMap(doc.at("params"), "experiment.params");
  }
}

void ParseAnalysis(const json& doc, AnalysisOptions& a) {
  AllowKeys(doc, "analysis",
            {"importance_repeats", "importance_source", "pdp_points", "pdp_features", "pdp_grids",
             "pdp_lower_q", "pdp_upper_q"});
  Read(doc, "importance_repeats", a.importance_repeats);
  if (doc.contains("importance_source")) {
    const std::string src = doc.at("importance_source").get<std::string>();
    if (src == "validation") {
      a.importance_source = ImportanceSource::kValidation;
    } else if (src == "oob") {
      a.importance_source = ImportanceSource::kOob;
    } else {
      throw ConfigError("analysis.importance_source must be 'validation' or 'oob', got '" + src + "'");
    }
  }
  Read(doc, "pdp_points", a.pdp_points);
  Read(doc, "pdp_features", a.pdp_features);
  Read(doc, "pdp_grids", a.pdp_grids);
  Read(doc, "pdp_lower_q", a.pdp_lower_q);
  Read(doc, "pdp_upper_q", a.pdp_upper_q);
  if (a.importance_repeats < 1) throw ConfigError("importance_repeats must be at least 1");
  if (a.pdp_points < 2) throw ConfigError("pdp_points must be at least 2");
  if (!(a.pdp_lower_q >= 0 && a.pdp_lower_q < a.pdp_upper_q && a.pdp_upper_q <= 1)) {
    throw ConfigError("pdp quantiles must satisfy 0 <= lower < upper <= 1");
  }
}

}  // namespace

RunConfig ParseRunConfig(const json& doc, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  try {
    AllowKeys(doc, "config", {"data", "pipeline", "experiment", "analysis", "output"});
    if (!doc.contains("data")) throw ConfigError("config needs a 'data' section");
    ParseData(doc.at("data"), base_dir, cfg.data);
    if (doc.contains("pipeline")) ParsePipeline(doc.at("pipeline"), cfg.plan.pipeline);
    if (doc.contains("experiment")) ParseExperiment(doc.at("experiment"), cfg.plan);
    if (doc.contains("analysis")) ParseAnalysis(doc.at("analysis"), cfg.analysis);
    if (doc.contains("output")) {
      const json& o = doc.at("output");
      AllowKeys(o, "output", {"dir", "plots"});
      if (o.contains("dir")) cfg.output.dir = Resolve(base_dir, o.at("dir").get<std::string>());
      Read(o, "plots", cfg.output.plots);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
  cfg.plan.Validate();
  return cfg;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse config " + path.string() + ": " + e.what());
  }
  return ParseRunConfig(doc, path.parent_path());
}

Dataset LoadData(const DataSource& source) {
  if (source.synthetic) return Generate(*source.synthetic).dataset;
  return LoadCsv(source.csv, source.schema);
}

}  // namespace housebench
