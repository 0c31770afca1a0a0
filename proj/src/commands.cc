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


#include "housebench/commands.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "housebench/csv.h"
#include "housebench/errors.h"
#include "housebench/experiment.h"
#include "housebench/hedonic.h"
#include "housebench/svg.h"
#include "housebench/synthgen.h"

namespace housebench {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Runs `body`, translating exceptions into exit codes.
template <typename Body>
int Guard(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

void Write(const fs::path& path, std::string_view text, std::ostream& out) {
  WriteFile(path, text);
  out << "wrote " << path.string() << '\n';
}

bool HasFamily(const ExperimentPlan& plan, ModelFamily family) {
  return std::find(plan.models.begin(), plan.models.end(), family) != plan.models.end();
}

double ToPrice(const RunConfig& cfg, double v) {
  return cfg.plan.pipeline.target_transform == TargetTransform::kLog ? std::exp(v) : v;
}

std::vector<double> RawTrainValues(const Dataset& ds, const std::vector<size_t>& rows, size_t col) {
  std::vector<double> values;
  for (size_t r : rows) {
    if (!ds.is_missing(r, col)) values.push_back(ds.value(r, col));
  }
  return values;
}

ForestAnalysis AnalyzeArtifacts(const RunConfig& cfg, const Dataset& ds,
                                const RepeatArtifacts& art, bool with_pdp) {
  const auto it = art.models.find(ModelFamily::kRF);
  if (it == art.models.end()) throw ModelError("random forest failed on repeat 0");
  const TrainedModel& model = it->second;
  const PredictFn predict = model.AsPredictFn();
  ForestAnalysis result;
  if (cfg.analysis.importance_source == ImportanceSource::kOob) {
    result.importance = OobPermutationImportance(std::get<ForestFit>(model.state),
                                                 art.train.at(Coding::kFull),
                                                 cfg.analysis.importance_repeats, cfg.plan.base_seed);
  } else {
    result.importance = PermutationImportance(predict, art.validation.at(Coding::kFull),
                                              cfg.analysis.importance_repeats, cfg.plan.base_seed);
  }
  if (!with_pdp) return result;

  std::vector<std::string> features = cfg.analysis.pdp_features;
  if (features.empty()) {
    for (const FeatureImportance& fi : result.importance) {
      const FeatureFit* ff = art.pipeline.Find(fi.feature);
      if (ff && ff->kind == ColumnKind::kNumeric) features.push_back(fi.feature);
      if (features.size() == 3) break;
    }
  }
  const DesignMatrix& background = art.train.at(Coding::kFull);
  for (const std::string& name : features) {
    const FeatureFit* ff = art.pipeline.Find(name);
    if (!ff) throw ConfigError("PDP feature '" + name + "' is not a retained feature");
    if (ff->kind != ColumnKind::kNumeric) {
      result.curves.push_back(CategoricalPartialDependence(predict, background, name));
      continue;
    }
    std::vector<double> raw;
    const auto grid = cfg.analysis.pdp_grids.find(name);
    if (grid != cfg.analysis.pdp_grids.end()) {
      raw = grid->second;
    } else {
      const std::vector<double> values = RawTrainValues(ds, art.split.train, ff->column);
      raw = LinearGrid(LinearQuantile(values, cfg.analysis.pdp_lower_q),
                       LinearQuantile(values, cfg.analysis.pdp_upper_q), cfg.analysis.pdp_points);
    }
    std::vector<double> design;
    for (double v : raw) design.push_back(ToDesignScale(*ff, v, Coding::kFull));
    result.curves.push_back(PartialDependence(predict, background, name, design, raw));
  }
  return result;
}

void WriteForestAnalysis(const RunConfig& cfg, const ForestAnalysis& analysis, bool write_importance,
                         std::ostream& out) {
  const fs::path& dir = cfg.output.dir;
  if (write_importance) {
    Write(dir / "importance.csv", ImportanceCsv(analysis.importance), out);
    if (cfg.output.plots) {
      std::vector<std::string> labels;
      std::vector<double> values;
      for (const FeatureImportance& fi : analysis.importance) {
        labels.push_back(fi.feature);
        values.push_back(fi.importance);
      }
      Write(dir / "importance.svg",
            BarChartSvg(labels, values,
                        {"Permutation importance - random forest", "Increase in MSE", "", 720, 440, false}),
            out);
    }
  }
  for (const PdpCurve& curve : analysis.curves) {
    const std::string stem = "pdp_" + Slug(curve.feature);
    Write(dir / (stem + ".csv"), curve.ToCsv(), out);
    if (!cfg.output.plots) continue;
    Series s{curve.feature, {}, curve.predictions()};
    for (size_t i = 0; i < curve.points.size(); ++i) {
      s.x.push_back(curve.points[i].label.empty() ? curve.points[i].raw_value : static_cast<double>(i));
    }
    Write(dir / (stem + ".svg"),
          LineChartSvg({s}, {"Partial dependence - " + curve.feature, curve.feature,
                             "Mean predicted target", 720, 440, true}),
          out);
  }
}

ExperimentPlan ForestOnly(const ExperimentPlan& plan) {
  if (!HasFamily(plan, ModelFamily::kRF)) {
    throw ConfigError("importance and PDP need RF in experiment.models");
  }
  ExperimentPlan p = plan;
  p.models = {ModelFamily::kRF};
  p.repeats = 1;
  p.fixed_structure_rerun = false;
  return p;
}

std::string PredictionsCsv(const RunConfig& cfg, const ComparisonReport& report) {
  const PredictionSample& s = report.predictions;
  std::ostringstream out;
  out << "row_id,actual";
  for (const auto& [family, values] : s.predicted) out << ',' << FamilyName(family);
  out << '\n';
  for (size_t i = 0; i < s.row_ids.size(); ++i) {
    out << EscapeCsvField(s.row_ids[i]) << ',' << FormatDouble(ToPrice(cfg, s.actual[i]));
    for (const auto& [family, values] : s.predicted) out << ',' << FormatDouble(ToPrice(cfg, values[i]));
    out << '\n';
  }
  return out.str();
}

json WhiteTestJson(const WhiteTestResult& w) {
  return {{"statistic", w.statistic}, {"p_value", w.p_value},     {"df", w.df},
          {"aux_terms", w.aux_terms}, {"r_squared", w.r_squared}, {"dropped_terms", w.dropped_terms}};
}

}  // namespace

std::string Slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "feature" : out;
}

RunConfig ResolveConfig(const CommandOptions& options) {
  if (options.config.empty()) throw ConfigError("--config PATH is required");
  if (!fs::exists(options.config)) {
    throw ConfigError("config file '" + options.config.string() + "' does not exist");
  }
  RunConfig cfg = LoadRunConfig(options.config);
  if (options.seed) {
    cfg.plan.base_seed = *options.seed;
    if (cfg.data.synthetic) cfg.data.synthetic->seed = *options.seed;
  }
  if (options.out) cfg.output.dir = *options.out;
  if (options.no_plots) cfg.output.plots = false;
  return cfg;
}

ForestAnalysis AnalyzeForest(const RunConfig& cfg, const Dataset& ds, bool with_pdp) {
  RepeatArtifacts art;
  const ComparisonReport report = RunExperiment(ForestOnly(cfg.plan), ds, &art);
  if (report.has_failures()) throw ModelError(report.repeats.front().models.front().error);
  return AnalyzeArtifacts(cfg, ds, art, with_pdp);
}

int RunSynthesize(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const RunConfig cfg = ResolveConfig(options);
    if (!cfg.data.synthetic) throw ConfigError("synthesize needs a 'data.synthetic' section");
    const SyntheticData data = Generate(*cfg.data.synthetic);
    const fs::path& dir = cfg.output.dir;
    WriteDataset(data.dataset, dir / "synthetic.csv", dir / "synthetic_schema.json");
    out << "wrote " << (dir / "synthetic.csv").string() << " and "
        << (dir / "synthetic_schema.json").string() << '\n';
    Write(dir / "ground_truth.json", data.truth.ToJson().dump(2) + "\n", out);
    return 0;
  });
}

int RunDescribe(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const RunConfig cfg = ResolveConfig(options);
    const Dataset ds = LoadData(cfg.data);
    const DescriptiveStats stats = Describe(ds);
    const std::string numeric = NumericSummaryCsv(stats);
    const std::string categorical = CategoricalSummaryCsv(stats);
    out << numeric << '\n' << categorical;
    WriteFile(cfg.output.dir / "describe_numeric.csv", numeric);
    WriteFile(cfg.output.dir / "describe_categorical.csv", categorical);
    return 0;
  });
}

int RunPrepare(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const RunConfig cfg = ResolveConfig(options);
    const Dataset ds = LoadData(cfg.data);
    const SplitIndices split = Split(ds, cfg.plan.fractions, cfg.plan.base_seed);
    const PipelineFit fit = FitPipeline(ds, split.train, cfg.plan.pipeline);
    const fs::path& dir = cfg.output.dir;
    Write(dir / "pipeline.json", fit.ToJson().dump(2) + "\n", out);
    Write(dir / "split.json",
          json{{"seed", split.seed},
               {"train", split.train},
               {"validation", split.validation},
               {"test", split.test}}
                  .dump() + "\n",
          out);
    std::ostringstream screen;
    screen << "feature,status,reason,statistic\n";
    for (const DroppedFeature& d : fit.dropped) {
      screen << EscapeCsvField(d.name) << ",dropped," << d.reason << ',' << FormatDouble(d.statistic) << '\n';
    }
    for (const GroupVif& v : fit.vifs) {
      screen << EscapeCsvField(v.name) << ",retained,gvif_adjusted," << FormatDouble(v.adjusted) << '\n';
    }
    Write(dir / "screening.csv", screen.str(), out);
    out << "train/validation/test = " << split.train.size() << '/' << split.validation.size() << '/'
        << split.test.size() << "; pipeline " << fit.Fingerprint() << '\n';
    return 0;
  });
}

int RunCompare(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const RunConfig cfg = ResolveConfig(options);
    const Dataset ds = LoadData(cfg.data);
    RepeatArtifacts art;
    const ComparisonReport report = RunExperiment(cfg.plan, ds, &art);
    const fs::path& dir = cfg.output.dir;
    Write(dir / "report.json", report.ToJson().dump(2) + "\n", out);
    Write(dir / "metrics_table.csv", report.MetricsTableCsv(), out);
    Write(dir / "predictions.csv", PredictionsCsv(cfg, report), out);

    if (const auto hp = art.models.find(ModelFamily::kHP); hp != art.models.end()) {
      const OlsFit& ols = std::get<OlsFit>(hp->second.state);
      const DesignMatrix& x = art.train.at(Coding::kHedonic);
      const HcType hc = std::get<HedonicParams>(hp->second.params).hc;
      Write(dir / "hedonic_coefficients.csv", CoefficientTableCsv(ols, WhiteCovariance(ols, x.x, hc)),
            out);
      Write(dir / "white_test.json", WhiteTestJson(WhiteTest(ols, x.x, true)).dump(2) + "\n", out);
    }

    if (cfg.output.plots) {
      std::vector<Series> series;
      Series actual{"Actual", {}, {}};
      for (size_t i = 0; i < report.predictions.actual.size(); ++i) {
        actual.x.push_back(static_cast<double>(i + 1));
        actual.y.push_back(ToPrice(cfg, report.predictions.actual[i]));
      }
      series.push_back(actual);
      for (const auto& [family, values] : report.predictions.predicted) {
        Series s{FamilyName(family), actual.x, {}};
        for (double v : values) s.y.push_back(ToPrice(cfg, v));
        series.push_back(std::move(s));
      }
      Write(dir / "predicted_vs_actual.svg",
            LineChartSvg(series, {"Predicted vs actual - first test properties", "Property",
                                  "Price", 760, 440, true}),
            out);
      if (const auto ann = art.models.find(ModelFamily::kANN); ann != art.models.end()) {
        const TrainingHistory& h = std::get<NetworkState>(ann->second.state).history;
        Series train{"train loss", {}, h.train_loss};
        Series val{"validation MSE", {}, h.validation_loss};
        for (size_t e = 0; e < h.train_loss.size(); ++e) train.x.push_back(static_cast<double>(e + 1));
        val.x = train.x;
        Write(dir / "ann_loss_curve.csv", h.ToCsv(), out);
        Write(dir / "ann_loss_curve.svg",
              LineChartSvg({train, val}, {"ANN training history (repeat 0)", "Epoch", "Loss", 720,
                                          440, false}),
              out);
      }
    }
    if (art.models.count(ModelFamily::kRF)) {
      WriteForestAnalysis(cfg, AnalyzeArtifacts(cfg, ds, art, true), true, out);
    }

    for (const ModelSummary& s : report.summaries) {
      out << FamilyName(s.family) << ": test RMSE " << FormatDouble(s.test.rmse.mean) << " over "
          << s.successful_repeats << " repeats\n";
    }
    if (report.has_failures()) {
      for (const RepeatResult& r : report.repeats) {
        for (const ModelRepeatResult& m : r.models) {
          if (!m.ok) err << "error: " << m.error << '\n';
        }
      }
      return 3;
    }
    return 0;
  });
}

int RunImportance(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const RunConfig cfg = ResolveConfig(options);
    const Dataset ds = LoadData(cfg.data);
    const ForestAnalysis analysis = AnalyzeForest(cfg, ds, false);
    WriteForestAnalysis(cfg, analysis, true, out);
    out << ImportanceCsv(analysis.importance);
    return 0;
  });
}

int RunPdp(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const RunConfig cfg = ResolveConfig(options);
    const Dataset ds = LoadData(cfg.data);
    const ForestAnalysis analysis = AnalyzeForest(cfg, ds, true);
    WriteForestAnalysis(cfg, analysis, false, out);
    return 0;
  });
}

namespace {

// Numbers through `format`; strings such as "inf" pass through.
std::string Number(const json& v, const char* format) {
  if (!v.is_number()) return v.is_string() ? v.get<std::string>() : v.dump();
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v.get<double>());
  return buf;
}

}  // namespace

int RunReport(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const RunConfig cfg = ResolveConfig(options);
    const fs::path path = cfg.output.dir / "report.json";
    if (!fs::exists(path)) throw ConfigError("no report at '" + path.string() + "'; run compare first");
    json doc;
    try {
      doc = json::parse(ReadFile(path));
    } catch (const json::parse_error& e) {
      throw DataError("cannot parse '" + path.string() + "': " + e.what());
    }
    std::ostringstream md;
    md << "# Model comparison\n\n";
    md << "Repeats: " << doc.at("plan").at("repeats").get<int>()
       << ", base seed: " << doc.at("plan").at("base_seed").get<uint64_t>()
       << ", rows: " << doc.at("n_rows").get<size_t>() << ", target: "
       << doc.at("target_scale").get<std::string>() << "\n\n";
    md << "| Model | Test RMSE | Test MAE | Test MAPE (%) | Test R2 |\n|---|---|---|---|---|\n";
    auto cell = [](const json& s) {
      if (!s.at("mean").is_number()) return std::string("NA");
      std::ostringstream c;
      c.precision(4);
      c << std::fixed << s.at("mean").get<double>();
      if (s.at("std").is_number()) c << " (" << s.at("std").get<double>() << ")";
      return c.str();
    };
    for (const json& name : doc.at("plan").at("models")) {
      const std::string model = name.get<std::string>();
      const json& summary = doc.at("summaries").at(model);
      if (!summary.contains("test")) {
        md << "| " << model << " | failed | | | |\n";
        continue;
      }
      const json& t = summary.at("test");
      md << "| " << model << " | " << cell(t.at("rmse")) << " | " << cell(t.at("mae")) << " | "
         << cell(t.at("mape")) << " | " << cell(t.at("r2")) << " |\n";
    }
    for (const json& name : doc.at("plan").at("models")) {
      if (name.get<std::string>() != FamilyName(ModelFamily::kHP)) continue;
      md << "\nHedonic coefficients (hedonic_coefficients.csv) are per standard deviation of each "
            "standardized regressor; compare their signs and significance, not magnitudes, with "
            "coefficients estimated on raw units.\n";
    }
    md << "\n| A | B | Metric | t | p | pairs |\n|---|---|---|---|---|---|\n";
    for (const json& t : doc.at("paired_tests")) {
      md << "| " << t.at("a").get<std::string>() << " | " << t.at("b").get<std::string>() << " | "
         << t.at("metric").get<std::string>() << " | " << Number(t.at("t"), "%.3f") << " | "
         << Number(t.at("p_value"), "%.3g") << " | " << t.at("pairs").dump() << " |\n";
    }
    out << md.str();
    WriteFile(cfg.output.dir / "summary.md", md.str());
    return 0;
  });
}

}  // namespace housebench
