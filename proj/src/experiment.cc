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


#include "housebench/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "housebench/csv.h"
#include "housebench/errors.h"
#include "housebench/random.h"

namespace housebench {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string WinsorModeName(WinsorMode mode) {
  switch (mode) {
    case WinsorMode::kNone: return "none";
    case WinsorMode::kUpper: return "upper";
    case WinsorMode::kTwoSided: return "two_sided";
  }
  return "none";
}

double Mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& y) {
  return (pred - y).squaredNorm() / static_cast<double>(y.size());
}

struct SearchOutcome {
  GridSearchResult search;
  TrainedModel model;
};

SearchOutcome SearchAndKeep(const std::vector<HyperParams>& grid, const DesignMatrix& train,
                            const DesignMatrix& validation, uint64_t seed) {
  if (grid.empty()) throw ConfigError("hyperparameter grid is empty");
  GridSearchResult result;
  std::optional<TrainedModel> best;
  for (size_t i = 0; i < grid.size(); ++i) {
    try {
      TrainedModel model = TrainModel(grid[i], train, validation, seed);
      const double mse = Mse(model.Predict(validation.x), validation.y);
      if (!std::isfinite(mse)) throw ModelError("non-finite validation MSE");
      result.scores.push_back(mse);
      if (!best || mse < result.validation_mse) {
        result.best_index = i;
        result.validation_mse = mse;
        best = std::move(model);
      }
    } catch (const std::exception& e) {
      result.scores.push_back(kNaN);
      result.warnings.push_back("grid point " + std::to_string(i) + " " +
                                ParamsToJson(grid[i]).dump() + " skipped: " + e.what());
    }
  }
  if (!best) {
    std::string detail = result.warnings.empty() ? "" : " (" + result.warnings.back() + ")";
    throw ModelError("every grid point failed" + detail);
  }
  result.best = best->params;
  return {std::move(result), std::move(*best)};
}

// Split, pipeline and designs of one repeat.
struct PreparedRepeat {
  SplitIndices split;
  PipelineFit pipeline;
  std::map<Coding, DesignMatrix> train;
  std::map<Coding, DesignMatrix> validation;
  std::map<Coding, DesignMatrix> test;
};

PreparedRepeat Prepare(const ExperimentPlan& plan, const Dataset& ds, int repeat) {
  PreparedRepeat p;
  p.split = Split(ds, plan.fractions, plan.base_seed + static_cast<uint64_t>(repeat));
  p.pipeline = FitPipeline(ds, p.split.train, plan.pipeline);
  for (ModelFamily family : plan.models) {
    const Coding coding = FamilyCoding(family);
    if (p.train.count(coding)) continue;
    p.train.emplace(coding, BuildDesign(ds, p.split.train, p.pipeline, coding));
    p.validation.emplace(coding, BuildDesign(ds, p.split.validation, p.pipeline, coding));
    p.test.emplace(coding, BuildDesign(ds, p.split.test, p.pipeline, coding));
  }
  return p;
}

std::string Context(const ExperimentPlan& plan, int repeat) {
  return "repeat " + std::to_string(repeat) + " (split seed " +
         std::to_string(plan.base_seed + static_cast<uint64_t>(repeat)) + ")";
}

// Runs `task(i)` for i in [0, count) on up to `threads` workers.
template <typename Task>
void ParallelFor(int count, int threads, Task task) {
  const int workers = std::max(1, std::min(count, threads));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

PartitionSummary Summarize(const std::vector<MetricSet>& sets) {
  auto summary = [&](double MetricSet::*field) {
    std::vector<double> v;
    for (const MetricSet& m : sets) v.push_back(m.*field);
    return Summary{Mean(v), SampleStd(v)};
  };
  return {summary(&MetricSet::rmse), summary(&MetricSet::mae), summary(&MetricSet::mape),
          summary(&MetricSet::r2)};
}

json SummaryJson(const Summary& s) { return {{"mean", s.mean}, {"std", s.std}}; }

json PartitionJson(const PartitionSummary& p) {
  return {{"rmse", SummaryJson(p.rmse)},
          {"mae", SummaryJson(p.mae)},
          {"mape", SummaryJson(p.mape)},
          {"r2", SummaryJson(p.r2)}};
}

std::string Fixed(double v, int decimals) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace

json PipelineOptionsToJson(const PipelineOptions& o) {
  return {{"winsor", {{"mode", WinsorModeName(o.winsor.mode)},
                      {"upper_q", o.winsor.upper_q},
                      {"lower_q", o.winsor.lower_q}}},
          {"screen", {{"enabled", o.screen.enabled},
                      {"r_threshold", o.screen.r_threshold},
                      {"gvif_cutoff", o.screen.gvif_cutoff}}},
          {"target_transform", o.target_transform == TargetTransform::kLog ? "log" : "none"},
          {"hedonic_log_features", o.hedonic_log_features}};
}

void ExperimentPlan::Validate() const {
  if (models.empty()) throw ConfigError("model roster is empty");
  for (size_t i = 0; i < models.size(); ++i) {
    for (size_t j = i + 1; j < models.size(); ++j) {
      if (models[i] == models[j]) throw ConfigError("model " + FamilyName(models[i]) + " listed twice");
    }
  }
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (prediction_rows < 0) throw ConfigError("prediction_rows must be non-negative");
  if (search_points < 0) throw ConfigError("search_points must be non-negative");
  for (ModelFamily f : models) Grid(f);
}

std::vector<HyperParams> ExperimentPlan::Grid(ModelFamily family) const {
  const auto g = grids.find(family);
  const auto b = base_params.find(family);
  std::vector<HyperParams> full = ExpandGrid(family, g == grids.end() ? json() : g->second,
                                             b == base_params.end() ? json::object() : b->second);
  if (search != SearchMode::kRandom || search_points == 0 ||
      static_cast<size_t>(search_points) >= full.size()) {
    return full;
  }
  // Partial Fisher-Yates over indices; survivors keep their grid order.
  Rng rng = Rng::Stream(base_seed, 2000 + static_cast<uint64_t>(family));
  std::vector<size_t> idx(full.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (size_t i = 0; i < static_cast<size_t>(search_points); ++i) {
    std::swap(idx[i], idx[i + rng.UniformIndex(idx.size() - i)]);
  }
  idx.resize(search_points);
  std::sort(idx.begin(), idx.end());
  std::vector<HyperParams> kept;
  for (size_t i : idx) kept.push_back(full[i]);
  return kept;
}

json ExperimentPlan::ToJson() const {
  json roster = json::array();
  json grid_json = json::object();
  for (ModelFamily f : models) {
    roster.push_back(FamilyName(f));
    json points = json::array();
    for (const HyperParams& p : Grid(f)) points.push_back(ParamsToJson(p));
    grid_json[FamilyName(f)] = points;
  }
  return {{"models", roster},
          {"repeats", repeats},
          {"base_seed", base_seed},
          {"fractions", {fractions.train, fractions.validation, fractions.test}},
          {"search", search == SearchMode::kRandom ? "random" : "grid"},
          {"search_points", search_points},
          {"grids", grid_json},
          {"fixed_structure_rerun", fixed_structure_rerun},
          {"prediction_rows", prediction_rows},
          {"pipeline", PipelineOptionsToJson(pipeline)}};
}

uint64_t ModelSeed(uint64_t base_seed, int repeat, ModelFamily family) {
  return Rng::Stream(base_seed + static_cast<uint64_t>(repeat),
                     1000 + static_cast<uint64_t>(family))
      .NextU64();
}

GridSearchResult GridSearch(const std::vector<HyperParams>& grid, const DesignMatrix& train,
                            const DesignMatrix& validation, uint64_t seed) {
  return SearchAndKeep(grid, train, validation, seed).search;
}

bool ComparisonReport::has_failures() const {
  for (const RepeatResult& r : repeats) {
    for (const ModelRepeatResult& m : r.models) {
      if (!m.ok) return true;
    }
  }
  return false;
}

const ModelSummary* ComparisonReport::Find(ModelFamily family) const {
  for (const ModelSummary& s : summaries) {
    if (s.family == family) return &s;
  }
  return nullptr;
}

std::vector<double> ComparisonReport::Values(ModelFamily family, const std::string& partition,
                                             const std::string& metric) const {
  std::vector<double> out;
  for (const RepeatResult& r : repeats) {
    double v = kNaN;
    for (const ModelRepeatResult& m : r.models) {
      if (m.family != family || !m.ok) continue;
      const MetricSet& set = partition == "train"        ? m.train
                             : partition == "validation" ? m.validation
                                                         : m.test;
      v = metric == "rmse" ? set.rmse : metric == "mae" ? set.mae : metric == "mape" ? set.mape : set.r2;
    }
    out.push_back(v);
  }
  return out;
}

json ComparisonReport::ToJson() const {
  json repeats_json = json::array();
  for (const RepeatResult& r : repeats) {
    json dropped = json::array();
    for (const DroppedFeature& d : r.dropped) {
      dropped.push_back({{"feature", d.name}, {"reason", d.reason}, {"statistic", d.statistic}});
    }
    json models_json = json::array();
    for (const ModelRepeatResult& m : r.models) {
      json mj = {{"model", FamilyName(m.family)}, {"ok", m.ok}};
      if (m.ok) {
        mj["chosen"] = ParamsToJson(m.chosen);
        mj["validation_mse"] = m.validation_mse;
        mj["train"] = m.train.ToJson();
        mj["validation"] = m.validation.ToJson();
        mj["test"] = m.test.ToJson();
      } else {
        mj["error"] = m.error;
      }
      if (!m.warnings.empty()) mj["warnings"] = m.warnings;
      models_json.push_back(std::move(mj));
    }
    repeats_json.push_back({{"repeat", r.repeat},
                            {"split_seed", r.split_seed},
                            {"sizes", {r.n_train, r.n_validation, r.n_test}},
                            {"pipeline_fingerprint", r.pipeline_fingerprint},
                            {"dropped", dropped},
                            {"models", models_json}});
  }
  json summaries_json = json::object();
  for (const ModelSummary& s : summaries) {
    json sj = {{"successful_repeats", s.successful_repeats}};
    if (s.successful_repeats > 0) {
      sj["train"] = PartitionJson(s.train);
      sj["validation"] = PartitionJson(s.validation);
      sj["test"] = PartitionJson(s.test);
    }
    if (s.averaged_params) {
      sj["averaged_params"] = {{"raw", s.averaged_params->raw},
                               {"rounded", ParamsToJson(s.averaged_params->rounded)}};
    }
    if (s.fixed_summary) {
      json per_repeat = json::array();
      for (const auto& m : s.fixed_test) per_repeat.push_back(m ? m->ToJson() : json());
      sj["fixed_structure"] = {{"test", PartitionJson(*s.fixed_summary)},
                               {"per_repeat_test", per_repeat}};
    }
    summaries_json[FamilyName(s.family)] = std::move(sj);
  }
  json tests_json = json::array();
  for (const PairwiseTest& t : tests) {
    json tj = t.result.ToJson();
    tj["a"] = FamilyName(t.a);
    tj["b"] = FamilyName(t.b);
    tj["metric"] = t.metric;
    tj["pairs"] = t.pairs;
    tests_json.push_back(std::move(tj));
  }
  json predicted = json::object();
  for (const auto& [family, values] : predictions.predicted) predicted[FamilyName(family)] = values;
  return {{"report_version", 1},
          {"plan", plan.ToJson()},
          {"n_rows", n_rows},
          {"target_scale", plan.pipeline.target_transform == TargetTransform::kLog ? "ln(price)" : "price"},
          {"repeats", repeats_json},
          {"summaries", summaries_json},
          {"paired_tests", tests_json},
          {"predictions", {{"row_ids", predictions.row_ids},
                           {"actual", predictions.actual},
                           {"predicted", predicted}}}};
}

std::string ComparisonReport::MetricsTableCsv() const {
  std::ostringstream out;
  out << "measurement";
  for (const ModelSummary& s : summaries) {
    for (const char* part : {"train", "validation", "test"}) {
      out << ',' << FamilyName(s.family) << ' ' << part;
    }
  }
  out << '\n';
  struct Row {
    const char* name;
    Summary PartitionSummary::*field;
    int decimals;
  };
  for (const Row& row : {Row{"RMSE", &PartitionSummary::rmse, 4}, Row{"MAE", &PartitionSummary::mae, 4},
                         Row{"MAPE (%)", &PartitionSummary::mape, 3},
                         Row{"R2", &PartitionSummary::r2, 4}}) {
    out << row.name;
    for (const ModelSummary& s : summaries) {
      for (const PartitionSummary* p : {&s.train, &s.validation, &s.test}) {
        const Summary& v = p->*row.field;
        out << ',';
        if (s.successful_repeats > 0) {
          out << Fixed(v.mean, row.decimals) << " (" << Fixed(v.std, row.decimals) << ')';
        }
      }
    }
    out << '\n';
  }
  return out.str();
}

ComparisonReport RunExperiment(const ExperimentPlan& plan, const Dataset& ds,
                               RepeatArtifacts* first_repeat) {
  plan.Validate();
  std::map<ModelFamily, std::vector<HyperParams>> grids;
  for (ModelFamily f : plan.models) grids[f] = plan.Grid(f);

  ComparisonReport report;
  report.plan = plan;
  report.n_rows = ds.num_rows();
  report.repeats.resize(static_cast<size_t>(plan.repeats));

  ParallelFor(plan.repeats, plan.threads, [&](int r) {
    PreparedRepeat prep;
    try {
      prep = Prepare(plan, ds, r);
    } catch (const Error& e) {
      throw Error(e.kind(), Context(plan, r) + ": " + e.what());
    }
    RepeatResult& result = report.repeats[static_cast<size_t>(r)];
    result.repeat = r;
    result.split_seed = plan.base_seed + static_cast<uint64_t>(r);
    result.n_train = prep.split.train.size();
    result.n_validation = prep.split.validation.size();
    result.n_test = prep.split.test.size();
    result.pipeline_fingerprint = prep.pipeline.Fingerprint();
    result.dropped = prep.pipeline.dropped;

    for (ModelFamily family : plan.models) {
      const Coding coding = FamilyCoding(family);
      const DesignMatrix& train = prep.train.at(coding);
      const DesignMatrix& validation = prep.validation.at(coding);
      const DesignMatrix& test = prep.test.at(coding);
      ModelRepeatResult m;
      m.family = family;
      try {
        SearchOutcome outcome =
            SearchAndKeep(grids.at(family), train, validation, ModelSeed(plan.base_seed, r, family));
        m.chosen = outcome.model.params;
        m.validation_mse = outcome.search.validation_mse;
        m.warnings = outcome.search.warnings;
        m.train = ComputeMetrics(train.y, outcome.model.Predict(train.x));
        m.validation = ComputeMetrics(validation.y, outcome.model.Predict(validation.x));
        const Eigen::VectorXd test_pred = outcome.model.Predict(test.x);
        m.test = ComputeMetrics(test.y, test_pred);
        m.ok = true;
        if (r == 0) {
          const auto k = std::min<Eigen::Index>(plan.prediction_rows, test.num_rows());
          report.predictions.predicted[family] =
              std::vector<double>(test_pred.data(), test_pred.data() + k);
          if (first_repeat) first_repeat->models.emplace(family, std::move(outcome.model));
        }
      } catch (const std::exception& e) {
        m.ok = false;
        m.error = FamilyName(family) + " failed in " + Context(plan, r) + ": " + e.what();
      }
      result.models.push_back(std::move(m));
    }

    if (r == 0) {
      const DesignMatrix& test = prep.test.begin()->second;
      const auto k = std::min<Eigen::Index>(plan.prediction_rows, test.num_rows());
      report.predictions.row_ids.assign(test.row_ids.begin(), test.row_ids.begin() + k);
      report.predictions.actual.assign(test.y.data(), test.y.data() + k);
      if (first_repeat) {
        first_repeat->split = prep.split;
        first_repeat->pipeline = prep.pipeline;
        first_repeat->train = prep.train;
        first_repeat->validation = prep.validation;
        first_repeat->test = prep.test;
      }
    }
  });

  for (ModelFamily family : plan.models) {
    ModelSummary s;
    s.family = family;
    std::vector<MetricSet> train, validation, test;
    std::vector<HyperParams> chosen;
    for (const RepeatResult& r : report.repeats) {
      for (const ModelRepeatResult& m : r.models) {
        if (m.family != family || !m.ok) continue;
        train.push_back(m.train);
        validation.push_back(m.validation);
        test.push_back(m.test);
        chosen.push_back(m.chosen);
      }
    }
    s.successful_repeats = static_cast<int>(test.size());
    if (!test.empty()) {
      s.train = Summarize(train);
      s.validation = Summarize(validation);
      s.test = Summarize(test);
      s.averaged_params = AverageParams(family, chosen);
    }
    report.summaries.push_back(std::move(s));
  }

  if (plan.fixed_structure_rerun) {
    std::vector<std::vector<std::optional<MetricSet>>> fixed(
        plan.models.size(), std::vector<std::optional<MetricSet>>(static_cast<size_t>(plan.repeats)));
    ParallelFor(plan.repeats, plan.threads, [&](int r) {
      const PreparedRepeat prep = Prepare(plan, ds, r);
      for (size_t i = 0; i < plan.models.size(); ++i) {
        const ModelSummary& s = report.summaries[i];
        if (!s.averaged_params) continue;
        const Coding coding = FamilyCoding(s.family);
        try {
          const TrainedModel model =
              TrainModel(s.averaged_params->rounded, prep.train.at(coding), prep.validation.at(coding),
                         ModelSeed(plan.base_seed, r, s.family));
          const DesignMatrix& test = prep.test.at(coding);
          fixed[i][static_cast<size_t>(r)] = ComputeMetrics(test.y, model.Predict(test.x));
        } catch (const std::exception&) {
          // Left empty; the per-repeat list shows the gap.
        }
      }
    });
    for (size_t i = 0; i < plan.models.size(); ++i) {
      ModelSummary& s = report.summaries[i];
      if (!s.averaged_params) continue;
      s.fixed_test = fixed[i];
      std::vector<MetricSet> ok;
      for (const auto& m : fixed[i]) {
        if (m) ok.push_back(*m);
      }
      if (!ok.empty()) s.fixed_summary = Summarize(ok);
    }
  }

  for (size_t i = 0; i < plan.models.size(); ++i) {
    for (size_t j = i + 1; j < plan.models.size(); ++j) {
      for (const char* metric : {"rmse", "mape"}) {
        const std::vector<double> a = report.Values(plan.models[i], "test", metric);
        const std::vector<double> b = report.Values(plan.models[j], "test", metric);
        std::vector<double> pa, pb;
        for (size_t r = 0; r < a.size(); ++r) {
          if (std::isnan(a[r]) || std::isnan(b[r])) continue;
          pa.push_back(a[r]);
          pb.push_back(b[r]);
        }
        if (pa.size() < 2) continue;
        report.tests.push_back({plan.models[i], plan.models[j], std::string("test_") + metric,
                                static_cast<int>(pa.size()), PairedTTest(pa, pb)});
      }
    }
  }
  return report;
}

}  // namespace housebench
