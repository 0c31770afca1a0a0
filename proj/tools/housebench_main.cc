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


// Command-line front end: synthesize, describe, prepare, compare,
// importance, pdp and report, all driven by one JSON config file.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "housebench/commands.h"

int main(int argc, char** argv) {
  using housebench::CommandOptions;

  CLI::App app{"housebench: hedonic, neural network, random forest and kNN valuation benchmark"};
  app.require_subcommand(1);

  CommandOptions options;
  uint64_t seed = 0;
  std::string out_dir;
  std::string config;

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const CommandOptions&, std::ostream&, std::ostream&);
  };
  const Entry entries[] = {
      {"synthesize", "Generate the synthetic housing dataset", housebench::RunSynthesize},
      {"describe", "Descriptive statistics for numeric and categorical columns", housebench::RunDescribe},
      {"prepare", "Fit the preprocessing pipeline on the first split", housebench::RunPrepare},
      {"compare", "Repeated-split comparison of the model roster", housebench::RunCompare},
      {"importance", "Random forest permutation importance", housebench::RunImportance},
      {"pdp", "Random forest partial dependence curves", housebench::RunPdp},
      {"report", "Summarize an existing comparison report", housebench::RunReport},
  };
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "Override the base seed (and synthetic seed)");
    sub->add_option("--out", out_dir, "Override the output directory");
    sub->add_flag("--no-plots", options.no_plots, "Skip SVG output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  options.config = config;
  if (chosen->count("--seed") > 0) options.seed = seed;
  if (chosen->count("--out") > 0) options.out = out_dir;
  for (const Entry& e : entries) {
    if (chosen->get_name() == e.name) return e.run(options, std::cout, std::cerr);
  }
  return 1;
}
