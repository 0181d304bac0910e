/**
 * Copyright 2026 The asyncfl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// asyncfl: run staleness-aware asynchronous FL experiments.
//
//   asyncfl run --config exp.conf [--out dir] [--metrics a,b] [--scenarios low,high] [--seeds N] [--budget S]
//   asyncfl validate --config exp.conf
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asyncfl/error.h"
#include "asyncfl/experiment.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Overrides {
  std::optional<std::string> out, metrics, scenarios, seeds, budget;
};

asyncfl::ExperimentConfig Load(const std::string &path, const Overrides &o) {
  asyncfl::ExperimentConfig cfg = asyncfl::ParseConfig(path);
  if (o.out) asyncfl::ApplySetting(cfg, "output_dir", *o.out);
  if (o.metrics) asyncfl::ApplySetting(cfg, "metrics", *o.metrics);
  if (o.scenarios) asyncfl::ApplySetting(cfg, "scenarios", *o.scenarios);
  if (o.seeds) asyncfl::ApplySetting(cfg, "repetitions", *o.seeds);
  if (o.budget) asyncfl::ApplySetting(cfg, "budget", *o.budget);
  cfg.Validate();
  return cfg;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Staleness-aware asynchronous federated learning simulator"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;

  auto *run = app.add_subcommand("run", "Run the metric x scenario x seed sweep and write CSV results");
  run->add_option("--config", config_path, "Experiment config file")->required();
  run->add_option("--out", overrides.out, "Output directory");
  run->add_option("--metrics", overrides.metrics, "Comma-separated metric list");
  run->add_option("--scenarios", overrides.scenarios, "Comma-separated scenario list (low,medium,high)");
  run->add_option("--seeds", overrides.seeds, "Repetitions per configuration");
  run->add_option("--budget", overrides.budget, "Virtual-time budget in seconds");

  auto *validate = app.add_subcommand("validate", "Parse and validate a config without running");
  validate->add_option("--config", config_path, "Experiment config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  asyncfl::ExperimentConfig cfg;
  try {
    cfg = Load(config_path, overrides);
  } catch (const asyncfl::IoError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const asyncfl::Error &e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitValidation;
  }

  if (validate->parsed()) {
    std::cout << asyncfl::ResolvedConfigText(cfg);
    return 0;
  }

  try {
    const auto result = asyncfl::RunExperimentToDisk(cfg);
    std::cout << "completed " << result.runs << " runs; results in " << cfg.output_dir.string() << "\n";
    for (const auto &row : result.summary) {
      std::cout << "  " << asyncfl::MetricName(row.metric) << " / " << row.scenario << ": "
                << asyncfl::FormatDouble(row.final_acc_mean) << " +- " << asyncfl::FormatDouble(row.final_acc_std)
                << " (n=" << row.n_seeds << ")\n";
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
