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

#ifndef ASYNCFL_EXPERIMENT_H_
#define ASYNCFL_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asyncfl/error.h"
#include "asyncfl/metrics.h"
#include "asyncfl/model.h"
#include "asyncfl/sim.h"
#include "asyncfl/staleness.h"

namespace asyncfl {

struct DatasetConfig {
  enum class Kind { kBlobs, kIdx };

  Kind kind = Kind::kBlobs;
  std::size_t n_per_class = 250;
  std::size_t test_per_class = 100;
  std::size_t dim = 8;
  std::size_t num_classes = 4;
  double spread = 0.5;
  std::filesystem::path train_images, train_labels, test_images, test_labels;
  double alpha = 0.5;
  std::size_t min_per_client = kDefaultMinPerClient;
};

// Everything needed to run a sweep of metrics x scenarios x seeds.
struct ExperimentConfig {
  DatasetConfig dataset;
  std::size_t n_clients = 20;
  ModelSpec::Arch arch = ModelSpec::Arch::kLogistic;
  std::size_t hidden_dim = 16;
  StalenessConfig staleness;  // `metric` is overridden per cell
  std::vector<MetricKind> metrics{kAllMetrics.begin(), kAllMetrics.end()};
  std::vector<std::string> scenarios{"low", "medium", "high"};
  double budget = 300.0;
  double eval_interval = 5.0;
  std::size_t repetitions = 10;
  std::uint64_t seed = 1;
  std::size_t batch_size = 32;
  double local_lr = 0.05;
  double seconds_per_sample = kDefaultSecondsPerSample;
  std::filesystem::path output_dir = "results";

  void Validate() const;
};

// Sets one dotted key from its textual value. Throws ValidationError naming
// the key when it is unknown or the value is out of range.
void ApplySetting(ExperimentConfig &cfg, std::string_view key, std::string_view value);

// Parses "key = value" lines ('#' starts a comment) on top of the defaults.
ExperimentConfig ParseConfigText(std::string_view text);
// Throws IoError when the file cannot be read.
ExperimentConfig ParseConfig(const std::filesystem::path &path);

// Every resolved setting as "key = value" lines; ParseConfigText accepts it.
std::string ResolvedConfigText(const ExperimentConfig &cfg);

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

// Throws ValidationError on empty input.
Summary Summarize(std::span<const double> values);

struct SummaryRow {
  MetricKind metric;
  std::string scenario;
  std::size_t n_seeds = 0;
  double final_acc_mean = 0.0;
  double final_acc_std = 0.0;
};

struct ExperimentResult {
  std::string curves_csv;
  std::string summary_csv;
  std::vector<SummaryRow> summary;
  std::size_t runs = 0;
};

// Nine significant digits, printf %.9g.
std::string FormatDouble(double value);

// Runs every (metric, scenario, seed) cell in that nesting order and renders
// both CSV files. Failures are rethrown as RunError tagged with the cell.
ExperimentResult RunExperiment(const ExperimentConfig &cfg);

// RunExperiment plus writing curves.csv, summary.csv and resolved_config.txt
// into cfg.output_dir.
ExperimentResult RunExperimentToDisk(const ExperimentConfig &cfg);

class RunError : public Error {
 public:
  using Error::Error;
};

}  // namespace asyncfl

#endif  // ASYNCFL_EXPERIMENT_H_
