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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "asyncfl/data.h"
#include "asyncfl/error.h"
#include "asyncfl/experiment.h"
#include "asyncfl/rng.h"

namespace asyncfl {
namespace {

struct Datasets {
  std::shared_ptr<const Dataset> train;
  std::shared_ptr<const Dataset> test;
};

Datasets BuildDatasets(const ExperimentConfig &cfg) {
  const auto &d = cfg.dataset;
  if (d.kind == DatasetConfig::Kind::kIdx) {
    return {std::make_shared<const Dataset>(LoadIdx(d.train_images, d.train_labels)),
            std::make_shared<const Dataset>(LoadIdx(d.test_images, d.test_labels))};
  }
  return {std::make_shared<const Dataset>(
              SynthBlobs(d.n_per_class, d.dim, d.num_classes, d.spread, DeriveKey(cfg.seed, 1))),
          std::make_shared<const Dataset>(
              SynthBlobs(d.test_per_class, d.dim, d.num_classes, d.spread, DeriveKey(cfg.seed, 2)))};
}

ModelSpec BuildModel(const ExperimentConfig &cfg, const Datasets &data) {
  const std::size_t classes = std::max(data.train->num_classes, data.test->num_classes);
  if (cfg.arch == ModelSpec::Arch::kLogistic) return ModelSpec::Logistic(data.train->dim(), classes);
  return ModelSpec::Mlp(data.train->dim(), cfg.hidden_dim, classes);
}

std::string ProvenanceComment(const ExperimentConfig &cfg) {
  const auto &s = cfg.staleness;
  std::ostringstream out;
  out << "# lambda=" << FormatDouble(s.lambda) << " epsilon=" << FormatDouble(s.epsilon)
      << " delta=" << FormatDouble(s.normalization_delta) << " generator=" << GeneratorName(s.generator);
  if (s.epoch_rule.kind == EpochRule::Kind::kFixed) {
    out << " epoch_rule=fixed(" << s.epoch_rule.k << ")";
  } else {
    out << " epoch_rule=inverse(" << s.epoch_rule.k_ref << "," << s.epoch_rule.k_min << "," << s.epoch_rule.k_max
        << ")";
  }
  out << " local_lr=" << FormatDouble(cfg.local_lr) << " batch_size=" << cfg.batch_size << "\n";
  return out.str();
}

void WriteFile(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

Summary Summarize(std::span<const double> values) {
  if (values.empty()) throw ValidationError("summarize: no values");
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double squares = 0.0;
  for (double v : values) squares += (v - mean) * (v - mean);
  return {mean, std::sqrt(squares / n)};
}

ExperimentResult RunExperiment(const ExperimentConfig &cfg) {
  cfg.Validate();
  const Datasets data = BuildDatasets(cfg);
  const ModelSpec model = BuildModel(cfg, data);

  std::vector<Partition> partitions;
  for (std::size_t k = 0; k < cfg.repetitions; ++k) {
    partitions.push_back(DirichletPartition(data.train->samples.labels, cfg.n_clients, cfg.dataset.alpha,
                                            cfg.seed + k, cfg.dataset.min_per_client));
  }

  const std::string provenance = ProvenanceComment(cfg);
  std::ostringstream curves;
  curves << provenance << "metric,scenario,seed,vtime,version,tau,gamma,eta,test_accuracy,test_loss\n";
  std::ostringstream summary;
  summary << provenance << "# final_acc_std is the population standard deviation (divides by n_seeds)\n"
          << "metric,scenario,n_seeds,final_acc_mean,final_acc_std\n";

  ExperimentResult result;
  for (MetricKind metric : cfg.metrics) {
    for (const std::string &scenario_name : cfg.scenarios) {
      std::vector<double> finals;
      for (std::size_t k = 0; k < cfg.repetitions; ++k) {
        const std::uint64_t seed = cfg.seed + k;
        SimConfig sim;
        sim.model = model;
        sim.train = data.train;
        sim.test = data.test;
        sim.partition = partitions[k];
        sim.scenario = AsynchronyScenario::Named(scenario_name);
        sim.staleness = cfg.staleness;
        sim.staleness.metric = metric;
        sim.batch_size = cfg.batch_size;
        sim.local_lr = cfg.local_lr;
        sim.budget = cfg.budget;
        sim.eval_interval = cfg.eval_interval;
        sim.seconds_per_sample = cfg.seconds_per_sample;
        sim.seed = seed;

        RunTrace trace;
        try {
          trace = RunSimulation(sim);
        } catch (const Error &e) {
          throw RunError("run failed (metric=" + std::string(MetricName(metric)) + ", scenario=" + scenario_name +
                         ", seed=" + std::to_string(seed) + "): " + e.what());
        }
        ++result.runs;
        for (const EvalPoint &p : trace.evals) {
          curves << MetricName(metric) << ',' << scenario_name << ',' << seed << ',' << FormatDouble(p.vtime) << ','
                 << p.version << ',' << p.tau << ',' << FormatDouble(p.gamma) << ',' << FormatDouble(p.eta) << ','
                 << FormatDouble(p.eval.accuracy) << ',' << FormatDouble(p.eval.loss) << '\n';
        }
        finals.push_back(trace.final_accuracy());
      }
      const Summary s = Summarize(finals);
      result.summary.push_back({metric, scenario_name, finals.size(), s.mean, s.std});
      summary << MetricName(metric) << ',' << scenario_name << ',' << finals.size() << ',' << FormatDouble(s.mean)
              << ',' << FormatDouble(s.std) << '\n';
    }
  }
  result.curves_csv = curves.str();
  result.summary_csv = summary.str();
  return result;
}

ExperimentResult RunExperimentToDisk(const ExperimentConfig &cfg) {
  cfg.Validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
  WriteFile(cfg.output_dir / "resolved_config.txt", ResolvedConfigText(cfg));
  ExperimentResult result = RunExperiment(cfg);
  WriteFile(cfg.output_dir / "curves.csv", result.curves_csv);
  WriteFile(cfg.output_dir / "summary.csv", result.summary_csv);
  return result;
}

}  // namespace asyncfl
