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

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "asyncfl/error.h"
#include "asyncfl/experiment.h"

namespace asyncfl {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitList(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto item = Trim(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void Invalid(std::string_view key, std::string_view value, std::string_view expected) {
  throw ValidationError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                        std::string(expected) + ")");
}

double ParseDouble(std::string_view key, std::string_view value, std::string_view expected) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    Invalid(key, value, expected);
  }
  return out;
}

double Positive(std::string_view key, std::string_view value) {
  const double v = ParseDouble(key, value, "a number > 0");
  if (!(v > 0.0)) Invalid(key, value, "a number > 0");
  return v;
}

double NonNegative(std::string_view key, std::string_view value) {
  const double v = ParseDouble(key, value, "a number >= 0");
  if (!(v >= 0.0)) Invalid(key, value, "a number >= 0");
  return v;
}

std::uint64_t ParseUnsigned(std::string_view key, std::string_view value, std::uint64_t min) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  const std::string expected = "an integer >= " + std::to_string(min);
  if (ec != std::errc() || ptr != value.data() + value.size() || out < min) Invalid(key, value, expected);
  return out;
}

int ParseEpochs(std::string_view key, std::string_view value) {
  const auto v = ParseUnsigned(key, value, 1);
  if (v > 1000000) Invalid(key, value, "an integer in [1, 1000000]");
  return static_cast<int>(v);
}

using Setter = std::function<void(ExperimentConfig &, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>> &Setters() {
  static const std::map<std::string, Setter, std::less<>> setters = {
      {"n_clients", [](auto &c, auto k, auto v) { c.n_clients = ParseUnsigned(k, v, 1); }},
      {"metrics",
       [](auto &c, auto k, auto v) {
         c.metrics.clear();
         for (const auto &name : SplitList(v)) c.metrics.push_back(ParseMetricKind(name));
         if (c.metrics.empty()) Invalid(k, v, "a non-empty comma-separated metric list");
       }},
      {"scenarios",
       [](auto &c, auto k, auto v) {
         c.scenarios = SplitList(v);
         if (c.scenarios.empty()) Invalid(k, v, "a non-empty list of low, medium, high");
         for (const auto &s : c.scenarios) AsynchronyScenario::Named(s);
       }},
      {"budget", [](auto &c, auto k, auto v) { c.budget = Positive(k, v); }},
      {"eval_interval", [](auto &c, auto k, auto v) { c.eval_interval = Positive(k, v); }},
      {"repetitions", [](auto &c, auto k, auto v) { c.repetitions = ParseUnsigned(k, v, 1); }},
      {"seed", [](auto &c, auto k, auto v) { c.seed = ParseUnsigned(k, v, 0); }},
      {"output_dir", [](auto &c, auto, auto v) { c.output_dir = std::string(v); }},
      {"dataset.kind",
       [](auto &c, auto k, auto v) {
         if (v == "blobs") {
           c.dataset.kind = DatasetConfig::Kind::kBlobs;
         } else if (v == "idx") {
           c.dataset.kind = DatasetConfig::Kind::kIdx;
         } else {
           Invalid(k, v, "blobs or idx");
         }
       }},
      {"dataset.n_per_class", [](auto &c, auto k, auto v) { c.dataset.n_per_class = ParseUnsigned(k, v, 1); }},
      {"dataset.test_per_class", [](auto &c, auto k, auto v) { c.dataset.test_per_class = ParseUnsigned(k, v, 1); }},
      {"dataset.dim", [](auto &c, auto k, auto v) { c.dataset.dim = ParseUnsigned(k, v, 1); }},
      {"dataset.n_classes", [](auto &c, auto k, auto v) { c.dataset.num_classes = ParseUnsigned(k, v, 1); }},
      {"dataset.spread", [](auto &c, auto k, auto v) { c.dataset.spread = Positive(k, v); }},
      {"dataset.alpha", [](auto &c, auto k, auto v) { c.dataset.alpha = Positive(k, v); }},
      {"dataset.min_per_client", [](auto &c, auto k, auto v) { c.dataset.min_per_client = ParseUnsigned(k, v, 1); }},
      {"dataset.train_images", [](auto &c, auto, auto v) { c.dataset.train_images = std::string(v); }},
      {"dataset.train_labels", [](auto &c, auto, auto v) { c.dataset.train_labels = std::string(v); }},
      {"dataset.test_images", [](auto &c, auto, auto v) { c.dataset.test_images = std::string(v); }},
      {"dataset.test_labels", [](auto &c, auto, auto v) { c.dataset.test_labels = std::string(v); }},
      {"model.arch",
       [](auto &c, auto k, auto v) {
         try {
           c.arch = ParseArch(v);
         } catch (const ValidationError &) {
           Invalid(k, v, "logistic or mlp");
         }
       }},
      {"model.hidden", [](auto &c, auto k, auto v) { c.hidden_dim = ParseUnsigned(k, v, 1); }},
      {"train.lr", [](auto &c, auto k, auto v) { c.local_lr = NonNegative(k, v); }},
      {"train.batch_size", [](auto &c, auto k, auto v) { c.batch_size = ParseUnsigned(k, v, 1); }},
      {"train.seconds_per_sample", [](auto &c, auto k, auto v) { c.seconds_per_sample = Positive(k, v); }},
      {"staleness.metric", [](auto &c, auto, auto v) { c.metrics = {ParseMetricKind(Trim(v))}; }},
      {"staleness.lambda", [](auto &c, auto k, auto v) { c.staleness.lambda = Positive(k, v); }},
      {"staleness.epsilon", [](auto &c, auto k, auto v) { c.staleness.epsilon = Positive(k, v); }},
      {"staleness.delta", [](auto &c, auto k, auto v) { c.staleness.normalization_delta = Positive(k, v); }},
      {"staleness.generator", [](auto &c, auto, auto v) { c.staleness.generator = ParseGenerator(v); }},
      {"staleness.epoch_rule",
       [](auto &c, auto k, auto v) {
         if (v == "fixed") {
           c.staleness.epoch_rule.kind = EpochRule::Kind::kFixed;
         } else if (v == "inverse") {
           c.staleness.epoch_rule.kind = EpochRule::Kind::kInverseStaleness;
         } else {
           Invalid(k, v, "fixed or inverse");
         }
       }},
      {"staleness.k", [](auto &c, auto k, auto v) { c.staleness.epoch_rule.k = ParseEpochs(k, v); }},
      {"staleness.k_ref", [](auto &c, auto k, auto v) { c.staleness.epoch_rule.k_ref = ParseEpochs(k, v); }},
      {"staleness.k_min", [](auto &c, auto k, auto v) { c.staleness.epoch_rule.k_min = ParseEpochs(k, v); }},
      {"staleness.k_max", [](auto &c, auto k, auto v) { c.staleness.epoch_rule.k_max = ParseEpochs(k, v); }},
  };
  return setters;
}

std::string JoinMetrics(const std::vector<MetricKind> &metrics) {
  std::string out;
  for (auto m : metrics) {
    if (!out.empty()) out += ",";
    out += MetricName(m);
  }
  return out;
}

std::string JoinStrings(const std::vector<std::string> &items) {
  std::string out;
  for (const auto &s : items) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

}  // namespace

void ApplySetting(ExperimentConfig &cfg, std::string_view key, std::string_view value) {
  const auto &setters = Setters();
  const auto it = setters.find(key);
  if (it == setters.end()) throw ValidationError("unknown config key '" + std::string(key) + "'");
  it->second(cfg, key, Trim(value));
}

void ExperimentConfig::Validate() const {
  if (n_clients < 1) throw ValidationError("n_clients must be >= 1");
  if (metrics.empty()) throw ValidationError("metrics must list at least one metric");
  if (scenarios.empty()) throw ValidationError("scenarios must list at least one scenario");
  for (const auto &s : scenarios) AsynchronyScenario::Named(s);
  std::set<MetricKind> unique_metrics(metrics.begin(), metrics.end());
  std::set<std::string> unique_scenarios(scenarios.begin(), scenarios.end());
  if (unique_metrics.size() != metrics.size()) throw ValidationError("metrics contains duplicates");
  if (unique_scenarios.size() != scenarios.size()) throw ValidationError("scenarios contains duplicates");
  if (!(budget > 0.0)) throw ValidationError("budget must be > 0");
  if (!(eval_interval > 0.0)) throw ValidationError("eval_interval must be > 0");
  if (repetitions < 1) throw ValidationError("repetitions must be >= 1");
  if (batch_size < 1) throw ValidationError("train.batch_size must be >= 1");
  if (!(local_lr >= 0.0)) throw ValidationError("train.lr must be >= 0");
  if (!(seconds_per_sample > 0.0)) throw ValidationError("train.seconds_per_sample must be > 0");
  if (arch == ModelSpec::Arch::kMlp && hidden_dim < 1) throw ValidationError("model.hidden must be >= 1");
  if (!(dataset.alpha > 0.0)) throw ValidationError("dataset.alpha must be > 0");
  if (dataset.kind == DatasetConfig::Kind::kBlobs) {
    if (!(dataset.spread > 0.0)) throw ValidationError("dataset.spread must be > 0");
    const std::size_t n = dataset.n_per_class * dataset.num_classes;
    if (n_clients * std::max<std::size_t>(dataset.min_per_client, 1) > n) {
      throw ValidationError("dataset is too small for " + std::to_string(n_clients) + " clients");
    }
  } else if (dataset.train_images.empty() || dataset.train_labels.empty() || dataset.test_images.empty() ||
             dataset.test_labels.empty()) {
    throw ValidationError(
        "dataset.kind = idx requires dataset.train_images, dataset.train_labels, dataset.test_images and "
        "dataset.test_labels");
  }
  staleness.Validate();
}

ExperimentConfig ParseConfigText(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = Trim(line.substr(0, eq));
    if (!seen.insert(std::string(key)).second) {
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }
    ApplySetting(cfg, key, line.substr(eq + 1));
  }
  if (seen.contains("metrics") && seen.contains("staleness.metric")) {
    throw ValidationError("set either metrics or staleness.metric, not both");
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig ParseConfig(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfigText(text.str());
}

std::string ResolvedConfigText(const ExperimentConfig &cfg) {
  std::ostringstream out;
  auto put = [&](std::string_view key, const auto &value) { out << key << " = " << value << "\n"; };
  const auto &d = cfg.dataset;
  const auto &s = cfg.staleness;
  put("metrics", JoinMetrics(cfg.metrics));
  put("scenarios", JoinStrings(cfg.scenarios));
  put("n_clients", cfg.n_clients);
  put("budget", FormatDouble(cfg.budget));
  put("eval_interval", FormatDouble(cfg.eval_interval));
  put("repetitions", cfg.repetitions);
  put("seed", cfg.seed);
  put("output_dir", cfg.output_dir.string());
  put("dataset.kind", d.kind == DatasetConfig::Kind::kBlobs ? "blobs" : "idx");
  if (d.kind == DatasetConfig::Kind::kBlobs) {
    put("dataset.n_per_class", d.n_per_class);
    put("dataset.test_per_class", d.test_per_class);
    put("dataset.dim", d.dim);
    put("dataset.n_classes", d.num_classes);
    put("dataset.spread", FormatDouble(d.spread));
  } else {
    put("dataset.train_images", d.train_images.string());
    put("dataset.train_labels", d.train_labels.string());
    put("dataset.test_images", d.test_images.string());
    put("dataset.test_labels", d.test_labels.string());
  }
  put("dataset.alpha", FormatDouble(d.alpha));
  put("dataset.min_per_client", d.min_per_client);
  put("model.arch", ArchName(cfg.arch));
  put("model.hidden", cfg.hidden_dim);
  put("train.lr", FormatDouble(cfg.local_lr));
  put("train.batch_size", cfg.batch_size);
  put("train.seconds_per_sample", FormatDouble(cfg.seconds_per_sample));
  put("staleness.lambda", FormatDouble(s.lambda));
  put("staleness.epsilon", FormatDouble(s.epsilon));
  put("staleness.delta", FormatDouble(s.normalization_delta));
  put("staleness.generator", GeneratorName(s.generator));
  put("staleness.epoch_rule", s.epoch_rule.kind == EpochRule::Kind::kFixed ? "fixed" : "inverse");
  put("staleness.k", s.epoch_rule.k);
  put("staleness.k_ref", s.epoch_rule.k_ref);
  put("staleness.k_min", s.epoch_rule.k_min);
  put("staleness.k_max", s.epoch_rule.k_max);
  return out.str();
}

}  // namespace asyncfl
