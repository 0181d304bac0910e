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

#ifndef ASYNCFL_SIM_H_
#define ASYNCFL_SIM_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "asyncfl/data.h"
#include "asyncfl/model.h"
#include "asyncfl/params.h"
#include "asyncfl/rng.h"
#include "asyncfl/staleness.h"

namespace asyncfl {

// Client-side latency: delay ~ clip(N(mu, sigma^2), 0, max_delay), in virtual seconds.
struct AsynchronyScenario {
  std::string name;
  double mu = 1.0;
  double sigma = 0.5;
  double max_delay = 3.0;

  static AsynchronyScenario Low() { return {"low", 1.0, 0.5, 3.0}; }
  static AsynchronyScenario Medium() { return {"medium", 3.0, 1.0, 6.0}; }
  static AsynchronyScenario High() { return {"high", 5.0, 2.5, 10.0}; }
  // "low", "medium" or "high".
  static AsynchronyScenario Named(std::string_view name);

  void Validate() const;
};

double ClipDelay(const AsynchronyScenario &scenario, double raw);
double SampleDelay(const AsynchronyScenario &scenario, RngStream &rng);

inline constexpr double kDefaultSecondsPerSample = 0.005;

// Per-client compute speed factors, uniform on [0.8, 1.2], fixed for a run.
std::vector<double> SpeedFactors(std::size_t n_clients, std::uint64_t seed);

// speed_factor * seconds_per_sample * epochs * shard_size.
double TrainingCost(double speed_factor, int epochs, std::size_t shard_size, double seconds_per_sample);

struct ClientUpdate {
  std::size_t client = 0;
  std::uint64_t base_version = 0;
  ParamVector delta;
  int local_epochs = 1;
  double deliver_at = 0.0;
};

// Min-heap on (deliver_at, sequence number); equal times pop in push order.
class EventQueue {
 public:
  void Push(ClientUpdate update);
  ClientUpdate Pop();
  const ClientUpdate &Top() const { return heap_.top().update; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Entry {
    double deliver_at;
    std::uint64_t sequence;
    ClientUpdate update;
  };
  struct Later {
    bool operator()(const Entry &a, const Entry &b) const {
      if (a.deliver_at != b.deliver_at) return a.deliver_at > b.deliver_at;
      return a.sequence > b.sequence;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
};

// Past global models. Keeps the most recent `window` versions plus any
// version pinned by an in-flight update.
class SnapshotHistory {
 public:
  explicit SnapshotHistory(std::size_t window) : window_(window) {}

  void Record(const ModelSnapshot &snapshot);
  void Pin(std::uint64_t version);
  void Unpin(std::uint64_t version);
  // Throws ConsistencyError if the version was evicted or never recorded.
  const ModelSnapshot &Get(std::uint64_t version) const;
  bool Contains(std::uint64_t version) const { return entries_.contains(version); }
  std::size_t size() const { return entries_.size(); }

 private:
  void Evict();

  struct Entry {
    ModelSnapshot snapshot;
    int pins = 0;
  };
  std::size_t window_;
  std::uint64_t newest_ = 0;
  std::map<std::uint64_t, Entry> entries_;
};

struct AggregationRecord {
  std::uint64_t version = 0;  // version produced by this aggregation
  double vtime = 0.0;
  std::size_t client = 0;
  std::uint64_t base_version = 0;
  std::uint64_t tau = 0;
  double gamma = 0.0;
  double eta = 0.0;
  int local_epochs = 0;
};

// Parameter server applying staleness-weighted updates on arrival.
class Server {
 public:
  Server(const StalenessConfig &cfg, ParamVector initial, std::size_t history_window);

  const ModelSnapshot &current() const { return current_; }
  SnapshotHistory &history() { return history_; }

  // Pins and returns the current model for a client about to train.
  ModelSnapshot Checkout();

  // gamma from the stored base snapshot, eta = lambda / (gamma + epsilon),
  // x <- x + eta * delta, version + 1.
  AggregationRecord OnUpdate(const ClientUpdate &update, double now);

 private:
  StalenessConfig cfg_;
  ModelSnapshot current_;
  SnapshotHistory history_;
};

struct SimConfig {
  ModelSpec model;
  std::shared_ptr<const Dataset> train;
  std::shared_ptr<const Dataset> test;
  Partition partition;
  AsynchronyScenario scenario = AsynchronyScenario::Low();
  StalenessConfig staleness;
  std::size_t batch_size = 32;
  double local_lr = 0.05;
  double budget = 300.0;
  double eval_interval = 5.0;
  double seconds_per_sample = kDefaultSecondsPerSample;
  std::uint64_t seed = 0;
  // Replaces sampled delays with a constant when set.
  std::optional<double> fixed_delay;
  // Store every global model and every delta in the trace.
  bool keep_snapshots = false;

  void Validate() const;
};

struct EvalPoint {
  double vtime = 0.0;
  std::uint64_t version = 0;
  // Latest aggregation at or before vtime; zeros before the first one.
  std::uint64_t tau = 0;
  double gamma = 0.0;
  double eta = 0.0;
  Evaluation eval;
};

struct RunTrace {
  ModelSnapshot initial;
  ModelSnapshot final_model;
  std::vector<AggregationRecord> aggregations;
  std::vector<EvalPoint> evals;
  // Populated when keep_snapshots is set: snapshots[v] is global version v,
  // deltas[i] is the update applied by aggregations[i].
  std::vector<ModelSnapshot> snapshots;
  std::vector<ParamVector> deltas;

  double final_accuracy() const { return evals.empty() ? 0.0 : evals.back().eval.accuracy; }
};

RunTrace RunSimulation(const SimConfig &cfg);

}  // namespace asyncfl

#endif  // ASYNCFL_SIM_H_
