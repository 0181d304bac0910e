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

#include "asyncfl/sim.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "asyncfl/error.h"

namespace asyncfl {

AsynchronyScenario AsynchronyScenario::Named(std::string_view name) {
  if (name == "low") return Low();
  if (name == "medium") return Medium();
  if (name == "high") return High();
  throw ValidationError("unknown scenario '" + std::string(name) + "' (expected low, medium or high)");
}

void AsynchronyScenario::Validate() const {
  if (!(mu > 0.0) || !(sigma > 0.0) || !(max_delay > 0.0)) {
    throw ValidationError("scenario '" + name + "': mu, sigma and max_delay must be > 0");
  }
}

double ClipDelay(const AsynchronyScenario &scenario, double raw) { return std::clamp(raw, 0.0, scenario.max_delay); }

double SampleDelay(const AsynchronyScenario &scenario, RngStream &rng) {
  return ClipDelay(scenario, rng.Normal(scenario.mu, scenario.sigma));
}

std::vector<double> SpeedFactors(std::size_t n_clients, std::uint64_t seed) {
  RngStream rng(DeriveKey(seed, StreamTag::kSpeed));
  std::vector<double> factors(n_clients);
  for (double &f : factors) f = rng.Uniform(0.8, 1.2);
  return factors;
}

double TrainingCost(double speed_factor, int epochs, std::size_t shard_size, double seconds_per_sample) {
  return speed_factor * seconds_per_sample * static_cast<double>(epochs) * static_cast<double>(shard_size);
}

void EventQueue::Push(ClientUpdate update) {
  const double at = update.deliver_at;
  heap_.push(Entry{at, next_sequence_++, std::move(update)});
}

ClientUpdate EventQueue::Pop() {
  ClientUpdate out = heap_.top().update;
  heap_.pop();
  return out;
}

void SnapshotHistory::Record(const ModelSnapshot &snapshot) {
  entries_[snapshot.version] = Entry{snapshot, 0};
  newest_ = std::max(newest_, snapshot.version);
  Evict();
}

void SnapshotHistory::Pin(std::uint64_t version) {
  auto it = entries_.find(version);
  if (it == entries_.end()) throw ConsistencyError("snapshot history: cannot pin unknown version");
  ++it->second.pins;
}

void SnapshotHistory::Unpin(std::uint64_t version) {
  auto it = entries_.find(version);
  if (it == entries_.end() || it->second.pins == 0) {
    throw ConsistencyError("snapshot history: version " + std::to_string(version) + " is not pinned");
  }
  --it->second.pins;
  Evict();
}

const ModelSnapshot &SnapshotHistory::Get(std::uint64_t version) const {
  auto it = entries_.find(version);
  if (it == entries_.end()) {
    throw ConsistencyError("snapshot history: version " + std::to_string(version) + " is not retained");
  }
  return it->second.snapshot;
}

void SnapshotHistory::Evict() {
  for (auto it = entries_.begin(); it != entries_.end();) {
    const bool outside_window = newest_ - it->first >= window_;
    if (outside_window && it->second.pins == 0) {
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
}

Server::Server(const StalenessConfig &cfg, ParamVector initial, std::size_t history_window)
    : cfg_(cfg), current_{0, std::move(initial), 0.0}, history_(history_window) {
  history_.Record(current_);
}

ModelSnapshot Server::Checkout() {
  history_.Pin(current_.version);
  return current_;
}

AggregationRecord Server::OnUpdate(const ClientUpdate &update, double now) {
  if (update.base_version > current_.version) throw ConsistencyError("update is based on a future version");
  const ModelSnapshot &base = history_.Get(update.base_version);
  AggregationRecord rec;
  rec.client = update.client;
  rec.base_version = update.base_version;
  rec.tau = current_.version - update.base_version;
  rec.local_epochs = update.local_epochs;
  rec.gamma = ComputeStaleness(cfg_, current_, base, update.delta);
  rec.eta = AdaptiveLearningRate(cfg_, rec.gamma);

  current_ = ModelSnapshot{current_.version + 1, AddScaled(current_.params, rec.eta, update.delta),
                           std::max(now, current_.vtime)};
  rec.version = current_.version;
  rec.vtime = current_.vtime;
  history_.Record(current_);
  history_.Unpin(update.base_version);
  return rec;
}

void SimConfig::Validate() const {
  model.Validate();
  if (!train || !test) throw ValidationError("simulation: train and test datasets are required");
  if (train->size() == 0 || test->size() == 0) throw ValidationError("simulation: empty dataset");
  if (train->dim() != model.input_dim || test->dim() != model.input_dim) {
    throw ValidationError("simulation: dataset dimension does not match the model input");
  }
  if (train->num_classes > model.num_classes || test->num_classes > model.num_classes) {
    throw ValidationError("simulation: dataset has more classes than the model");
  }
  if (partition.num_clients() == 0) throw ValidationError("simulation: no clients");
  partition.Check(train->size());
  scenario.Validate();
  staleness.Validate();
  if (batch_size < 1) throw ValidationError("simulation: batch_size must be >= 1");
  if (!(local_lr >= 0.0) || !std::isfinite(local_lr)) throw ValidationError("simulation: local lr must be >= 0");
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw ValidationError("simulation: budget must be >= 0");
  if (!(eval_interval > 0.0)) throw ValidationError("simulation: eval interval must be > 0");
  if (!(seconds_per_sample > 0.0)) throw ValidationError("simulation: seconds_per_sample must be > 0");
  if (fixed_delay && !(*fixed_delay >= 0.0)) throw ValidationError("simulation: fixed delay must be >= 0");
}

namespace {

class Simulation {
 public:
  explicit Simulation(const SimConfig &cfg)
      : cfg_(cfg),
        n_clients_(cfg.partition.num_clients()),
        server_(cfg.staleness, InitParams(cfg.model, cfg.seed), 4 * n_clients_),
        speed_(SpeedFactors(n_clients_, cfg.seed)),
        last_gamma_(n_clients_, 0.0),
        rounds_(n_clients_, 0) {
    delay_rng_.reserve(n_clients_);
    for (std::size_t i = 0; i < n_clients_; ++i) delay_rng_.emplace_back(DeriveKey(cfg.seed, StreamTag::kDelay, i));
  }

  RunTrace Run() {
    trace_.initial = server_.current();
    if (cfg_.keep_snapshots) trace_.snapshots.push_back(server_.current());
    for (std::size_t i = 0; i < n_clients_; ++i) StartClient(i, 0.0);

    while (!queue_.empty() && queue_.Top().deliver_at <= cfg_.budget) {
      ClientUpdate update = queue_.Pop();
      EvaluateUntil(update.deliver_at, /*inclusive=*/false);
      const AggregationRecord rec = server_.OnUpdate(update, update.deliver_at);
      trace_.aggregations.push_back(rec);
      if (cfg_.keep_snapshots) {
        trace_.snapshots.push_back(server_.current());
        trace_.deltas.push_back(update.delta);
      }
      last_gamma_[update.client] = rec.gamma;
      StartClient(update.client, update.deliver_at);
    }
    EvaluateUntil(cfg_.budget, /*inclusive=*/true);
    trace_.final_model = server_.current();
    return std::move(trace_);
  }

 private:
  // Steps (1)-(5) of a client round: snapshot, choose K, train, sample delay, enqueue.
  void StartClient(std::size_t client, double now) {
    const ModelSnapshot base = server_.Checkout();
    const int epochs = AdjustLocalEpochs(cfg_.staleness.epoch_rule, last_gamma_[client]);
    const auto &shard = cfg_.partition.shards[client];
    const LocalTrainOptions options{epochs, cfg_.batch_size, cfg_.local_lr};
    const ParamVector local = LocalTrain(cfg_.model, base.params, cfg_.train->view(), shard, options,
                                         DeriveKey(cfg_.seed, StreamTag::kShuffle, client, rounds_[client]));
    ++rounds_[client];
    const double delay = cfg_.fixed_delay ? *cfg_.fixed_delay : SampleDelay(cfg_.scenario, delay_rng_[client]);
    const double cost = TrainingCost(speed_[client], epochs, shard.size(), cfg_.seconds_per_sample);
    queue_.Push(ClientUpdate{client, base.version, Subtract(local, base.params), epochs, now + cost + delay});
  }

  void EvaluateUntil(double t, bool inclusive) {
    for (;;) {
      const double tick = static_cast<double>(next_tick_) * cfg_.eval_interval;
      if (tick > cfg_.budget || (inclusive ? tick > t : tick >= t)) return;
      EvalPoint point;
      point.vtime = tick;
      point.version = server_.current().version;
      if (!trace_.aggregations.empty()) {
        const AggregationRecord &last = trace_.aggregations.back();
        point.tau = last.tau;
        point.gamma = last.gamma;
        point.eta = last.eta;
      }
      point.eval = Evaluate(cfg_.model, server_.current().params, cfg_.test->view());
      trace_.evals.push_back(point);
      ++next_tick_;
    }
  }

  const SimConfig &cfg_;
  std::size_t n_clients_;
  Server server_;
  std::vector<double> speed_;
  std::vector<double> last_gamma_;
  std::vector<std::uint64_t> rounds_;
  std::vector<RngStream> delay_rng_;
  EventQueue queue_;
  RunTrace trace_;
  std::uint64_t next_tick_ = 0;
};

}  // namespace

RunTrace RunSimulation(const SimConfig &cfg) {
  cfg.Validate();
  return Simulation(cfg).Run();
}

}  // namespace asyncfl
