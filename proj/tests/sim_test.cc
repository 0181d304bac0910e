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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "asyncfl/data.h"
#include "asyncfl/error.h"
#include "asyncfl/rng.h"
#include "asyncfl/sim.h"
#include "oracles.h"

namespace asyncfl {
namespace {

SimConfig SmallConfig(std::uint64_t seed, std::size_t clients = 6, MetricKind metric = MetricKind::kEuclidean) {
  auto train = std::make_shared<Dataset>(SynthBlobs(40, 4, 3, 0.5, DeriveKey(seed, 1)));
  auto test = std::make_shared<Dataset>(SynthBlobs(20, 4, 3, 0.5, DeriveKey(seed, 2)));
  SimConfig cfg;
  cfg.model = ModelSpec::Logistic(4, 3);
  cfg.partition = DirichletPartition(train->samples.labels, clients, 0.5, seed);
  cfg.train = train;
  cfg.test = test;
  cfg.staleness.metric = metric;
  cfg.budget = 40.0;
  cfg.eval_interval = 5.0;
  cfg.seed = seed;
  return cfg;
}

TEST(DelayTest, ClipBounds) {
  EXPECT_EQ(ClipDelay(AsynchronyScenario::High(), 12.3), 10.0);
  EXPECT_EQ(ClipDelay(AsynchronyScenario::High(), -0.4), 0.0);
  EXPECT_EQ(ClipDelay(AsynchronyScenario::Low(), 2.5), 2.5);
  for (const auto &sc : {AsynchronyScenario::Low(), AsynchronyScenario::Medium(), AsynchronyScenario::High()}) {
    RngStream rng(DeriveKey(5, StreamTag::kDelay, 0));
    for (int i = 0; i < 100000; ++i) {
      const double d = SampleDelay(sc, rng);
      ASSERT_GE(d, 0.0);
      ASSERT_LE(d, sc.max_delay);
    }
  }
}

TEST(DelayTest, LowScenarioMean) {
  // Mean of clip(N(1, 0.25), 0, 3) by quadrature is 1.0042.
  RngStream rng(DeriveKey(6, StreamTag::kDelay, 0));
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += SampleDelay(AsynchronyScenario::Low(), rng);
  EXPECT_NEAR(sum / n, 1.0042, 0.01);
}

TEST(DelayTest, NamedScenarios) {
  EXPECT_EQ(AsynchronyScenario::Named("medium").max_delay, 6.0);
  EXPECT_THROW(AsynchronyScenario::Named("extreme"), ValidationError);
  AsynchronyScenario bad{"x", 1.0, 0.0, 3.0};
  EXPECT_THROW(bad.Validate(), ValidationError);
}

TEST(CostTest, LinearInEpochsAndPositive) {
  const double one = TrainingCost(1.1, 1, 50, kDefaultSecondsPerSample);
  EXPECT_GT(one, 0.0);
  EXPECT_NEAR(TrainingCost(1.1, 4, 50, kDefaultSecondsPerSample), 4.0 * one, 1e-12);
  EXPECT_NEAR(one, 1.1 * 0.005 * 50, 1e-12);
}

TEST(CostTest, SpeedFactorsDeterministicAndInRange) {
  const auto a = SpeedFactors(30, 3);
  EXPECT_EQ(a, SpeedFactors(30, 3));
  EXPECT_NE(a, SpeedFactors(30, 4));
  for (double s : a) {
    EXPECT_GE(s, 0.8);
    EXPECT_LE(s, 1.2);
  }
}

TEST(EventQueueTest, OrdersByTimeThenInsertion) {
  EventQueue q;
  auto make = [](std::size_t client, double t) { return ClientUpdate{client, 0, ParamVector::Zeros(1), 1, t}; };
  q.Push(make(0, 2.0));
  q.Push(make(1, 1.0));
  q.Push(make(2, 2.0));
  q.Push(make(3, 1.0));
  std::vector<std::size_t> order;
  while (!q.empty()) order.push_back(q.Pop().client);
  EXPECT_EQ(order, (std::vector<std::size_t>{1, 3, 0, 2}));
}

TEST(SnapshotHistoryTest, EvictsOutsideWindowUnlessPinned) {
  SnapshotHistory h(2);
  h.Record({0, ParamVector::Zeros(2), 0.0});
  h.Pin(0);
  for (std::uint64_t v = 1; v <= 5; ++v) h.Record({v, ParamVector::Zeros(2), static_cast<double>(v)});
  EXPECT_TRUE(h.Contains(0));
  EXPECT_FALSE(h.Contains(3));
  EXPECT_TRUE(h.Contains(4));
  EXPECT_TRUE(h.Contains(5));
  EXPECT_THROW(h.Get(2), ConsistencyError);
  h.Unpin(0);
  EXPECT_FALSE(h.Contains(0));
  EXPECT_THROW(h.Unpin(0), ConsistencyError);
  EXPECT_EQ(h.Get(5).vtime, 5.0);
}

TEST(ServerTest, FreshUpdateUsesFullRate) {
  StalenessConfig cfg;
  Server server(cfg, ParamVector({1.0, 1.0}), 8);
  const ModelSnapshot base = server.Checkout();
  const ModelSnapshot base2 = server.Checkout();
  const auto r1 = server.OnUpdate({0, base.version, ParamVector({0.1, -0.1}), 3, 1.0}, 1.0);
  EXPECT_EQ(r1.version, 1u);
  EXPECT_EQ(r1.tau, 0u);
  EXPECT_EQ(r1.gamma, 0.0);
  EXPECT_DOUBLE_EQ(r1.eta, cfg.lambda / cfg.epsilon);
  EXPECT_DOUBLE_EQ(server.current().params[0], 1.0 + r1.eta * 0.1);
  // A second update at the same virtual time still gets its own version.
  const auto r2 = server.OnUpdate({1, base2.version, ParamVector({0.2, 0.0}), 3, 1.0}, 1.0);
  EXPECT_EQ(r2.version, 2u);
  EXPECT_EQ(r2.tau, 1u);
  EXPECT_GT(r2.gamma, 0.0);
  EXPECT_LT(r2.eta, r1.eta);
  EXPECT_THROW(server.OnUpdate({0, 7, ParamVector({0.0, 0.0}), 3, 1.0}, 1.0), ConsistencyError);
}

TEST(SimulationTest, ZeroBudgetEvaluatesInitialModelOnly) {
  SimConfig cfg = SmallConfig(1);
  cfg.budget = 0.0;
  const RunTrace trace = RunSimulation(cfg);
  EXPECT_TRUE(trace.aggregations.empty());
  ASSERT_EQ(trace.evals.size(), 1u);
  EXPECT_EQ(trace.evals[0].version, 0u);
  EXPECT_EQ(trace.final_model.version, 0u);
}

TEST(SimulationTest, Deterministic) {
  const SimConfig cfg = SmallConfig(2);
  const RunTrace a = RunSimulation(cfg);
  const RunTrace b = RunSimulation(cfg);
  EXPECT_EQ(a.final_model.params, b.final_model.params);
  ASSERT_EQ(a.aggregations.size(), b.aggregations.size());
  for (std::size_t i = 0; i < a.aggregations.size(); ++i) {
    EXPECT_EQ(a.aggregations[i].gamma, b.aggregations[i].gamma);
    EXPECT_EQ(a.aggregations[i].vtime, b.aggregations[i].vtime);
  }
}

TEST(SimulationTest, TraceInvariants) {
  SimConfig cfg = SmallConfig(3);
  cfg.budget = 60.0;
  const RunTrace trace = RunSimulation(cfg);
  ASSERT_FALSE(trace.aggregations.empty());
  double last = 0.0;
  for (std::size_t i = 0; i < trace.aggregations.size(); ++i) {
    const auto &rec = trace.aggregations[i];
    EXPECT_EQ(rec.version, i + 1);
    EXPECT_GE(rec.vtime, last);
    EXPECT_LE(rec.vtime, cfg.budget);
    EXPECT_EQ(rec.tau, rec.version - 1 - rec.base_version);
    if (rec.tau == 0) EXPECT_LE(rec.gamma, 1e-12);
    EXPECT_NEAR(rec.eta, cfg.staleness.lambda / (rec.gamma + cfg.staleness.epsilon), 1e-12);
    last = rec.vtime;
  }
  EXPECT_EQ(trace.evals.size(), 13u);
  for (std::size_t k = 0; k < trace.evals.size(); ++k) EXPECT_EQ(trace.evals[k].vtime, 5.0 * k);
}

TEST(SimulationTest, MatchesSequentialOracle) {
  SimConfig cfg = SmallConfig(4, 1);
  cfg.fixed_delay = 0.0;
  cfg.staleness.lambda = 0.5;
  cfg.staleness.epsilon = 1.0;
  cfg.keep_snapshots = true;
  const RunTrace trace = RunSimulation(cfg);
  ASSERT_GT(trace.aggregations.size(), 5u);
  const auto expected = testing::SequentialServerOracle(cfg, trace.aggregations.size());
  for (std::size_t v = 0; v < expected.size(); ++v) {
    for (std::size_t j = 0; j < expected[v].size(); ++j) {
      ASSERT_NEAR(trace.snapshots[v].params[j], expected[v][j], 1e-9) << "version " << v;
    }
  }
}

TEST(SimulationTest, LoggedGammaMatchesOfflineRecomputation) {
  SimConfig cfg = SmallConfig(5);
  cfg.scenario = AsynchronyScenario::High();
  cfg.keep_snapshots = true;
  const RunTrace trace = RunSimulation(cfg);
  ASSERT_FALSE(trace.aggregations.empty());
  for (std::size_t i = 0; i < trace.aggregations.size(); ++i) {
    const double offline = testing::OfflineEuclideanGamma(trace, i);
    EXPECT_NEAR(trace.aggregations[i].gamma, offline, 1e-12 * std::max(1.0, offline));
  }
}

TEST(SimulationTest, HighAsynchronyRaisesStaleness) {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto mean_gamma = [&](AsynchronyScenario sc) {
      // Default experiment scale: 4 x 250 blobs in 8 dimensions, 20 clients.
      auto train = std::make_shared<Dataset>(SynthBlobs(250, 8, 4, 0.5, DeriveKey(seed, 1)));
      SimConfig cfg;
      cfg.model = ModelSpec::Logistic(8, 4);
      cfg.partition = DirichletPartition(train->samples.labels, 20, 0.5, seed);
      cfg.train = train;
      cfg.test = train;
      cfg.seed = seed;
      cfg.eval_interval = 300.0;
      cfg.scenario = sc;
      const RunTrace trace = RunSimulation(cfg);
      double total = 0.0;
      for (const auto &rec : trace.aggregations) total += rec.gamma;
      return total / static_cast<double>(std::max<std::size_t>(trace.aggregations.size(), 1));
    };
    wins += mean_gamma(AsynchronyScenario::High()) > mean_gamma(AsynchronyScenario::Low());
  }
  EXPECT_GE(wins, 8);
}

TEST(SimulationTest, RejectsInvalidConfig) {
  SimConfig cfg = SmallConfig(6);
  cfg.budget = -1.0;
  EXPECT_THROW(RunSimulation(cfg), ValidationError);
  cfg = SmallConfig(6);
  cfg.train.reset();
  EXPECT_THROW(RunSimulation(cfg), ValidationError);
}

}  // namespace
}  // namespace asyncfl
