// Copyright 2026 The loracell Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loracell/scenario.hpp"
#include "loracell/sim.hpp"

namespace loracell {

struct MetricsReport {
  double global_der = 0.0;
  std::size_t transmitted = 0;
  std::size_t received = 0;
  std::size_t collisions = 0;
  std::size_t under_sensitivity_losses = 0;
  std::size_t capacity_losses = 0;
  std::map<NodeId, double> per_node_der;
  std::map<NodeId, std::size_t> per_node_transmitted;
  /// Nodes per SF, taken from each node's last logged uplink.
  std::map<int, std::size_t> sf_histogram;
  /// Nodes per (SF, channel), from each node's last logged uplink.
  std::map<std::pair<int, int>, std::size_t> channel_load;
};

/// Counts over records with time >= `measure_from_s`; the SF and channel
/// distributions always use the whole log. Throws std::invalid_argument if
/// no record falls in the measured span.
MetricsReport compute_metrics(const EventLog& log, double measure_from_s = 0.0);

/// Metrics over the post-warm-up part of a run.
MetricsReport compute_metrics(const SimulationResult& result);

enum class Experiment {
  kDensity,   // radius 50 m, period 30 s, sweep node count
  kCoverage,  // 1000 nodes, period 100 s, sweep radius
  kCapacity,  // radius 200 m, period 100 s, sweep node count
};

/// "fig4", "fig5", "fig6". Throws ConfigError for anything else.
Experiment parse_experiment(std::string_view name);
std::string_view experiment_name(Experiment e);

struct SweepPoint {
  std::string experiment;
  std::string scheme;
  std::size_t nodes = 0;
  double radius_m = 0.0;
  double period_s = 0.0;
  std::uint64_t seed = 0;
  double der = 0.0;
};

struct SweepRequest {
  Experiment experiment = Experiment::kDensity;
  std::vector<std::string> schemes;
  /// Node counts for the density/capacity sweeps, radii for coverage.
  std::vector<double> axis;
  std::uint64_t base_seed = 1;
  /// Everything except nodes/radius/period/scheme/seed comes from here.
  ScenarioConfig base;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Scenario for point `index` of the sweep (scheme-major, then axis), with
/// seed = base_seed + index.
ScenarioConfig sweep_scenario(const SweepRequest& request, std::size_t index);

/// Runs the scheme x axis product. Points may run in parallel; the result is
/// always in sweep-index order.
std::vector<SweepPoint> run_sweep(const SweepRequest& request);

std::vector<SweepPoint> run_experiment_1(const std::vector<std::string>& schemes,
                                         const std::vector<std::size_t>& node_counts,
                                         std::uint64_t seed, const ScenarioConfig& base = {});
std::vector<SweepPoint> run_experiment_2(const std::vector<std::string>& schemes,
                                         const std::vector<double>& radii, std::uint64_t seed,
                                         const ScenarioConfig& base = {});
std::vector<SweepPoint> run_experiment_3(const std::vector<std::string>& schemes,
                                         const std::vector<std::size_t>& node_counts,
                                         std::uint64_t seed, const ScenarioConfig& base = {});

/// `experiment,scheme,nodes,radius_m,period_s,seed,der`, LF endings.
std::string sweep_csv(std::span<const SweepPoint> points);

}  // namespace loracell
