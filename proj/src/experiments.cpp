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

#include "loracell/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "loracell/errors.hpp"

namespace loracell {

MetricsReport compute_metrics(const EventLog& log, double measure_from_s) {
  if (log.empty()) throw std::invalid_argument("cannot compute metrics of an empty event log");
  MetricsReport m;
  std::map<NodeId, std::size_t> node_rx;
  std::map<NodeId, const LogRecord*> last;

  for (const LogRecord& r : log.records()) {
    last[r.node_id] = &r;
    if (r.time_s < measure_from_s) continue;
    ++m.transmitted;
    ++m.per_node_transmitted[r.node_id];
    switch (r.verdict) {
      case Verdict::kReceived:
        ++m.received;
        ++node_rx[r.node_id];
        break;
      case Verdict::kCollision:
        ++m.collisions;
        break;
      case Verdict::kUnderSensitivity:
        ++m.under_sensitivity_losses;
        break;
      case Verdict::kCapacity:
        ++m.capacity_losses;
        break;
    }
  }
  if (m.transmitted == 0) throw std::invalid_argument("no log records after the warm-up cut");

  m.global_der = static_cast<double>(m.received) / static_cast<double>(m.transmitted);
  for (const auto& [node, tx] : m.per_node_transmitted) {
    m.per_node_der[node] = static_cast<double>(node_rx[node]) / static_cast<double>(tx);
  }
  for (const auto& [node, rec] : last) {
    ++m.sf_histogram[rec->sf];
    ++m.channel_load[{rec->sf, rec->channel}];
  }
  return m;
}

MetricsReport compute_metrics(const SimulationResult& result) {
  return compute_metrics(result.log, result.measure_from_s);
}

Experiment parse_experiment(std::string_view name) {
  if (name == "fig4") return Experiment::kDensity;
  if (name == "fig5") return Experiment::kCoverage;
  if (name == "fig6") return Experiment::kCapacity;
  throw ConfigError("unknown experiment '" + std::string(name) + "' (expected fig4, fig5, fig6)");
}

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::kDensity:
      return "fig4";
    case Experiment::kCoverage:
      return "fig5";
    case Experiment::kCapacity:
      return "fig6";
  }
  return "fig4";
}

ScenarioConfig sweep_scenario(const SweepRequest& request, std::size_t index) {
  const std::size_t axis_len = request.axis.size();
  if (axis_len == 0 || index >= request.schemes.size() * axis_len) {
    throw std::out_of_range("sweep index out of range");
  }
  ScenarioConfig c = request.base;
  c.scheme = request.schemes[index / axis_len];
  const double value = request.axis[index % axis_len];
  c.seed = request.base_seed + index;
  c.positions.clear();
  c.node_distance_m.reset();

  auto as_count = [](double v) {
    if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("node counts must be whole numbers >= 1");
    return static_cast<std::size_t>(v);
  };
  switch (request.experiment) {
    case Experiment::kDensity:
      c.num_nodes = as_count(value);
      c.radius_m = 50.0;
      c.period_s = 30.0;
      break;
    case Experiment::kCoverage:
      c.num_nodes = 1000;
      c.radius_m = value;
      c.period_s = 100.0;
      break;
    case Experiment::kCapacity:
      c.num_nodes = as_count(value);
      c.radius_m = 200.0;
      c.period_s = 100.0;
      break;
  }
  return c;
}

std::vector<SweepPoint> run_sweep(const SweepRequest& request) {
  if (request.schemes.empty() || request.axis.empty()) {
    throw ConfigError("a sweep needs at least one scheme and one axis value");
  }
  const std::size_t total = request.schemes.size() * request.axis.size();
  // Validate every point up front so a bad axis value fails before any run.
  std::vector<ScenarioConfig> scenarios;
  scenarios.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    scenarios.push_back(sweep_scenario(request, i));
    validate(scenarios.back());
  }

  std::vector<SweepPoint> points(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        const ScenarioConfig& c = scenarios[i];
        const auto result = run(c);
        points[i] = {std::string(experiment_name(request.experiment)), c.scheme, c.num_nodes,
                     c.radius_m, c.period_s, c.seed, compute_metrics(result).global_der};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  unsigned threads = request.threads ? request.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return points;
}

namespace {

std::vector<double> to_axis(const std::vector<std::size_t>& counts) {
  return {counts.begin(), counts.end()};
}

std::vector<SweepPoint> sweep(Experiment e, const std::vector<std::string>& schemes,
                              std::vector<double> axis, std::uint64_t seed,
                              const ScenarioConfig& base) {
  SweepRequest request;
  request.experiment = e;
  request.schemes = schemes;
  request.axis = std::move(axis);
  request.base_seed = seed;
  request.base = base;
  return run_sweep(request);
}

}  // namespace

std::vector<SweepPoint> run_experiment_1(const std::vector<std::string>& schemes,
                                         const std::vector<std::size_t>& node_counts,
                                         std::uint64_t seed, const ScenarioConfig& base) {
  return sweep(Experiment::kDensity, schemes, to_axis(node_counts), seed, base);
}

std::vector<SweepPoint> run_experiment_2(const std::vector<std::string>& schemes,
                                         const std::vector<double>& radii, std::uint64_t seed,
                                         const ScenarioConfig& base) {
  return sweep(Experiment::kCoverage, schemes, radii, seed, base);
}

std::vector<SweepPoint> run_experiment_3(const std::vector<std::string>& schemes,
                                         const std::vector<std::size_t>& node_counts,
                                         std::uint64_t seed, const ScenarioConfig& base) {
  return sweep(Experiment::kCapacity, schemes, to_axis(node_counts), seed, base);
}

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::string out = "experiment,scheme,nodes,radius_m,period_s,seed,der\n";
  char line[256];
  for (const SweepPoint& p : points) {
    std::snprintf(line, sizeof line, "%s,%s,%zu,%g,%g,%llu,%.6f\n", p.experiment.c_str(),
                  p.scheme.c_str(), p.nodes, p.radius_m, p.period_s,
                  static_cast<unsigned long long>(p.seed), p.der);
    out += line;
  }
  return out;
}

}  // namespace loracell
