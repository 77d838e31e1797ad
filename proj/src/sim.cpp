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

#include "loracell/sim.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "loracell/errors.hpp"

namespace loracell {

bool event_before(const SimEvent& a, const SimEvent& b) {
  if (a.time_s != b.time_s) return a.time_s < b.time_s;
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  if (a.node_id != b.node_id) return a.node_id < b.node_id;
  return a.tx_id < b.tx_id;
}

void EventLog::write_csv(std::ostream& out) const {
  out << "time_s,node_id,fcnt,sf,channel,rssi_dbm,received\n";
  char line[160];
  for (const LogRecord& r : records_) {
    std::snprintf(line, sizeof line, "%.6f,%u,%u,%d,%d,%.4f,%d\n", r.time_s, r.node_id, r.fcnt, r.sf,
                  r.channel, r.rssi_dbm, r.received() ? 1 : 0);
    out << line;
  }
}

std::string EventLog::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

double schedule_next_uplink(const NodeState& node, double now, const ScenarioConfig& config,
                            Rng& rng) {
  if (!(node.traffic_period_s > 0.0)) throw std::invalid_argument("traffic period must be > 0");
  double next = now;
  if (config.traffic == TrafficModel::kExponential) {
    next = now + rng.exponential(node.traffic_period_s);
  } else {
    next = now + node.traffic_period_s * (1.0 + config.jitter_fraction * (2.0 * rng.uniform() - 1.0));
  }
  if (!(next > now)) next = std::nextafter(now, std::numeric_limits<double>::infinity());
  return next;
}

std::vector<Position> place_nodes(std::size_t count, double radius_m, Rng& rng) {
  if (count < 1) throw std::invalid_argument("place_nodes needs count >= 1");
  if (!(radius_m > 0.0)) throw std::invalid_argument("place_nodes needs radius > 0");
  std::vector<Position> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double u = rng.uniform();
    while (u == 0.0) u = rng.uniform();
    const double r = radius_m * std::sqrt(u);
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    out.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return out;
}

namespace {

struct EventLater {
  bool operator()(const SimEvent& a, const SimEvent& b) const { return event_before(b, a); }
};

std::vector<Position> initial_positions(const ScenarioConfig& config) {
  if (!config.positions.empty()) return config.positions;
  Rng rng(config.seed, stream_key(StreamTag::kPlacement, 0));
  if (config.node_distance_m) {
    std::vector<Position> out;
    out.reserve(config.num_nodes);
    for (std::size_t i = 0; i < config.num_nodes; ++i) {
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      out.push_back({*config.node_distance_m * std::cos(theta),
                     *config.node_distance_m * std::sin(theta)});
    }
    return out;
  }
  return place_nodes(config.num_nodes, config.radius_m, rng);
}

SpreadingFactor initial_sf(const ScenarioConfig& config, NodeId id, double distance_m) {
  switch (config.initial_sf) {
    case InitialSfPolicy::kLowestFeasible:
      return lowest_feasible_sf(distance_m, config.bandwidth, config.tx_power_dbm,
                                PathLossParams{config.path_loss.d0_m, config.path_loss.lpl0_db,
                                               config.path_loss.gamma, 0.0});
    case InitialSfPolicy::kAllSf12:
      return SpreadingFactor{SpreadingFactor::kMax};
    case InitialSfPolicy::kRandom: {
      Rng rng(config.seed, stream_key(StreamTag::kInitialSf, id));
      return SpreadingFactor{SpreadingFactor::kMin +
                             static_cast<int>(rng.uniform_index(SpreadingFactor::kCount))};
    }
  }
  return SpreadingFactor{SpreadingFactor::kMax};
}

}  // namespace

SimulationResult run(const ScenarioConfig& config) {
  validate(config);
  const ChannelPlan plan = ChannelPlan().first(static_cast<std::size_t>(config.channels));
  const PathLossParams mean_loss{config.path_loss.d0_m, config.path_loss.lpl0_db,
                                 config.path_loss.gamma, 0.0};

  SchemeOptions options;
  options.num_channels = config.channels;
  options.total_nodes = config.num_nodes;
  options.bandwidth = config.bandwidth;
  options.drcc = config.thresholds;
  options.adr = config.adr;
  options.seed = config.seed;
  const auto scheme = make_scheme(config.scheme, options);

  const auto positions = initial_positions(config);
  const Position gateway{};
  const std::size_t n = config.num_nodes;

  std::vector<NodeState> nodes(n);
  std::vector<NodeSetup> setups(n);
  std::vector<double> distances(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<NodeId>(i);
    distances[i] = positions[i].distance_to(gateway);
    NodeState& node = nodes[i];
    node.node_id = id;
    node.position = positions[i];
    node.traffic_period_s = config.period_s;
    node.radio.sf = initial_sf(config, id, distances[i]);
    node.radio.bandwidth = config.bandwidth;
    node.radio.coding_rate = config.coding_rate;
    node.radio.tx_power_dbm = config.tx_power_dbm;
    node.radio.channel_index = 0;

    setups[i].node_id = id;
    setups[i].distance_m = distances[i];
    setups[i].rssi_dbm =
        received_power(config.tx_power_dbm, 0.0, path_loss(mean_loss, distances[i]));
    setups[i].radio = node.radio;
  }
  scheme->setup(setups);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].radio = setups[i].radio;
    validate(nodes[i].radio, plan);
  }

  CollisionRules rules;
  rules.preamble_symbols = config.preamble_symbols;
  rules.capture_threshold_db = config.capture_threshold_db;
  rules.demod_capacity = config.demod_capacity;
  Gateway gw(rules);

  std::vector<Rng> traffic_rng;
  std::vector<Rng> shadow_rng;
  traffic_rng.reserve(n);
  shadow_rng.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    traffic_rng.emplace_back(config.seed, stream_key(StreamTag::kTraffic, i));
    shadow_rng.emplace_back(config.seed, stream_key(StreamTag::kShadowing, i));
  }

  std::priority_queue<SimEvent, std::vector<SimEvent>, EventLater> queue;
  for (std::size_t i = 0; i < n; ++i) {
    double first = 0.0;
    if (config.traffic == TrafficModel::kJittered) {
      first = config.period_s * traffic_rng[i].uniform();
      if (first <= 0.0) first = std::nextafter(0.0, 1.0);
    } else {
      first = schedule_next_uplink(nodes[i], 0.0, config, traffic_rng[i]);
    }
    nodes[i].next_tx_time_s = first;
    if (first <= config.duration_s) {
      queue.push({first, EventKind::kTransmissionStart, static_cast<NodeId>(i), 0});
    }
  }
  queue.push({config.duration_s, EventKind::kScenarioEnd, 0, 0});

  SimulationResult result;
  result.measure_from_s = config.warmup_fraction * config.duration_s;
  std::vector<Transmission> on_air(n);
  std::uint64_t next_tx_id = 1;
  bool stopped = false;

  while (!queue.empty()) {
    const SimEvent ev = queue.top();
    queue.pop();
    NodeState* node = ev.kind == EventKind::kScenarioEnd ? nullptr : &nodes[ev.node_id];

    switch (ev.kind) {
      case EventKind::kScenarioEnd:
        stopped = true;
        break;

      case EventKind::kTransmissionStart: {
        if (stopped) break;
        while (!node->pending_commands.empty()) {
          const auto bytes = node->pending_commands.front();
          node->pending_commands.pop_front();
          const LinkAdrAns ans = apply_link_adr(node->radio, decode_link_adr_req(bytes), plan.size());
          ++(ans.accepted() ? result.commands_applied : result.commands_rejected);
        }
        const double shadow = config.path_loss.sigma_db > 0.0
                                  ? shadow_rng[ev.node_id].normal(0.0, config.path_loss.sigma_db)
                                  : 0.0;
        Transmission tx;
        tx.id = next_tx_id++;
        tx.node_id = node->node_id;
        tx.fcnt = node->fcnt++;
        tx.channel_index = node->radio.channel_index;
        tx.channel_freq_mhz = plan.frequency_mhz(node->radio.channel_index);
        tx.sf = node->radio.sf;
        tx.bandwidth = node->radio.bandwidth;
        tx.start_time = ev.time_s;
        tx.airtime = airtime(node->radio, config.payload_bytes, config.preamble_symbols);
        tx.rssi_dbm = received_power(node->radio.tx_power_dbm, 0.0,
                                     path_loss(config.path_loss, distances[ev.node_id], shadow));
        gw.begin(tx);
        on_air[ev.node_id] = tx;
        ++result.starts;
        queue.push({tx.end_time(), EventKind::kTransmissionEnd, node->node_id, tx.id});
        break;
      }

      case EventKind::kTransmissionEnd: {
        const Transmission& tx = on_air[ev.node_id];
        const Verdict verdict = gw.end(tx.id);
        ++result.ends;
        result.log.append({ev.time_s, tx.node_id, tx.fcnt, tx.sf.value(), tx.channel_index,
                           tx.rssi_dbm, verdict});

        if (verdict == Verdict::kReceived) {
          UplinkRecord up;
          up.node_id = tx.node_id;
          up.fcnt = tx.fcnt;
          up.rssi_dbm = tx.rssi_dbm;
          up.snr_db = snr_estimate(tx.rssi_dbm, tx.bandwidth, config.noise_figure_db);
          up.sf = tx.sf;
          up.channel_index = tx.channel_index;
          up.time_s = ev.time_s;
          if (const auto req = scheme->on_uplink(up)) {
            node->pending_commands.push_back(encode_link_adr_req(*req));
          }
        }

        if (!stopped) {
          double next = schedule_next_uplink(*node, ev.time_s, config, traffic_rng[ev.node_id]);
          if (config.duty_cycle) {
            next = std::max(next, ev.time_s + tx.airtime * (1.0 / *config.duty_cycle - 1.0));
          }
          node->next_tx_time_s = next;
          if (next <= config.duration_s) {
            queue.push({next, EventKind::kTransmissionStart, node->node_id, 0});
          }
        }
        break;
      }
    }
  }

  result.nodes = std::move(nodes);
  return result;
}

}  // namespace loracell
