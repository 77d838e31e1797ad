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

#include <array>
#include <cstdint>
#include <deque>
#include <ostream>
#include <vector>

#include "loracell/channel.hpp"
#include "loracell/collision.hpp"
#include "loracell/rng.hpp"
#include "loracell/scenario.hpp"

namespace loracell {

struct NodeState {
  NodeId node_id = 0;
  Position position;
  RadioParams radio;
  std::uint32_t fcnt = 0;  // FCnt of the next uplink
  double traffic_period_s = 30.0;
  double next_tx_time_s = 0.0;
  std::deque<std::array<std::uint8_t, kLinkAdrReqSize>> pending_commands;
};

enum class EventKind { kTransmissionEnd = 0, kTransmissionStart = 1, kScenarioEnd = 2 };

struct SimEvent {
  double time_s = 0.0;
  EventKind kind = EventKind::kScenarioEnd;
  NodeId node_id = 0;
  std::uint64_t tx_id = 0;
};

/// Strict total order: time, then end < start < scenario end, then node id.
bool event_before(const SimEvent& a, const SimEvent& b);

struct LogRecord {
  double time_s = 0.0;  // end of the transmission
  NodeId node_id = 0;
  std::uint32_t fcnt = 0;
  int sf = 7;
  int channel = 0;
  double rssi_dbm = 0.0;
  Verdict verdict = Verdict::kReceived;

  bool received() const { return verdict == Verdict::kReceived; }
};

/// One record per finished transmission, in completion order.
class EventLog {
 public:
  void append(const LogRecord& record) { records_.push_back(record); }
  const std::vector<LogRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// `time_s,node_id,fcnt,sf,channel,rssi_dbm,received` with a header row.
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;

 private:
  std::vector<LogRecord> records_;
};

struct SimulationResult {
  EventLog log;
  std::vector<NodeState> nodes;  // final state
  std::size_t starts = 0;
  std::size_t ends = 0;
  std::size_t commands_applied = 0;
  std::size_t commands_rejected = 0;
  double measure_from_s = 0.0;  // end of warm-up
};

/// Next uplink time after `now`: exponential (mean = period) or
/// period +- jitter. Always strictly later than `now`.
double schedule_next_uplink(const NodeState& node, double now, const ScenarioConfig& config,
                            Rng& rng);

/// `count` positions uniform over the disk of `radius_m` around the origin
/// (the gateway).
std::vector<Position> place_nodes(std::size_t count, double radius_m, Rng& rng);

/// Runs one scenario to completion. Throws ConfigError before any event is
/// processed if the scenario is invalid.
SimulationResult run(const ScenarioConfig& config);

}  // namespace loracell
