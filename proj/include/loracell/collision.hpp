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
#include <optional>
#include <span>
#include <vector>

#include "loracell/radio.hpp"

namespace loracell {

using NodeId = std::uint32_t;

/// One uplink as seen by the gateway.
struct Transmission {
  std::uint64_t id = 0;  // arrival order within a run
  NodeId node_id = 0;
  std::uint32_t fcnt = 0;
  int channel_index = 0;
  double channel_freq_mhz = 868.1;
  SpreadingFactor sf{7};
  Bandwidth bandwidth = Bandwidth::k125;
  double start_time = 0.0;
  double airtime = 0.0;
  double rssi_dbm = 0.0;

  double end_time() const { return start_time + airtime; }
};

enum class Verdict {
  kReceived,
  kUnderSensitivity,
  kCapacity,  // no free demodulator when the preamble arrived
  kCollision,
};

const char* to_string(Verdict v);

struct CollisionRules {
  int preamble_symbols = 8;
  double capture_threshold_db = 6.0;
  /// Simultaneous demodulations the gateway supports; nullopt is unlimited.
  std::optional<int> demod_capacity = 8;
};

/// Centre frequencies closer than 30/60/120 kHz (for 125/250/500 kHz, using
/// the narrower of the two) interfere.
bool frequency_clash(double f1_mhz, Bandwidth bw1, double f2_mhz, Bandwidth bw2);

/// Perfect inter-SF orthogonality: only equal SFs interfere.
bool sf_clash(SpreadingFactor a, SpreadingFactor b);

/// Start of `a`'s critical section: everything after its first
/// (preamble - 5) preamble symbols must be interference-free.
double critical_section_start(const Transmission& a, int preamble_symbols);

/// Whether `b` overlaps the critical section of `a`. Not symmetric in general.
bool timing_critical_overlap(const Transmission& a, const Transmission& b, int preamble_symbols);

enum class CaptureOutcome { kASurvives, kBSurvives, kBothLost };

/// The stronger signal survives if it leads by at least `threshold_db`.
CaptureOutcome capture_verdict(double rssi_a_dbm, double rssi_b_dbm, double threshold_db);

/// Verdict for `completed` given every transmission whose air interval
/// intersects it. Entries with the same id as `completed` are ignored, and
/// the order of `concurrent` does not matter.
///
/// Below-sensitivity signals are dropped first. A demodulator is then
/// required: if `demod_capacity` receivable transmissions were already being
/// demodulated when `completed` started, it is dropped. Finally every
/// same-SF, same-frequency interferer touching the critical section must be
/// beaten by the capture threshold.
Verdict resolve(const Transmission& completed, std::span<const Transmission> concurrent,
                const CollisionRules& rules);

/// Tracks the air at the gateway during a run and issues verdicts when a
/// transmission ends. Single-threaded.
class Gateway {
 public:
  explicit Gateway(CollisionRules rules);

  void begin(const Transmission& tx);

  /// Removes the transmission from the air and returns its verdict. Throws
  /// std::logic_error if the id is not in flight.
  Verdict end(std::uint64_t tx_id);

  std::size_t in_flight() const { return active_.size(); }
  const CollisionRules& rules() const { return rules_; }

 private:
  void prune();

  CollisionRules rules_;
  std::vector<Transmission> active_;
  // Ended transmissions that may still overlap something in flight.
  std::vector<Transmission> recent_;
  std::vector<Transmission> scratch_;
};

}  // namespace loracell
