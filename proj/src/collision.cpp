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

#include "loracell/collision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loracell {

namespace {

// Boundaries are compared with 1 ns slack so that computed interval ends
// which agree analytically also agree numerically.
constexpr double kTimeEpsilon = 1e-9;

double clash_threshold_khz(Bandwidth bw) {
  switch (bw) {
    case Bandwidth::k500:
      return 120.0;
    case Bandwidth::k250:
      return 60.0;
    case Bandwidth::k125:
      return 30.0;
  }
  return 30.0;
}

bool overlaps(const Transmission& a, const Transmission& b) {
  return b.start_time < a.end_time() - kTimeEpsilon && b.end_time() > a.start_time + kTimeEpsilon;
}

bool receivable(const Transmission& tx) { return tx.rssi_dbm >= sensitivity(tx.sf, tx.bandwidth); }

// `other` arrived before `tx` (ties broken by id) and is still on air when
// `tx` starts.
bool occupies_demodulator_at_start(const Transmission& other, const Transmission& tx) {
  const bool earlier = other.start_time < tx.start_time ||
                       (other.start_time == tx.start_time && other.id < tx.id);
  return earlier && other.end_time() > tx.start_time && receivable(other);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kReceived:
      return "received";
    case Verdict::kUnderSensitivity:
      return "under_sensitivity";
    case Verdict::kCapacity:
      return "capacity";
    case Verdict::kCollision:
      return "collision";
  }
  return "unknown";
}

bool frequency_clash(double f1_mhz, Bandwidth bw1, double f2_mhz, Bandwidth bw2) {
  const double diff_khz = std::abs(f1_mhz - f2_mhz) * 1000.0;
  const Bandwidth narrow = khz(bw1) < khz(bw2) ? bw1 : bw2;
  return diff_khz <= clash_threshold_khz(narrow) + 1e-6;
}

bool sf_clash(SpreadingFactor a, SpreadingFactor b) { return a == b; }

double critical_section_start(const Transmission& a, int preamble_symbols) {
  return a.start_time + preamble_time(a.sf, a.bandwidth, preamble_symbols) -
         5.0 * symbol_time(a.sf, a.bandwidth);
}

bool timing_critical_overlap(const Transmission& a, const Transmission& b, int preamble_symbols) {
  const double cs = critical_section_start(a, preamble_symbols);
  return b.start_time < a.end_time() - kTimeEpsilon && b.end_time() > cs + kTimeEpsilon;
}

CaptureOutcome capture_verdict(double rssi_a_dbm, double rssi_b_dbm, double threshold_db) {
  if (rssi_a_dbm - rssi_b_dbm >= threshold_db) return CaptureOutcome::kASurvives;
  if (rssi_b_dbm - rssi_a_dbm >= threshold_db) return CaptureOutcome::kBSurvives;
  return CaptureOutcome::kBothLost;
}

Verdict resolve(const Transmission& completed, std::span<const Transmission> concurrent,
                const CollisionRules& rules) {
  if (!receivable(completed)) return Verdict::kUnderSensitivity;

  if (rules.demod_capacity) {
    const auto busy = std::count_if(concurrent.begin(), concurrent.end(), [&](const auto& other) {
      return other.id != completed.id && occupies_demodulator_at_start(other, completed);
    });
    if (busy >= *rules.demod_capacity) return Verdict::kCapacity;
  }

  for (const Transmission& other : concurrent) {
    if (other.id == completed.id) continue;
    if (!frequency_clash(completed.channel_freq_mhz, completed.bandwidth, other.channel_freq_mhz,
                         other.bandwidth)) {
      continue;
    }
    if (!sf_clash(completed.sf, other.sf)) continue;
    if (!timing_critical_overlap(completed, other, rules.preamble_symbols)) continue;
    if (capture_verdict(completed.rssi_dbm, other.rssi_dbm, rules.capture_threshold_db) !=
        CaptureOutcome::kASurvives) {
      return Verdict::kCollision;
    }
  }
  return Verdict::kReceived;
}

Gateway::Gateway(CollisionRules rules) : rules_(rules) {
  if (rules_.capture_threshold_db <= 0.0) {
    throw std::invalid_argument("capture threshold must be > 0 dB");
  }
  if (rules_.demod_capacity && *rules_.demod_capacity < 1) {
    throw std::invalid_argument("demodulator capacity must be >= 1");
  }
}

void Gateway::begin(const Transmission& tx) {
  if (!(tx.airtime > 0.0)) throw std::invalid_argument("transmission airtime must be > 0");
  active_.push_back(tx);
}

Verdict Gateway::end(std::uint64_t tx_id) {
  auto it = std::find_if(active_.begin(), active_.end(),
                         [tx_id](const Transmission& t) { return t.id == tx_id; });
  if (it == active_.end()) throw std::logic_error("transmission is not in flight");
  const Transmission done = *it;
  active_.erase(it);

  scratch_.clear();
  for (const auto* pool : {&active_, &recent_}) {
    for (const Transmission& other : *pool) {
      if (overlaps(done, other)) scratch_.push_back(other);
    }
  }
  const Verdict verdict = resolve(done, scratch_, rules_);

  recent_.push_back(done);
  prune();
  return verdict;
}

void Gateway::prune() {
  if (active_.empty()) {
    recent_.clear();
    return;
  }
  double earliest = active_.front().start_time;
  for (const Transmission& t : active_) earliest = std::min(earliest, t.start_time);
  std::erase_if(recent_, [earliest](const Transmission& t) { return t.end_time() <= earliest; });
}

}  // namespace loracell
