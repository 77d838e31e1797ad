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
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace loracell {

/// LoRa spreading factor, always within 7..12.
class SpreadingFactor {
 public:
  static constexpr int kMin = 7;
  static constexpr int kMax = 12;
  static constexpr int kCount = kMax - kMin + 1;

  /// Throws std::invalid_argument when `value` is outside 7..12.
  constexpr explicit SpreadingFactor(int value) : value_(value) {
    if (!valid(value)) throw std::invalid_argument("spreading factor must be within 7..12");
  }

  static constexpr bool valid(int value) { return value >= kMin && value <= kMax; }

  constexpr int value() const { return value_; }
  /// Zero-based position (SF7 -> 0, SF12 -> 5), for table lookups.
  constexpr std::size_t index() const { return static_cast<std::size_t>(value_ - kMin); }

  friend constexpr auto operator<=>(SpreadingFactor, SpreadingFactor) = default;

 private:
  int value_;
};

/// All six spreading factors in ascending order.
std::array<SpreadingFactor, SpreadingFactor::kCount> all_spreading_factors();

enum class Bandwidth : int { k125 = 125, k250 = 250, k500 = 500 };

constexpr int khz(Bandwidth bw) { return static_cast<int>(bw); }
constexpr double hz(Bandwidth bw) { return static_cast<int>(bw) * 1000.0; }
/// Throws std::invalid_argument for anything but 125/250/500.
Bandwidth bandwidth_from_khz(int khz);

/// Coding rate 4/N, stored by its denominator N.
enum class CodingRate : int { k4_5 = 5, k4_6 = 6, k4_7 = 7, k4_8 = 8 };

constexpr int denominator(CodingRate cr) { return static_cast<int>(cr); }
CodingRate coding_rate_from_denominator(int denom);

inline constexpr double kMaxEirpDbm = 16.0;

struct RadioParams {
  SpreadingFactor sf{7};
  Bandwidth bandwidth = Bandwidth::k125;
  CodingRate coding_rate = CodingRate::k4_5;
  double tx_power_dbm = 14.0;
  int channel_index = 0;

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

/// Ordered uplink channel centre frequencies in MHz.
class ChannelPlan {
 public:
  /// The 8-channel EU868 grid 868.1 .. 869.5 MHz in 200 kHz steps.
  ChannelPlan();
  /// Throws std::invalid_argument unless non-empty and strictly increasing.
  explicit ChannelPlan(std::vector<double> center_frequencies_mhz);

  std::size_t size() const { return freqs_.size(); }
  double frequency_mhz(int channel_index) const;
  const std::vector<double>& frequencies() const { return freqs_; }

  /// Plan restricted to its first `count` channels.
  ChannelPlan first(std::size_t count) const;

 private:
  std::vector<double> freqs_;
};

/// Throws std::invalid_argument when the channel index or tx power is
/// outside what the plan and regulatory limit allow.
void validate(const RadioParams& params, const ChannelPlan& plan);

struct AirtimeOptions {
  int preamble_symbols = 8;
  bool explicit_header = true;
  bool low_dr_optimize = false;
};

/// True for the SF/bandwidth pairs whose symbol time requires low data rate
/// optimization (SF11 and SF12 at 125 kHz).
bool low_dr_optimize_required(SpreadingFactor sf, Bandwidth bw);

/// Symbol duration 2^SF / BW in seconds.
double symbol_time(SpreadingFactor sf, Bandwidth bw);

/// Preamble duration (preamble_symbols + 4.25) symbols, in seconds.
double preamble_time(SpreadingFactor sf, Bandwidth bw, int preamble_symbols);

/// Number of payload symbols (including the 8 fixed header symbols), CRC on.
int payload_symbols(SpreadingFactor sf, CodingRate cr, int payload_len, bool explicit_header,
                    bool low_dr_optimize);

/// Semtech time-on-air with payload CRC enabled. Throws std::invalid_argument
/// if payload_len < 1 or if low data rate optimization is required but off.
double airtime(const RadioParams& params, int payload_len, const AirtimeOptions& options);

/// Time-on-air with low data rate optimization set automatically.
double airtime(const RadioParams& params, int payload_len, int preamble_symbols = 8);

/// Receiver sensitivity in dBm (SX1276 table, 18 cells).
double sensitivity(SpreadingFactor sf, Bandwidth bw);

/// EU868 data-rate index. Only 0..6 are LoRa rates; 7 (FSK) is rejected.
struct DataRateIndex {
  int value = 0;
  friend bool operator==(DataRateIndex, DataRateIndex) = default;
};

inline constexpr int kMaxLoraDataRate = 6;

/// DR0 = SF12/125 ... DR5 = SF7/125, DR6 = SF7/250. Throws std::invalid_argument
/// for DR7 (FSK) and anything outside 0..7.
std::pair<SpreadingFactor, Bandwidth> dr_to_radio(DataRateIndex dr);

/// Inverse of dr_to_radio. Throws std::invalid_argument outside its image.
DataRateIndex radio_to_dr(SpreadingFactor sf, Bandwidth bw);

}  // namespace loracell
