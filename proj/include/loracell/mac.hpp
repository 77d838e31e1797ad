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
#include <span>

#include "loracell/radio.hpp"

namespace loracell {

inline constexpr std::uint8_t kLinkAdrCid = 0x03;
inline constexpr std::size_t kLinkAdrReqSize = 5;

/// Six TXPower levels are defined for EU868 (index 0 = max EIRP).
inline constexpr int kMaxTxPowerIndex = 5;
/// Index for 14 dBm (2 dB below the 16 dBm max EIRP).
inline constexpr std::uint8_t kTxPowerIndex14Dbm = 1;

struct LinkAdrReq {
  std::uint8_t data_rate = 0;     // 4 bits
  std::uint8_t tx_power = 0;      // 4 bits
  std::uint16_t ch_mask = 0;      // bit i enables channel i
  std::uint8_t ch_mask_cntl = 0;  // 3 bits
  std::uint8_t nb_trans = 1;      // 4 bits, 0 keeps the current setting
  std::uint8_t rfu = 0;           // 1 bit, encodes as 0

  friend bool operator==(const LinkAdrReq&, const LinkAdrReq&) = default;
};

struct LinkAdrAns {
  bool power_ack = false;
  bool data_rate_ack = false;
  bool channel_mask_ack = false;

  bool accepted() const { return power_ack && data_rate_ack && channel_mask_ack; }
  friend bool operator==(const LinkAdrAns&, const LinkAdrAns&) = default;
};

/// CID, DataRate_TXPower, ChMask (LE), Redundancy. Throws CodecError when a
/// field exceeds its width, rfu is set, or the mask is empty with ChMaskCntl 0.
std::array<std::uint8_t, kLinkAdrReqSize> encode_link_adr_req(const LinkAdrReq& req);

/// Throws CodecError on wrong length or CID.
LinkAdrReq decode_link_adr_req(std::span<const std::uint8_t> bytes);

/// CID followed by the status byte (bit 2 power, bit 1 data rate, bit 0 mask).
std::array<std::uint8_t, 2> encode_link_adr_ans(const LinkAdrAns& ans);
LinkAdrAns decode_link_adr_ans(std::span<const std::uint8_t> bytes);

/// Applies a decoded request to a node's radio. Either every field is applied
/// and all three ACKs are set, or nothing changes. The node keeps its channel
/// if the mask still enables it, otherwise moves to the lowest enabled one.
/// TX power is acknowledged but never changes the simulated power.
LinkAdrAns apply_link_adr(RadioParams& radio, const LinkAdrReq& req, std::size_t num_channels);

}  // namespace loracell
