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

#include "loracell/mac.hpp"

#include <bit>
#include <string>

#include "loracell/errors.hpp"

namespace loracell {

std::array<std::uint8_t, kLinkAdrReqSize> encode_link_adr_req(const LinkAdrReq& req) {
  if (req.data_rate > 0x0F) throw CodecError("DataRate does not fit in 4 bits");
  if (req.tx_power > 0x0F) throw CodecError("TXPower does not fit in 4 bits");
  if (req.ch_mask_cntl > 0x07) throw CodecError("ChMaskCntl does not fit in 3 bits");
  if (req.nb_trans > 0x0F) throw CodecError("NbTrans does not fit in 4 bits");
  if (req.rfu != 0) throw CodecError("RFU bit must be 0");
  if (req.ch_mask == 0 && req.ch_mask_cntl == 0) {
    throw CodecError("ChMask must enable at least one channel when ChMaskCntl is 0");
  }
  return {
      kLinkAdrCid,
      static_cast<std::uint8_t>((req.data_rate << 4) | req.tx_power),
      static_cast<std::uint8_t>(req.ch_mask & 0xFF),
      static_cast<std::uint8_t>(req.ch_mask >> 8),
      static_cast<std::uint8_t>((req.ch_mask_cntl << 4) | req.nb_trans),
  };
}

LinkAdrReq decode_link_adr_req(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kLinkAdrReqSize) {
    throw CodecError("LinkADRReq must be 5 bytes, got " + std::to_string(bytes.size()));
  }
  if (bytes[0] != kLinkAdrCid) throw CodecError("not a LinkADRReq (CID != 0x03)");
  LinkAdrReq req;
  req.data_rate = bytes[1] >> 4;
  req.tx_power = bytes[1] & 0x0F;
  req.ch_mask = static_cast<std::uint16_t>(bytes[2] | (bytes[3] << 8));
  req.rfu = bytes[4] >> 7;
  req.ch_mask_cntl = (bytes[4] >> 4) & 0x07;
  req.nb_trans = bytes[4] & 0x0F;
  return req;
}

std::array<std::uint8_t, 2> encode_link_adr_ans(const LinkAdrAns& ans) {
  const auto status = static_cast<std::uint8_t>((ans.power_ack ? 0x04 : 0) |
                                                (ans.data_rate_ack ? 0x02 : 0) |
                                                (ans.channel_mask_ack ? 0x01 : 0));
  return {kLinkAdrCid, status};
}

LinkAdrAns decode_link_adr_ans(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != 2) throw CodecError("LinkADRAns must be 2 bytes");
  if (bytes[0] != kLinkAdrCid) throw CodecError("not a LinkADRAns (CID != 0x03)");
  if (bytes[1] & 0xF8) throw CodecError("LinkADRAns RFU bits set");
  return {(bytes[1] & 0x04) != 0, (bytes[1] & 0x02) != 0, (bytes[1] & 0x01) != 0};
}

LinkAdrAns apply_link_adr(RadioParams& radio, const LinkAdrReq& req, std::size_t num_channels) {
  LinkAdrAns ans;
  ans.power_ack = req.tx_power <= kMaxTxPowerIndex;
  ans.data_rate_ack = req.data_rate <= kMaxLoraDataRate;

  // Only bank 0 (channels 0..15) is supported; the mask may not enable
  // channels the plan does not define.
  const std::uint32_t defined = num_channels >= 16 ? 0xFFFFu : ((1u << num_channels) - 1u);
  ans.channel_mask_ack =
      req.ch_mask_cntl == 0 && req.ch_mask != 0 && (req.ch_mask & ~defined) == 0;

  if (!ans.accepted()) return ans;

  const auto [sf, bw] = dr_to_radio(DataRateIndex{req.data_rate});
  radio.sf = sf;
  radio.bandwidth = bw;
  const bool current_enabled =
      radio.channel_index >= 0 && radio.channel_index < 16 &&
      ((req.ch_mask >> radio.channel_index) & 1u) != 0;
  if (!current_enabled) radio.channel_index = std::countr_zero(req.ch_mask);
  return ans;
}

}  // namespace loracell
