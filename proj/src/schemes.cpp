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

#include "loracell/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "loracell/errors.hpp"

namespace loracell {

// ---------------------------------------------------------------------------
// Short-term DER

EstimationWindow::EstimationWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("estimation window must hold >= 1 record");
}

bool EstimationWindow::push(const UplinkRecord& record) {
  if (!records_.empty() && record.fcnt <= records_.back().fcnt) return false;
  records_.push_back(record);
  if (records_.size() > capacity_) records_.pop_front();
  return true;
}

std::optional<double> short_term_der(std::span<const UplinkRecord> records, std::size_t capacity) {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].fcnt <= records[i - 1].fcnt) {
      throw std::logic_error("FCnt not strictly increasing inside estimation window");
    }
  }
  if (capacity == 0 || records.size() < capacity) return std::nullopt;
  const auto window = records.last(capacity);
  const double transmitted =
      static_cast<double>(window.back().fcnt - window.front().fcnt) + 1.0;
  return static_cast<double>(capacity) / transmitted;
}

std::optional<double> short_term_der(const EstimationWindow& window) {
  const std::vector<UplinkRecord> copy(window.records().begin(), window.records().end());
  return short_term_der(copy, window.capacity());
}

// ---------------------------------------------------------------------------
// Saturation thresholds

int alpha_numerator(SpreadingFactor sf) {
  // s / 2^s scaled by 2^12: s * 2^(12 - s).
  return sf.value() << (SpreadingFactor::kMax - sf.value());
}

double alpha(SpreadingFactor sf) {
  double denom = 0.0;
  for (SpreadingFactor s : all_spreading_factors()) denom += s.value() / std::ldexp(1.0, s.value());
  return (sf.value() / std::ldexp(1.0, sf.value())) / denom;
}

double sqi(SpreadingFactor sf, std::size_t n) { return alpha(sf) * static_cast<double>(n); }

void validate(const DrccThresholds& t) {
  if (!(t.mts > 0.0 && t.mts < t.pri && t.pri < 1.0)) {
    throw ConfigError("thresholds must satisfy 0 < mts < pri < 1");
  }
  if (t.window == 0) throw ConfigError("estimation window must be >= 1");
}

// ---------------------------------------------------------------------------
// ServerState

ServerState::ServerState(int num_channels, std::size_t total_nodes, DrccThresholds thresholds)
    : num_channels_(num_channels), total_nodes_(total_nodes), thresholds_(thresholds) {
  if (num_channels_ <= 0) throw ConfigError("at least one channel is required");
  validate(thresholds_);
  ch_ctrl_.assign(static_cast<std::size_t>(SpreadingFactor::kCount * num_channels_), 0);
}

int ServerState::ch_ctrl(SpreadingFactor sf, int channel) const {
  if (channel < 0 || channel >= num_channels_) throw std::out_of_range("channel out of range");
  return ch_ctrl_[sf.index() * static_cast<std::size_t>(num_channels_) +
                  static_cast<std::size_t>(channel)];
}

std::span<const int> ServerState::ch_ctrl_row(SpreadingFactor sf) const {
  return std::span<const int>(ch_ctrl_).subspan(sf.index() * static_cast<std::size_t>(num_channels_),
                                                static_cast<std::size_t>(num_channels_));
}

const ChannelAssignment& ServerState::assignment(NodeId node) const {
  auto it = assignment_.find(node);
  if (it == assignment_.end()) throw std::out_of_range("unknown node " + std::to_string(node));
  return it->second;
}

void ServerState::assign(NodeId node, ChannelAssignment where) {
  if (where.channel < 0 || where.channel >= num_channels_) {
    throw std::out_of_range("channel out of range");
  }
  remove(node);
  assignment_.emplace(node, where);
  ++sf_group_[where.sf.index()];
  ++ch_ctrl_[where.sf.index() * static_cast<std::size_t>(num_channels_) +
             static_cast<std::size_t>(where.channel)];
}

std::optional<ChannelAssignment> ServerState::remove(NodeId node) {
  auto it = assignment_.find(node);
  if (it == assignment_.end()) return std::nullopt;
  const ChannelAssignment old = it->second;
  assignment_.erase(it);
  --sf_group_[old.sf.index()];
  --ch_ctrl_[old.sf.index() * static_cast<std::size_t>(num_channels_) +
             static_cast<std::size_t>(old.channel)];
  return old;
}

void ServerState::clear_assignments() {
  assignment_.clear();
  sf_group_.fill(0);
  std::fill(ch_ctrl_.begin(), ch_ctrl_.end(), 0);
}

EstimationWindow& ServerState::window(NodeId node) {
  auto it = windows_.find(node);
  if (it == windows_.end()) it = windows_.emplace(node, EstimationWindow(thresholds_.window)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// DRCC

std::optional<SpreadingFactor> drcc_data_rate_step(const ServerState& state, NodeId node,
                                                   double der, double latest_rssi_dbm,
                                                   Bandwidth bw) {
  const SpreadingFactor sf = state.assignment(node).sf;
  const auto& t = state.thresholds();
  const std::size_t n = state.total_nodes();

  if (der < t.mts && sf.value() < SpreadingFactor::kMax) {
    const SpreadingFactor slower{sf.value() + 1};
    if (state.sf_group(slower) < sqi(slower, n)) return slower;
  }
  if (der > t.pri && sf.value() > SpreadingFactor::kMin) {
    const SpreadingFactor faster{sf.value() - 1};
    if (state.sf_group(faster) < sqi(faster, n) && latest_rssi_dbm > sensitivity(faster, bw)) {
      return faster;
    }
  }
  return std::nullopt;
}

void initialize_channels(ServerState& state,
                         std::span<const std::pair<NodeId, SpreadingFactor>> nodes) {
  const int channels = state.num_channels();
  if (channels <= 0) throw ConfigError("at least one channel is required");
  state.clear_assignments();

  std::array<std::vector<NodeId>, SpreadingFactor::kCount> groups;
  for (const auto& [node, sf] : nodes) groups[sf.index()].push_back(node);

  for (SpreadingFactor sf : all_spreading_factors()) {
    const auto& group = groups[sf.index()];
    if (group.empty()) continue;
    // Contiguous blocks in channel order; the first (size mod C) blocks take
    // one extra node so per-channel counts differ by at most one.
    const std::size_t c = static_cast<std::size_t>(channels);
    const std::size_t base = group.size() / c;
    const std::size_t extra = group.size() % c;
    std::size_t i = 0;
    for (std::size_t ch = 0; ch < c && i < group.size(); ++ch) {
      const std::size_t take = base + (ch < extra ? 1 : 0);
      for (std::size_t k = 0; k < take; ++k, ++i) {
        state.assign(group[i], {sf, static_cast<int>(ch)});
      }
    }
  }
}

int rebalance_on_change(ServerState& state, NodeId node, std::optional<SpreadingFactor> sf_before,
                        SpreadingFactor sf_after) {
  if (sf_before) {
    if (state.assignment(node).sf != *sf_before) {
      throw std::invalid_argument("sf_before does not match the recorded assignment");
    }
  }
  state.remove(node);
  const auto row = state.ch_ctrl_row(sf_after);
  const int channel = static_cast<int>(std::min_element(row.begin(), row.end()) - row.begin());
  state.assign(node, {sf_after, channel});
  return channel;
}

// ---------------------------------------------------------------------------
// Basic ADR

std::optional<SpreadingFactor> basic_adr_step(std::span<const UplinkRecord> history,
                                              const RadioParams& current,
                                              const AdrParams& params) {
  if (params.history == 0 || history.size() < params.history) return std::nullopt;
  const auto recent = history.last(params.history);
  double max_snr = recent.front().snr_db;
  for (const auto& r : recent) max_snr = std::max(max_snr, r.snr_db);

  const double margin =
      max_snr - params.required_snr_db[current.sf.index()] - params.device_margin_db;
  const int steps = static_cast<int>(std::floor(margin / params.step_db));
  if (steps <= 0) return std::nullopt;
  const int down = std::min(steps, current.sf.value() - SpreadingFactor::kMin);
  if (down == 0) return std::nullopt;
  return SpreadingFactor{current.sf.value() - down};
}

// ---------------------------------------------------------------------------
// Fair allocation

std::vector<SpreadingFactor> fair_sf_allocation(std::span<const NodeLink> nodes, Bandwidth bw) {
  const std::size_t n = nodes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (nodes[a].rssi_dbm != nodes[b].rssi_dbm) return nodes[a].rssi_dbm > nodes[b].rssi_dbm;
    return nodes[a].node_id < nodes[b].node_id;
  });

  // Whole quotas n*num/498 first, then leftover nodes by largest fractional
  // part (lower SF on ties).
  std::array<std::size_t, SpreadingFactor::kCount> quota{};
  std::array<std::size_t, SpreadingFactor::kCount> frac{};
  std::size_t assigned = 0;
  for (SpreadingFactor sf : all_spreading_factors()) {
    const std::size_t scaled = n * static_cast<std::size_t>(alpha_numerator(sf));
    quota[sf.index()] = scaled / kAlphaDenominator;
    frac[sf.index()] = scaled % kAlphaDenominator;
    assigned += quota[sf.index()];
  }
  std::array<std::size_t, SpreadingFactor::kCount> by_frac{0, 1, 2, 3, 4, 5};
  std::stable_sort(by_frac.begin(), by_frac.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++quota[by_frac[k]];

  std::vector<SpreadingFactor> out(n, SpreadingFactor{SpreadingFactor::kMax});
  std::size_t rank = 0;
  for (SpreadingFactor sf : all_spreading_factors()) {
    for (std::size_t k = 0; k < quota[sf.index()]; ++k, ++rank) out[order[rank]] = sf;
  }

  for (std::size_t i = 0; i < n; ++i) {
    int s = out[i].value();
    while (s < SpreadingFactor::kMax && nodes[i].rssi_dbm < sensitivity(SpreadingFactor{s}, bw)) ++s;
    out[i] = SpreadingFactor{s};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schemes

namespace {

int random_channel(const SchemeOptions& options, NodeId node) {
  Rng rng(options.seed, stream_key(StreamTag::kChannel, node));
  return static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(options.num_channels)));
}

LinkAdrReq make_request(SpreadingFactor sf, Bandwidth bw, std::uint16_t mask) {
  LinkAdrReq req;
  req.data_rate = static_cast<std::uint8_t>(radio_to_dr(sf, bw).value);
  req.tx_power = kTxPowerIndex14Dbm;
  req.ch_mask = mask;
  req.ch_mask_cntl = 0;
  req.nb_trans = 1;
  return req;
}

std::uint16_t all_channels_mask(int num_channels) {
  return static_cast<std::uint16_t>(num_channels >= 16 ? 0xFFFF : (1u << num_channels) - 1u);
}

}  // namespace

StaticScheme::StaticScheme(SpreadingFactor sf, SchemeOptions options)
    : sf_(sf), options_(options), name_("static-sf" + std::to_string(sf.value())) {}

void StaticScheme::setup(std::span<NodeSetup> nodes) {
  for (auto& node : nodes) {
    node.radio.sf = sf_;
    node.radio.channel_index = random_channel(options_, node.node_id);
  }
}

AdrScheme::AdrScheme(SchemeOptions options) : options_(options) {}

void AdrScheme::setup(std::span<NodeSetup> nodes) {
  radios_.clear();
  history_.clear();
  for (auto& node : nodes) {
    node.radio.channel_index = random_channel(options_, node.node_id);
    radios_[node.node_id] = node.radio;
  }
}

std::optional<LinkAdrReq> AdrScheme::on_uplink(const UplinkRecord& uplink) {
  auto& radio = radios_[uplink.node_id];
  radio.sf = uplink.sf;
  auto& history = history_[uplink.node_id];
  if (!history.empty() && uplink.fcnt <= history.back().fcnt) return std::nullopt;
  history.push_back(uplink);
  while (history.size() > options_.adr.history) history.pop_front();

  const std::vector<UplinkRecord> recent(history.begin(), history.end());
  const auto next = basic_adr_step(recent, radio, options_.adr);
  if (!next) return std::nullopt;
  radio.sf = *next;
  history.clear();
  return make_request(*next, options_.bandwidth, all_channels_mask(options_.num_channels));
}

FairScheme::FairScheme(SchemeOptions options) : options_(options) {}

void FairScheme::setup(std::span<NodeSetup> nodes) {
  std::vector<NodeLink> links;
  links.reserve(nodes.size());
  for (const auto& node : nodes) links.push_back({node.node_id, node.rssi_dbm});
  const auto sfs = fair_sf_allocation(links, options_.bandwidth);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].radio.sf = sfs[i];
    nodes[i].radio.channel_index = random_channel(options_, nodes[i].node_id);
  }
}

DrccScheme::DrccScheme(SchemeOptions options)
    : options_(options), state_(options.num_channels, options.total_nodes, options.drcc) {}

void DrccScheme::setup(std::span<NodeSetup> nodes) {
  std::vector<std::pair<NodeId, SpreadingFactor>> by_id;
  by_id.reserve(nodes.size());
  for (const auto& node : nodes) by_id.emplace_back(node.node_id, node.radio.sf);
  std::sort(by_id.begin(), by_id.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  initialize_channels(state_, by_id);
  for (auto& node : nodes) node.radio.channel_index = state_.assignment(node.node_id).channel;
}

int DrccScheme::join(NodeId node, SpreadingFactor sf) {
  return rebalance_on_change(state_, node, std::nullopt, sf);
}

std::optional<LinkAdrReq> DrccScheme::on_uplink(const UplinkRecord& uplink) {
  if (!state_.has_node(uplink.node_id)) {
    const int channel = join(uplink.node_id, uplink.sf);
    state_.window(uplink.node_id).push(uplink);
    return make_request(uplink.sf, options_.bandwidth, static_cast<std::uint16_t>(1u << channel));
  }

  EstimationWindow& window = state_.window(uplink.node_id);
  if (!window.push(uplink)) return std::nullopt;
  const auto der = short_term_der(window);
  if (!der) return std::nullopt;

  const SpreadingFactor before = state_.assignment(uplink.node_id).sf;
  const auto after =
      drcc_data_rate_step(state_, uplink.node_id, *der, uplink.rssi_dbm, options_.bandwidth);
  if (!after) return std::nullopt;

  const int channel = rebalance_on_change(state_, uplink.node_id, before, *after);
  window.clear();
  return make_request(*after, options_.bandwidth, static_cast<std::uint16_t>(1u << channel));
}

bool is_known_scheme(std::string_view name) {
  const auto names = known_schemes();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<std::string> known_schemes() {
  std::vector<std::string> names;
  for (SpreadingFactor sf : all_spreading_factors()) {
    names.push_back("static-sf" + std::to_string(sf.value()));
  }
  names.insert(names.end(), {"adr", "fadr", "drcc"});
  return names;
}

std::unique_ptr<Scheme> make_scheme(std::string_view name, const SchemeOptions& options) {
  if (name == "adr") return std::make_unique<AdrScheme>(options);
  if (name == "fadr") return std::make_unique<FairScheme>(options);
  if (name == "drcc") return std::make_unique<DrccScheme>(options);
  constexpr std::string_view kStatic = "static-sf";
  if (name.starts_with(kStatic)) {
    const std::string digits(name.substr(kStatic.size()));
    if (digits == "7" || digits == "8" || digits == "9" || digits == "10" || digits == "11" ||
        digits == "12") {
      return std::make_unique<StaticScheme>(SpreadingFactor{std::stoi(digits)}, options);
    }
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

}  // namespace loracell
