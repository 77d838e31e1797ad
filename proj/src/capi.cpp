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

#include "loracell/loracell.h"

#include <charconv>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "loracell/channel.hpp"
#include "loracell/errors.hpp"
#include "loracell/experiments.hpp"
#include "loracell/mac.hpp"
#include "loracell/radio.hpp"
#include "loracell/scenario.hpp"
#include "loracell/sim.hpp"

struct lc_scenario {
  loracell::ScenarioConfig config;
};

struct lc_result {
  loracell::SimulationResult result;
  loracell::MetricsReport metrics;
};

struct lc_text {
  std::string data;
};

namespace {

thread_local std::string g_last_error;

lc_status fail(lc_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps exceptions escaping the core onto status codes.
template <typename F>
lc_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const loracell::ConfigError& e) {
    return fail(LC_ERR_CONFIG, e.what());
  } catch (const loracell::CodecError& e) {
    return fail(LC_ERR_CODEC, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LC_ERR_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(LC_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LC_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(LC_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(LC_ERR_RUNTIME, "unknown error");
  }
}

lc_status null_argument(const char* what) {
  return fail(LC_ERR_ARGUMENT, std::string(what) + " must not be NULL");
}

std::vector<std::string> split_list(const char* text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw loracell::ConfigError("empty entry in list");
    out.push_back(item.substr(first, last - first + 1));
  }
  if (out.empty()) throw loracell::ConfigError("empty list");
  return out;
}

double parse_number(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw loracell::ConfigError("'" + text + "' is not a number");
  }
  return value;
}

lc_text* make_text(std::string data) { return new lc_text{std::move(data)}; }

}  // namespace

extern "C" {

const char* lc_version(void) { return "0.1.0"; }

const char* lc_last_error(void) { return g_last_error.c_str(); }

lc_status lc_scenario_create(lc_scenario** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new lc_scenario{};
    return LC_OK;
  });
}

void lc_scenario_destroy(lc_scenario* scenario) { delete scenario; }

lc_status lc_scenario_set(lc_scenario* scenario, const char* key, const char* value) {
  if (!scenario) return null_argument("scenario");
  if (!key || !value) return null_argument("key/value");
  return guarded([&] {
    loracell::apply_setting(scenario->config, key, value);
    return LC_OK;
  });
}

lc_status lc_scenario_load_file(lc_scenario* scenario, const char* path) {
  if (!scenario) return null_argument("scenario");
  if (!path) return null_argument("path");
  return guarded([&] {
    loracell::apply_config_file(scenario->config, path);
    return LC_OK;
  });
}

lc_status lc_scenario_validate(const lc_scenario* scenario) {
  if (!scenario) return null_argument("scenario");
  return guarded([&] {
    loracell::validate(scenario->config);
    return LC_OK;
  });
}

lc_status lc_run(const lc_scenario* scenario, lc_result** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto result = std::make_unique<lc_result>();
    result->result = loracell::run(scenario->config);
    result->metrics = loracell::compute_metrics(result->result);
    *out = result.release();
    return LC_OK;
  });
}

void lc_result_destroy(lc_result* result) { delete result; }

lc_status lc_result_metrics(const lc_result* result, lc_metrics* out) {
  if (!result) return null_argument("result");
  if (!out) return null_argument("out");
  const auto& m = result->metrics;
  *out = lc_metrics{m.global_der,  m.transmitted, m.received, m.collisions,
                    m.under_sensitivity_losses, m.capacity_losses};
  return LC_OK;
}

lc_status lc_result_sf_count(const lc_result* result, int sf, size_t* out) {
  if (!result) return null_argument("result");
  if (!out) return null_argument("out");
  if (!loracell::SpreadingFactor::valid(sf)) return fail(LC_ERR_ARGUMENT, "sf must be 7..12");
  const auto& hist = result->metrics.sf_histogram;
  const auto it = hist.find(sf);
  *out = it == hist.end() ? 0 : it->second;
  return LC_OK;
}

lc_status lc_result_event_log_csv(const lc_result* result, lc_text** out) {
  if (!result) return null_argument("result");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = make_text(result->result.log.to_csv());
    return LC_OK;
  });
}

lc_status lc_result_write_event_log(const lc_result* result, const char* path) {
  if (!result) return null_argument("result");
  if (!path) return null_argument("path");
  return guarded([&] {
    std::ofstream file(path, std::ios::binary);
    if (!file) return fail(LC_ERR_RUNTIME, std::string("cannot open '") + path + "' for writing");
    result->result.log.write_csv(file);
    file.flush();
    if (!file) return fail(LC_ERR_RUNTIME, std::string("failed writing '") + path + "'");
    return LC_OK;
  });
}

lc_status lc_sweep(const char* experiment, const char* schemes, const char* axis, uint64_t seed,
                   const lc_scenario* base, lc_text** out_csv) {
  if (!experiment || !schemes || !axis) return null_argument("experiment/schemes/axis");
  if (!out_csv) return null_argument("out_csv");
  return guarded([&] {
    loracell::SweepRequest request;
    request.experiment = loracell::parse_experiment(experiment);
    request.schemes = split_list(schemes);
    for (const auto& s : request.schemes) {
      if (!loracell::is_known_scheme(s)) throw loracell::ConfigError("unknown scheme '" + s + "'");
    }
    for (const auto& v : split_list(axis)) request.axis.push_back(parse_number(v));
    request.base_seed = seed;
    if (base) request.base = base->config;
    const auto points = loracell::run_sweep(request);
    *out_csv = make_text(loracell::sweep_csv(points));
    return LC_OK;
  });
}

const char* lc_text_data(const lc_text* text) { return text ? text->data.c_str() : ""; }

size_t lc_text_size(const lc_text* text) { return text ? text->data.size() : 0; }

void lc_text_destroy(lc_text* text) { delete text; }

lc_status lc_airtime(int sf, int bandwidth_khz, int cr_denominator, int payload_len,
                     int preamble_symbols, int explicit_header, int low_dr_optimize,
                     double* out_seconds) {
  if (!out_seconds) return null_argument("out_seconds");
  return guarded([&] {
    loracell::RadioParams params;
    params.sf = loracell::SpreadingFactor{sf};
    params.bandwidth = loracell::bandwidth_from_khz(bandwidth_khz);
    params.coding_rate = loracell::coding_rate_from_denominator(cr_denominator);
    loracell::AirtimeOptions options;
    options.preamble_symbols = preamble_symbols;
    options.explicit_header = explicit_header != 0;
    options.low_dr_optimize = low_dr_optimize != 0;
    *out_seconds = loracell::airtime(params, payload_len, options);
    return LC_OK;
  });
}

lc_status lc_sensitivity(int sf, int bandwidth_khz, double* out_dbm) {
  if (!out_dbm) return null_argument("out_dbm");
  return guarded([&] {
    *out_dbm = loracell::sensitivity(loracell::SpreadingFactor{sf},
                                     loracell::bandwidth_from_khz(bandwidth_khz));
    return LC_OK;
  });
}

lc_status lc_max_range(int sf, int bandwidth_khz, double tx_power_dbm, double d0_m, double lpl0_db,
                       double gamma, double* out_m, int* below_reference) {
  if (!out_m) return null_argument("out_m");
  return guarded([&] {
    const auto range = loracell::max_range(loracell::SpreadingFactor{sf},
                                           loracell::bandwidth_from_khz(bandwidth_khz),
                                           tx_power_dbm, {d0_m, lpl0_db, gamma, 0.0});
    *out_m = range.distance_m;
    if (below_reference) *below_reference = range.below_reference ? 1 : 0;
    return LC_OK;
  });
}

lc_status lc_path_loss(double d0_m, double lpl0_db, double gamma, double distance_m,
                       double* out_db) {
  if (!out_db) return null_argument("out_db");
  return guarded([&] {
    const loracell::PathLossParams params{d0_m, lpl0_db, gamma, 0.0};
    loracell::validate(params);
    *out_db = loracell::path_loss(params, distance_m);
    return LC_OK;
  });
}

lc_status lc_link_adr_req_encode(const lc_link_adr_req* req, uint8_t out[LC_LINK_ADR_REQ_SIZE]) {
  if (!req || !out) return null_argument("req/out");
  return guarded([&] {
    const loracell::LinkAdrReq r{req->data_rate, req->tx_power,  req->ch_mask,
                                 req->ch_mask_cntl, req->nb_trans, req->rfu};
    const auto bytes = loracell::encode_link_adr_req(r);
    std::copy(bytes.begin(), bytes.end(), out);
    return LC_OK;
  });
}

lc_status lc_link_adr_req_decode(const uint8_t* bytes, size_t len, lc_link_adr_req* out) {
  if (!bytes || !out) return null_argument("bytes/out");
  return guarded([&] {
    const auto r = loracell::decode_link_adr_req({bytes, len});
    *out = lc_link_adr_req{r.data_rate, r.tx_power, r.ch_mask, r.ch_mask_cntl, r.nb_trans, r.rfu};
    return LC_OK;
  });
}

}  // extern "C"
