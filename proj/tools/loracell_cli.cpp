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

// Command-line front end. Talks to the simulator only through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "loracell/loracell.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int exit_code(lc_status status) {
  switch (status) {
    case LC_OK:
      return kExitOk;
    case LC_ERR_CONFIG:
    case LC_ERR_ARGUMENT:
    case LC_ERR_CODEC:
      return kExitConfig;
    case LC_ERR_RUNTIME:
      return kExitRuntime;
  }
  return kExitRuntime;
}

// Help text of the active subcommand, shown again on configuration errors.
std::string g_usage;

int report(lc_status status) {
  if (status == LC_OK) return kExitOk;
  std::cerr << "error: " << lc_last_error() << "\n";
  if (exit_code(status) == kExitConfig && !g_usage.empty()) std::cerr << "\n" << g_usage;
  return exit_code(status);
}

struct ScenarioHandle {
  lc_scenario* ptr = nullptr;
  ~ScenarioHandle() { lc_scenario_destroy(ptr); }
};

struct TextHandle {
  lc_text* ptr = nullptr;
  ~TextHandle() { lc_text_destroy(ptr); }
};

struct ResultHandle {
  lc_result* ptr = nullptr;
  ~ResultHandle() { lc_result_destroy(ptr); }
};

// Flag values given on the command line, keyed by config-file key.
struct Overrides {
  std::string config;
  std::map<std::string, std::string> values;
  std::vector<std::string> extra;  // raw key=value pairs from --set
};

// Returns an exit code; errors are already reported.
int build_scenario(const Overrides& o, ScenarioHandle& scenario) {
  if (lc_status s = lc_scenario_create(&scenario.ptr); s != LC_OK) return report(s);
  if (!o.config.empty()) {
    if (lc_status s = lc_scenario_load_file(scenario.ptr, o.config.c_str()); s != LC_OK) {
      return report(s);
    }
  }
  for (const auto& kv : o.extra) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n\n" << g_usage;
      return kExitConfig;
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (lc_status s = lc_scenario_set(scenario.ptr, key.c_str(), value.c_str()); s != LC_OK) {
      return report(s);
    }
  }
  for (const auto& [key, value] : o.values) {
    if (lc_status s = lc_scenario_set(scenario.ptr, key.c_str(), value.c_str()); s != LC_OK) {
      return report(s);
    }
  }
  return kExitOk;
}

bool write_text(const std::string& path, const char* data, std::size_t size) {
  if (path.empty() || path == "-") {
    std::fwrite(data, 1, size, stdout);
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out.write(data, static_cast<std::streamsize>(size));
  return static_cast<bool>(out);
}

int cmd_run(const Overrides& o, const std::string& out_path) {
  ScenarioHandle scenario;
  if (int rc = build_scenario(o, scenario); rc != kExitOk) return rc;
  ResultHandle result;
  if (lc_status s = lc_run(scenario.ptr, &result.ptr); s != LC_OK) return report(s);

  lc_metrics m{};
  lc_result_metrics(result.ptr, &m);
  std::printf("der %.6f\ntransmitted %zu\nreceived %zu\ncollisions %zu\n"
              "under_sensitivity %zu\ncapacity %zu\n",
              m.global_der, m.transmitted, m.received, m.collisions, m.under_sensitivity_losses,
              m.capacity_losses);
  for (int sf = 7; sf <= 12; ++sf) {
    std::size_t count = 0;
    lc_result_sf_count(result.ptr, sf, &count);
    std::printf("nodes_sf%d %zu\n", sf, count);
  }
  if (!out_path.empty()) {
    if (lc_status s = lc_result_write_event_log(result.ptr, out_path.c_str()); s != LC_OK) {
      return report(s);
    }
  }
  return kExitOk;
}

int cmd_sweep(const std::string& experiment, const std::string& schemes, const std::string& nodes,
              const std::string& radii, std::uint64_t seed, const Overrides& o,
              const std::string& out_path) {
  ScenarioHandle base;
  if (int rc = build_scenario(o, base); rc != kExitOk) return rc;
  const std::string& axis = experiment == "fig5" ? radii : nodes;
  TextHandle csv;
  if (lc_status s = lc_sweep(experiment.c_str(), schemes.c_str(), axis.c_str(), seed, base.ptr,
                             &csv.ptr);
      s != LC_OK) {
    return report(s);
  }
  if (!write_text(out_path, lc_text_data(csv.ptr), lc_text_size(csv.ptr))) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_airtime(int payload, int preamble) {
  std::printf("sf,bandwidth_khz,payload_bytes,airtime_ms\n");
  for (int sf = 7; sf <= 12; ++sf) {
    double seconds = 0.0;
    const int low_dr = sf >= 11 ? 1 : 0;
    if (lc_status s = lc_airtime(sf, 125, 5, payload, preamble, 1, low_dr, &seconds); s != LC_OK) {
      return report(s);
    }
    std::printf("%d,125,%d,%.3f\n", sf, payload, seconds * 1000.0);
  }
  return kExitOk;
}

int cmd_range(double tx_power, double d0, double lpl0, double gamma) {
  std::printf("sf,bandwidth_khz,sensitivity_dbm,max_range_m\n");
  for (int sf = 7; sf <= 12; ++sf) {
    double sens = 0.0;
    double range = 0.0;
    if (lc_status s = lc_sensitivity(sf, 125, &sens); s != LC_OK) return report(s);
    if (lc_status s = lc_max_range(sf, 125, tx_power, d0, lpl0, gamma, &range, nullptr);
        s != LC_OK) {
      return report(s);
    }
    std::printf("%d,125,%.0f,%.3f\n", sf, sens, range);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-gateway LoRa cell simulator"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string run_out;
  std::string scheme;
  std::string nodes_str;
  double radius = 0;
  double period = 0;
  double duration = 0;
  std::uint64_t seed = 1;

  auto* run = app.add_subcommand("run", "Simulate one scenario and print its metrics");
  run->add_option("--config", run_o.config, "key = value scenario file")->check(CLI::ExistingFile);
  run->add_option("--scheme", scheme, "static-sf7..static-sf12, adr, fadr, drcc");
  run->add_option("--nodes", nodes_str, "Number of nodes");
  run->add_option("--radius", radius, "Deployment radius in metres");
  run->add_option("--period", period, "Mean seconds between uplinks");
  run->add_option("--duration", duration, "Simulated seconds");
  run->add_option("--seed", seed, "Random seed");
  run->add_option("--set", run_o.extra, "Extra key=value setting (repeatable)");
  run->add_option("--out", run_out, "Write the event log CSV here");

  Overrides sweep_o;
  std::string experiment;
  std::string schemes = "static-sf7,static-sf8,static-sf9,static-sf10,static-sf11,static-sf12,adr,fadr,drcc";
  std::string sweep_nodes = "100,200,400,600,800,1000";
  std::string radii = "50,100,150,200,250,300,350";
  std::string sweep_out;
  double sweep_duration = 0;
  std::uint64_t sweep_seed = 1;

  auto* sweep = app.add_subcommand("sweep", "Run one of the fig4/fig5/fig6 parameter sweeps");
  sweep->add_option("experiment", experiment, "fig4, fig5 or fig6")->required();
  sweep->add_option("--schemes", schemes, "Comma-separated scheme names");
  sweep->add_option("--nodes", sweep_nodes, "Comma-separated node counts (fig4, fig6)");
  sweep->add_option("--radii", radii, "Comma-separated radii in metres (fig5)");
  sweep->add_option("--seed", sweep_seed, "Base seed; point i uses seed + i");
  sweep->add_option("--duration", sweep_duration, "Simulated seconds per point");
  sweep->add_option("--config", sweep_o.config, "Base scenario file")->check(CLI::ExistingFile);
  sweep->add_option("--set", sweep_o.extra, "Extra key=value setting (repeatable)");
  sweep->add_option("--out", sweep_out, "CSV output path (default stdout)");

  int payload = 20;
  int preamble = 8;
  auto* air = app.add_subcommand("airtime", "Print the time-on-air table");
  air->add_option("--payload", payload, "Payload bytes");
  air->add_option("--preamble", preamble, "Preamble symbols");

  double tx_power = 14.0;
  double d0 = 40.0;
  double lpl0 = 127.41;
  double gamma = 2.08;
  auto* range = app.add_subcommand("range", "Print the maximum range per spreading factor");
  range->add_option("--tx-power", tx_power, "Transmit power in dBm");
  range->add_option("--d0", d0, "Reference distance in metres");
  range->add_option("--lpl0", lpl0, "Path loss at d0 in dB");
  range->add_option("--gamma", gamma, "Path loss exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  auto to_text = [](double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };

  if (*run) {
    g_usage = run->help();
    if (run->count("--scheme")) run_o.values["scheme"] = scheme;
    if (run->count("--nodes")) run_o.values["nodes"] = nodes_str;
    if (run->count("--radius")) run_o.values["radius"] = to_text(radius);
    if (run->count("--period")) run_o.values["period"] = to_text(period);
    if (run->count("--duration")) run_o.values["duration"] = to_text(duration);
    if (run->count("--seed")) run_o.values["seed"] = std::to_string(seed);
    return cmd_run(run_o, run_out);
  }
  if (*sweep) {
    g_usage = sweep->help();
    if (sweep->count("--duration")) sweep_o.values["duration"] = to_text(sweep_duration);
    return cmd_sweep(experiment, schemes, sweep_nodes, radii, sweep_seed, sweep_o, sweep_out);
  }
  if (*air) return cmd_airtime(payload, preamble);
  if (*range) return cmd_range(tx_power, d0, lpl0, gamma);
  return kExitConfig;
}
