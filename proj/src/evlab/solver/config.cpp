// Copyright 2026 The evlab Authors
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

#include "evlab/solver/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "evlab/common/error.hpp"
#include "evlab/spectral/evf1.hpp"

namespace evlab {

void SolverConfig::validate() const {
  grid.validate();
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("nu must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be > 0");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be > 0");
  if (cutoff < 1) throw ConfigError("galerkin_cutoff must be >= 1");
  if (cutoff > grid.dealias_cutoff()) {
    throw ConfigError("galerkin_cutoff " + std::to_string(cutoff) +
                      " exceeds the dealiasing bound n/3 = " +
                      std::to_string(grid.dealias_cutoff()));
  }
  if (integrator != "if-rk4") throw ConfigError("unsupported integrator '" + integrator + "'");
  if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
  const double ratio = t_final / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-8 * ratio) {
    throw ConfigError("t_final must be an integer multiple of dt");
  }
  if (steps() % snapshot_stride != 0) {
    throw ConfigError("step count must be a multiple of snapshot_stride");
  }
}

int SolverConfig::steps() const { return static_cast<int>(std::llround(t_final / dt)); }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SolverConfig parse_solver_config(const std::string& text) {
  SolverConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "nu") cfg.nu = to_double(key, val);
    else if (key == "dt") cfg.dt = to_double(key, val);
    else if (key == "t_final") cfg.t_final = to_double(key, val);
    else if (key == "grid_n") cfg.grid.n = static_cast<int>(to_int(key, val));
    else if (key == "dim") cfg.grid.dim = static_cast<int>(to_int(key, val));
    else if (key == "galerkin_cutoff") cfg.cutoff = static_cast<int>(to_int(key, val));
    else if (key == "integrator") cfg.integrator = val;
    else if (key == "snapshot_stride") cfg.snapshot_stride = static_cast<int>(to_int(key, val));
    else if (key == "ic") cfg.ic = val;
    else if (key == "ic_amplitude") cfg.ic_amplitude = to_double(key, val);
    else if (key == "ic_cutoff") cfg.ic_cutoff = static_cast<int>(to_int(key, val));
    else if (key == "forcing") cfg.forcing = val;
    else if (key == "forcing_amplitude") cfg.forcing_amplitude = to_double(key, val);
    else if (key == "seed") cfg.seed = static_cast<unsigned long long>(to_int(key, val));
    else if (key == "stability_override") cfg.stability_override = (val == "1" || val == "true");
    else throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

SolverConfig load_solver_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_solver_config(ss.str());
}

std::map<std::string, std::string> to_config_map(const SolverConfig& cfg) {
  return {
      {"dim", std::to_string(cfg.grid.dim)},
      {"grid_n", std::to_string(cfg.grid.n)},
      {"nu", fmt(cfg.nu)},
      {"dt", fmt(cfg.dt)},
      {"t_final", fmt(cfg.t_final)},
      {"galerkin_cutoff", std::to_string(cfg.cutoff)},
      {"integrator", cfg.integrator},
      {"snapshot_stride", std::to_string(cfg.snapshot_stride)},
      {"ic", cfg.ic},
      {"ic_amplitude", fmt(cfg.ic_amplitude)},
      {"ic_cutoff", std::to_string(cfg.ic_cutoff)},
      {"forcing", cfg.forcing},
      {"forcing_amplitude", fmt(cfg.forcing_amplitude)},
      {"seed", std::to_string(cfg.seed)},
      {"stability_override", cfg.stability_override ? "1" : "0"},
  };
}

std::string to_config_text(const SolverConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : to_config_map(cfg)) out += k + "=" + v + "\n";
  return out;
}

SpectralField make_initial_condition(const SolverConfig& cfg) {
  const GridSpec& g = cfg.grid;
  const std::string& ic = cfg.ic;
  if (ic == "zero") return SpectralField(g, g.dim);
  if (ic == "taylor-green") {
    if (g.dim != 2) throw ConfigError("taylor-green initial condition is two-dimensional");
    return make_taylor_green(0.0, cfg.ic_amplitude)->sample(g, 0.0);
  }
  if (ic == "single-mode") {
    return make_single_mode(g.dim, {1, 2, 1}, {cfg.ic_amplitude, 0.0, 0.0})->sample(g, 0.0);
  }
  if (ic == "random") {
    std::mt19937_64 rng(cfg.seed);
    return random_solenoidal(g, std::min(cfg.ic_cutoff, cfg.cutoff), cfg.ic_amplitude, rng);
  }
  if (ic.rfind("file:", 0) == 0) {
    Snapshot snap = read_evf1(ic.substr(5));
    if (!(snap.field.grid() == g)) throw ConfigError("initial condition file grid mismatch");
    return snap.field;
  }
  throw ConfigError("unknown initial condition '" + ic + "'");
}

TestFieldPtr make_forcing(const SolverConfig& cfg) {
  const std::string& f = cfg.forcing;
  const int d = cfg.grid.dim;
  if (f == "zero") return nullptr;
  if (f == "taylor-green-steady") {
    if (d != 2) throw ConfigError("taylor-green-steady forcing is two-dimensional");
    return make_taylor_green(0.0, 2.0 * cfg.nu * cfg.forcing_amplitude);
  }
  if (f == "single-mode") {
    return make_single_mode(d, {0, 1, 0}, {cfg.forcing_amplitude, 0.0, 0.0});
  }
  if (f == "decaying-mode") {
    return make_single_mode(d, {0, 1, 0}, {cfg.forcing_amplitude, 0.0, 0.0}, 1.0);
  }
  throw ConfigError("unknown forcing '" + f + "'");
}

}  // namespace evlab
