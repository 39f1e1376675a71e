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

#pragma once

#include <map>
#include <string>

#include "evlab/spectral/field.hpp"
#include "evlab/spectral/test_field.hpp"

namespace evlab {

// Flat key=value settings. Recognized keys: nu, dt, t_final, grid_n,
// galerkin_cutoff, ic, forcing, integrator, snapshot_stride, plus dim, seed,
// ic_amplitude, ic_cutoff, forcing_amplitude, stability_override.
struct SolverConfig {
  GridSpec grid{2, 64};
  double nu = 0.0;
  double dt = 1e-3;
  double t_final = 1.0;
  int cutoff = 21;
  std::string integrator = "if-rk4";
  int snapshot_stride = 1;

  std::string ic = "taylor-green";
  double ic_amplitude = 1.0;
  int ic_cutoff = 4;
  std::string forcing = "zero";
  double forcing_amplitude = 1.0;
  unsigned long long seed = 0;
  bool stability_override = false;

  // Checks value ranges; throws ConfigError.
  void validate() const;
  int steps() const;
  double snapshot_spacing() const { return dt * snapshot_stride; }
};

SolverConfig parse_solver_config(const std::string& text);
SolverConfig load_solver_config(const std::string& path);
// Canonical key=value text (sorted keys, %.17g numbers).
std::string to_config_text(const SolverConfig& cfg);
std::map<std::string, std::string> to_config_map(const SolverConfig& cfg);

// Initial condition named by cfg.ic, before Galerkin projection.
// Presets: zero, taylor-green, single-mode, random, file:<path.evf>.
SpectralField make_initial_condition(const SolverConfig& cfg);
// Forcing named by cfg.forcing; nullptr for "zero".
// Presets: zero, taylor-green-steady (2 nu TG, keeps TG stationary),
// single-mode, decaying-mode.
TestFieldPtr make_forcing(const SolverConfig& cfg);

}  // namespace evlab
