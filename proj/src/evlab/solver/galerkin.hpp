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

#include <optional>
#include <vector>

#include "evlab/solver/config.hpp"
#include "evlab/spectral/field.hpp"
#include "evlab/spectral/test_field.hpp"

namespace evlab {

// Galerkin truncation P_n: keep modes with |k|_inf <= n.
SpectralField galerkin_project(const SpectralField& f, int n);

// Ordered snapshots of one run. Times are strictly increasing.
struct Trajectory {
  SolverConfig config;
  std::vector<double> times;
  std::vector<SpectralField> snapshots;

  std::size_t size() const { return times.size(); }
  const GridSpec& grid() const { return snapshots.front().grid(); }
};

// Everything the right-hand side needs besides the state.
class GalerkinSystem {
 public:
  explicit GalerkinSystem(const SolverConfig& cfg);
  GalerkinSystem(const SolverConfig& cfg, TestFieldPtr forcing);

  const SolverConfig& config() const { return cfg_; }
  const TestFieldPtr& forcing() const { return forcing_; }

  // P_n P f(., t), zero when there is no forcing.
  SpectralField forcing_at(double t) const;
  // P_n[-convection(v) + P f(t)], the part integrated by RK4.
  SpectralField nonlinear(const SpectralField& v, double t) const;
  // Full semi-discrete right-hand side, including nu * Laplacian.
  SpectralField rhs(const SpectralField& v, double t) const;

  // One integrating-factor RK4 step of size h.
  SpectralField step(const SpectralField& v, double t, double h) const;

 private:
  SolverConfig cfg_;
  TestFieldPtr forcing_;
};

SpectralField semidiscrete_rhs(const SpectralField& v, double t, const SolverConfig& cfg);

// Stability indicators reported alongside a run.
struct StabilityReport {
  double viscous_number = 0.0;   // dt * nu * max |k|^2 over retained modes
  double advective_number = 0.0; // dt * cutoff * max|v0|
  bool ok = true;                // advective_number <= 1
};
StabilityReport stability_report(const SolverConfig& cfg, const SpectralField& v0);

// Integrates from P_n P ic over [0, t_final]. Throws BlowUpError on
// non-finite state and ConfigError on a violated stability bound unless
// stability_override is set.
Trajectory integrate(const SolverConfig& cfg);
Trajectory integrate(const SolverConfig& cfg, const SpectralField& v0);
// Same system started at time t0 from v0, ending at cfg.t_final, with the
// snapshot grid t0 + i * dt * stride.
Trajectory integrate_from(const SolverConfig& cfg, const SpectralField& v0, double t0);
// Explicit forcing in place of the configured one; nullptr means none.
Trajectory integrate_from(const SolverConfig& cfg, const SpectralField& v0, double t0,
                          const TestFieldPtr& forcing);

struct EnergyBalance {
  // r_i over [t_i, t_{i+1}]: 0.5|v|^2 jump plus trapezoid of nu|grad v|^2 - <f, v>.
  std::vector<double> residual;
  std::vector<double> kinetic;
  std::vector<double> dissipation_rate;  // nu |grad v|^2
  std::vector<double> work_rate;         // <f, v>
  double total = 0.0;
  double max_abs = 0.0;
};
EnergyBalance energy_balance_residual(const Trajectory& traj);
EnergyBalance energy_balance_residual(const Trajectory& traj, const TestFieldPtr& forcing);

// Linear Stokes problem d/dt w - nu Lap w = P_n P delta_f, w(0) = delta_v0,
// solved modewise with the exact heat factor and Simpson quadrature of the
// forcing over each step. Snapshot grid follows cfg.
Trajectory stokes_recovery(const TestFieldPtr& delta_f, const SpectralField& delta_v0,
                           const SolverConfig& cfg);

}  // namespace evlab
