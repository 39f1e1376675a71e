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

#include "evlab/solver/galerkin.hpp"

#include <cmath>
#include <utility>

#include "evlab/common/error.hpp"

namespace evlab {

SpectralField galerkin_project(const SpectralField& f, int n) {
  if (n < 1) throw UsageError("galerkin cutoff must be >= 1");
  return truncate(f, n);
}

GalerkinSystem::GalerkinSystem(const SolverConfig& cfg)
    : GalerkinSystem(cfg, make_forcing(cfg)) {}

GalerkinSystem::GalerkinSystem(const SolverConfig& cfg, TestFieldPtr forcing)
    : cfg_(cfg), forcing_(std::move(forcing)) {
  cfg_.grid.validate();
}

SpectralField GalerkinSystem::forcing_at(double t) const {
  if (!forcing_) return SpectralField(cfg_.grid, cfg_.grid.dim);
  return galerkin_project(projected_sample(*forcing_, cfg_.grid, t), cfg_.cutoff);
}

SpectralField GalerkinSystem::nonlinear(const SpectralField& v, double t) const {
  SpectralField out = convection(v);
  out *= -1.0;
  if (forcing_) out += forcing_at(t);
  return galerkin_project(out, cfg_.cutoff);
}

SpectralField GalerkinSystem::rhs(const SpectralField& v, double t) const {
  SpectralField out = nonlinear(v, t);
  if (cfg_.nu != 0.0) out.axpy(cfg_.nu, laplacian(v));
  return out;
}

namespace {

// exp(-nu |k|^2 h) applied modewise.
void apply_heat(SpectralField& f, double nu, double h) {
  if (nu == 0.0) return;
  const auto& wt = wave_table(f.grid());
  for (int c = 0; c < f.components(); ++c) {
    auto fc = f.comp(c);
    for (std::size_t m = 0; m < f.modes(); ++m) fc[m] *= std::exp(-nu * wt.k2[m] * h);
  }
}

SpectralField heat(SpectralField f, double nu, double h) {
  apply_heat(f, nu, h);
  return f;
}

}  // namespace

SpectralField GalerkinSystem::step(const SpectralField& v, double t, double h) const {
  // Lawson RK4 on w = e^{nu Lap t} v.
  const double nu = cfg_.nu;
  const SpectralField k1 = nonlinear(v, t);
  SpectralField a = v;
  a.axpy(0.5 * h, k1);
  const SpectralField k2 = nonlinear(heat(a, nu, 0.5 * h), t + 0.5 * h);
  SpectralField b = heat(v, nu, 0.5 * h);
  b.axpy(0.5 * h, k2);
  const SpectralField k3 = nonlinear(b, t + 0.5 * h);
  SpectralField c = heat(v, nu, h);
  c.axpy(h, heat(k3, nu, 0.5 * h));
  const SpectralField k4 = nonlinear(c, t + h);

  SpectralField out = heat(v, nu, h);
  out.axpy(h / 6.0, heat(k1, nu, h));
  SpectralField mid = k2;
  mid += k3;
  out.axpy(h / 3.0, heat(mid, nu, 0.5 * h));
  out.axpy(h / 6.0, k4);
  return out;
}

SpectralField semidiscrete_rhs(const SpectralField& v, double t, const SolverConfig& cfg) {
  return GalerkinSystem(cfg).rhs(v, t);
}

StabilityReport stability_report(const SolverConfig& cfg, const SpectralField& v0) {
  StabilityReport r;
  const double kmax2 = double(cfg.grid.dim) * cfg.cutoff * cfg.cutoff;
  r.viscous_number = cfg.dt * cfg.nu * kmax2;
  r.advective_number = cfg.dt * cfg.cutoff * compute_norm(v0, NormKind::kC0);
  r.ok = r.advective_number <= 1.0;
  return r;
}

Trajectory integrate(const SolverConfig& cfg) {
  return integrate(cfg, make_initial_condition(cfg));
}

Trajectory integrate(const SolverConfig& cfg, const SpectralField& v0) {
  return integrate_from(cfg, v0, 0.0);
}

Trajectory integrate_from(const SolverConfig& cfg, const SpectralField& v0_in, double t0) {
  return integrate_from(cfg, v0_in, t0, make_forcing(cfg));
}

Trajectory integrate_from(const SolverConfig& cfg, const SpectralField& v0_in, double t0,
                          const TestFieldPtr& forcing) {
  cfg.validate();
  if (!(v0_in.grid() == cfg.grid) || v0_in.components() != cfg.grid.dim) {
    throw ConfigError("initial condition does not match the configured grid");
  }
  const GalerkinSystem sys(cfg, forcing);
  SpectralField v = galerkin_project(leray_project(v0_in), cfg.cutoff);
  const StabilityReport st = stability_report(cfg, v);
  if (!st.ok && !cfg.stability_override) {
    throw ConfigError("advective stability number " + std::to_string(st.advective_number) +
                      " exceeds 1; reduce dt or set stability_override=1");
  }
  const double span = cfg.t_final - t0;
  const long long steps = std::llround(span / cfg.dt);
  if (steps < 0 || std::abs(steps * cfg.dt - span) > 1e-9 * std::max(1.0, span)) {
    throw ConfigError("restart time must lie on the step grid");
  }
  Trajectory traj;
  traj.config = cfg;
  traj.times.push_back(t0);
  traj.snapshots.push_back(v);
  for (long long s = 0; s < steps; ++s) {
    const double t = t0 + static_cast<double>(s) * cfg.dt;
    v = sys.step(v, t, cfg.dt);
    if (!v.all_finite()) throw BlowUpError(t + cfg.dt);
    if ((s + 1) % cfg.snapshot_stride == 0 || s + 1 == steps) {
      traj.times.push_back(t0 + static_cast<double>(s + 1) * cfg.dt);
      traj.snapshots.push_back(v);
    }
  }
  return traj;
}

EnergyBalance energy_balance_residual(const Trajectory& traj) {
  return energy_balance_residual(traj, make_forcing(traj.config));
}

EnergyBalance energy_balance_residual(const Trajectory& traj, const TestFieldPtr& forcing) {
  const GalerkinSystem sys(traj.config, forcing);
  const double nu = traj.config.nu;
  EnergyBalance eb;
  const std::size_t m = traj.size();
  for (std::size_t i = 0; i < m; ++i) {
    const SpectralField& v = traj.snapshots[i];
    eb.kinetic.push_back(kinetic_energy(v));
    eb.dissipation_rate.push_back(nu * grad_inner(v, v));
    eb.work_rate.push_back(forcing ? inner(sys.forcing_at(traj.times[i]), v) : 0.0);
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double h = traj.times[i + 1] - traj.times[i];
    const double g0 = eb.dissipation_rate[i] - eb.work_rate[i];
    const double g1 = eb.dissipation_rate[i + 1] - eb.work_rate[i + 1];
    const double r = eb.kinetic[i + 1] - eb.kinetic[i] + 0.5 * h * (g0 + g1);
    eb.residual.push_back(r);
    eb.total += r;
    eb.max_abs = std::max(eb.max_abs, std::abs(r));
  }
  return eb;
}

Trajectory stokes_recovery(const TestFieldPtr& delta_f, const SpectralField& delta_v0,
                           const SolverConfig& cfg) {
  cfg.validate();
  const GalerkinSystem sys(cfg, delta_f);
  const double nu = cfg.nu;
  SpectralField w = galerkin_project(leray_project(delta_v0), cfg.cutoff);
  Trajectory traj;
  traj.config = cfg;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(w);
  const int steps = cfg.steps();
  const double h = cfg.dt;
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    // int_t^{t+h} e^{-nu k^2 (t+h-s)} F(s) ds by Simpson's rule.
    SpectralField next = heat(w, nu, h);
    if (delta_f) {
      next.axpy(h / 6.0, heat(sys.forcing_at(t), nu, h));
      next.axpy(4.0 * h / 6.0, heat(sys.forcing_at(t + 0.5 * h), nu, 0.5 * h));
      next.axpy(h / 6.0, sys.forcing_at(t + h));
    }
    w = std::move(next);
    if ((s + 1) % cfg.snapshot_stride == 0) {
      traj.times.push_back((s + 1) * h);
      traj.snapshots.push_back(w);
    }
  }
  return traj;
}

}  // namespace evlab
