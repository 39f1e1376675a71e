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


// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "evlab/certify/certificates.hpp"
#include "evlab/energy/functionals.hpp"
#include "evlab/energy/rei.hpp"
#include "evlab/experiments/experiments.hpp"
#include "evlab/select/selection.hpp"
#include "evlab/solver/galerkin.hpp"

using namespace evlab;
constexpr double kPi = std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

SolverConfig tg_config(int stride = 1) {
  SolverConfig c;
  c.grid = GridSpec::make(2, 32);
  c.cutoff = 10;
  c.nu = 0.1;
  c.dt = 1e-3;
  c.t_final = 1.0;
  c.snapshot_stride = stride;
  return c;
}

// d = 2, N = 64, cutoff 21, dt = 1e-3, T = 1.
SolverConfig desk_config() {
  SolverConfig c;
  c.grid = GridSpec::make(2, 64);
  c.cutoff = 21;
  c.dt = 1e-3;
  c.t_final = 1.0;
  c.ic = "random";
  c.seed = 3;
  c.snapshot_stride = 10;
  return c;
}

SolverConfig random_config(double nu, double T) {
  SolverConfig c = tg_config();
  c.nu = nu;
  c.t_final = T;
  c.ic = "random";
  c.ic_cutoff = 6;
  c.ic_amplitude = 2.0;
  c.seed = 5;
  return c;
}

double l2l2_trapezoid(const std::vector<double>& t, const std::vector<double>& sq) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) s += 0.5 * (t[i + 1] - t[i]) * (sq[i] + sq[i + 1]);
  return std::sqrt(s);
}

// Translation by a on the torus, exact in Fourier space.
SpectralField translate(const SpectralField& f, const std::array<double, 3>& a) {
  SpectralField out = f;
  const WaveTable& w = wave_table(f.grid());
  for (int c = 0; c < f.components(); ++c) {
    auto oc = out.comp(c);
    for (std::size_t m = 0; m < out.modes(); ++m) {
      double phase = 0.0;
      for (int j = 0; j < f.grid().dim; ++j) phase -= w.k[m][j] * a[j];
      oc[m] *= std::polar(1.0, phase);
    }
  }
  return out;
}

Outcome taylor_green_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const SolverConfig cfg = tg_config();
  const Trajectory tr = integrate(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto exact = make_taylor_green(cfg.nu);
  std::vector<double> sq(tr.size());
  double energy_err = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.times[i];
    sq[i] = 2.0 * kinetic_energy(tr.snapshots[i] - exact->sample(cfg.grid, t));
    energy_err = std::max(
        energy_err, std::abs(kinetic_energy(tr.snapshots[i]) - kPi * kPi * std::exp(-4 * cfg.nu * t)));
  }
  const double err = l2l2_trapezoid(tr.times, sq);
  return {err < 1e-7 && energy_err < 1e-7 && secs < 30.0,
          fmt("L2L2 error %.3e, energy error %.3e, %.2f s", err, energy_err, secs)};
}

Outcome energy_balance() {
  const SolverConfig tg = tg_config();
  const EnergyBalance eb = energy_balance_residual(integrate(tg));
  const double step_bound = 10.0 * std::pow(tg.dt, 4) * eb.kinetic.front();
  SolverConfig inv = random_config(0.0, 1.0);
  const EnergyBalance drift = energy_balance_residual(integrate(inv));
  return {eb.max_abs < step_bound && std::abs(drift.total) < 1e-8,
          fmt("max step residual %.3e (bound %.3e), inviscid drift %.3e", eb.max_abs, step_bound,
              std::abs(drift.total))};
}

Outcome skew_symmetry() {
  std::mt19937_64 rng(2024);
  const GridSpec g = GridSpec::make(2, 32);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const SpectralField u = random_solenoidal(g, g.dealias_cutoff(), 1.0, rng);
    const SpectralField v = random_solenoidal(g, g.dealias_cutoff(), 1.0, rng);
    const SpectralField w = random_solenoidal(g, g.dealias_cutoff(), 1.0, rng);
    const double scale = compute_norm(u, NormKind::kL2) * compute_norm(v, NormKind::kH1Semi) *
                         compute_norm(w, NormKind::kH1Semi);
    const double vscale = compute_norm(u, NormKind::kL2) * compute_norm(v, NormKind::kH1Semi) *
                          compute_norm(v, NormKind::kH1Semi);
    worst = std::max(worst, std::abs(trilinear(u, v, w) + trilinear(u, w, v)) / scale);
    worst = std::max(worst, std::abs(trilinear(u, v, v)) / vscale);
  }
  return {worst < 1e-10, fmt("max scaled |b| %.3e over 100 triples", worst)};
}

Outcome rei_equality() {
  const SolverConfig cfg = tg_config();
  const CandidateSolution c = build_energy_trace(integrate(cfg), "taylor-green");
  const auto fields = relative_energy_catalogue(c, cfg.nu);
  double worst = 0.0;  // max |r| / bound
  std::size_t records = 0;
  for (const auto& vt : fields) {
    for (const auto& K : {RegularityWeight::zero(), RegularityWeight::lipschitz()}) {
      const RelativeEnergyProfile p(c, vt, K, cfg.nu, nullptr);
      const double bound = 10.0 * cfg.dt * cfg.dt + p.tail();
      auto take = [&](const ResidualReport& r) {
        worst = std::max(worst, std::abs(r.residual) / bound);
        ++records;
      };
      for (auto [a, b] : interval_pairs(p.size(), 11)) take(p.interval(a, b));
      for (std::size_t i = 0; i < p.size(); i += 20) {
        take(p.local(i));
        if (!vt->time_dependent()) take(p.reduced(i));
      }
    }
  }
  return {worst <= 1.0, fmt("%.0f records over %.0f test fields, max |residual|/bound %.3e",
                            static_cast<double>(records), static_cast<double>(fields.size()),
                            worst)};
}

Outcome zero_field_reduction() {
  SolverConfig cfg = random_config(0.05, 0.5);
  cfg.forcing = "single-mode";
  cfg.forcing_amplitude = 0.5;
  const CandidateSolution c = build_energy_trace(integrate(cfg));
  const TestFieldPtr f = make_forcing(cfg);
  const auto pairs = interval_pairs(c.size(), 11);
  const RelativeEnergyProfile p(c, make_zero_field(2), RegularityWeight::lipschitz(), cfg.nu, f);
  const EnergyInequalityReport sei = strong_energy_inequality_check(c, cfg.nu, f, pairs);
  double worst = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto r = p.interval(pairs[k].first, pairs[k].second);
    worst = std::max(worst, std::abs(r.residual - sei.records[k].residual));
  }
  return {worst < 1e-12 && !pairs.empty(),
          fmt("max |interval - energy inequality| %.3e over %.0f intervals", worst,
              static_cast<double>(pairs.size()))};
}

Outcome gronwall() {
  const SolverConfig cfg = tg_config();
  const auto tg = make_taylor_green(cfg.nu);
  std::mt19937_64 rng(77);
  const SpectralField v0 = tg->sample(cfg.grid, 0) + random_solenoidal(cfg.grid, 6, 0.05, rng);
  const CandidateSolution c = build_energy_trace(integrate(cfg, v0), "perturbed");
  const RegularityWeight K = calibrated_serrin(2, 4.0, cfg.nu, 200, 1);
  const GronwallReport rep = gronwall_dissipative_bound(c, tg, K, cfg.nu, nullptr);
  return {rep.pass && rep.min_slack >= -1e-8 && rep.lhs.front() > 0.0,
          fmt("calibrated Serrin c=%.4g, min slack %.3e over %.0f snapshots", K.constant(),
              rep.min_slack, static_cast<double>(rep.times.size()))};
}

Outcome defect_bookkeeping() {
  const Trajectory fine = integrate(random_config(0.02, 0.5));
  double conserve = 0.0, xi_min = 0.0;
  for (int m : {2, 4, 6}) {
    const CandidateSolution c = synthesize_defect_candidate(fine, m);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double ek = kinetic_energy(fine.snapshots[i]);
      conserve = std::max(conserve, std::abs(c.trace.kinetic[i] + c.trace.xi[i] - ek) /
                                        std::max(1.0, ek));
      xi_min = std::min(xi_min, c.trace.xi[i]);
    }
  }
  const CandidateSolution tg = build_energy_trace(integrate(tg_config()));
  const double tv = total_variation(tg.trace.E);
  const double drop = tg.trace.E.front() - tg.trace.E.back();
  const double tv_err = std::abs(tv - drop);
  return {conserve < 1e-12 && xi_min >= 0.0 && tv_err < 1e-10,
          fmt("kinetic+xi error %.3e, min xi %.3e, |TV - (E(0)-E(T))| %.3e", conserve, xi_min,
              tv_err)};
}

Outcome weak_after_refinement() {
  const SolverConfig cfg = random_config(0.02, 0.5);
  const CandidateSolution coarse = synthesize_defect_candidate(integrate(cfg), 6);
  const RefinementResult ref = refine_to_fixed_point(coarse);
  const double w = weak_battery_max(ref.candidate, cfg.nu, nullptr);
  return {w < 1e-6 && ref.candidate.xi_max() < 1e-10,
          fmt("max |residual|/|phi| %.3e after %.0f restart(s)", w,
              static_cast<double>(ref.steps.size()))};
}

Outcome selection() {
  const SolverConfig cfg = random_config(0.02, 0.5);
  const Trajectory fine = integrate(cfg);
  const CandidateSolution resolved = build_energy_trace(fine, "resolved");
  const CandidateSolution coarse = synthesize_defect_candidate(fine, 6);
  CandidateSet set{{refine_to_fixed_point(resolved).candidate,
                    refine_to_fixed_point(coarse).candidate}};
  const SelectionResult sel = select_minimal(set);
  const bool selected_ok = sel.outcome == SelectionResult::Outcome::kSelected &&
                           set.candidates[sel.selected].xi_max() < 1e-10;

  // Translated initial data: same energies, different fields.
  Trajectory shifted_run = integrate(cfg, translate(fine.snapshots.front(), {1.0, 0.5, 0.0}));
  const CandidateSolution shifted = build_energy_trace(shifted_run, "translated");
  double energy_gap = 0.0;
  for (std::size_t i = 0; i < resolved.size(); ++i)
    energy_gap = std::max(energy_gap, std::abs(resolved.trace.E[i] - shifted.trace.E[i]));
  const double lam = 0.3;
  const CandidateSolution mix = convex_combine(resolved, shifted, lam);
  double gap_err = 0.0;
  for (std::size_t i = 0; i < mix.size(); ++i) {
    const double expected =
        lam * (1 - lam) * kinetic_energy(resolved.trajectory.snapshots[i] - shifted.trajectory.snapshots[i]);
    gap_err = std::max(gap_err, std::abs(mix.trace.xi[i] - expected) /
                                    std::max(1.0, mix.trace.E[i]));
  }
  const RefinementResult ref = refine_to_fixed_point(mix);
  const bool refined = !ref.steps.empty() && ref.candidate.xi_max() < 1e-10;
  return {selected_ok && gap_err < 1e-12 && mix.xi_max() > 1e-3 && refined,
          fmt("selected xi_max %.3e, convexity gap error %.3e, refined xi_max %.3e",
              selected_ok ? set.candidates[sel.selected].xi_max() : NAN, gap_err,
              ref.candidate.xi_max()) +
              fmt(" (energy mismatch of the pair %.1e)", energy_gap)};
}

Outcome vanishing_viscosity() {
  ExperimentSpec s;
  s.kind = ExperimentKind::kSweepNu;
  s.config = desk_config();
  s.values = {0.1, 0.05, 0.025};
  const ExperimentResult r = sweep_viscosity(s);
  const auto& inv = r.report["inviscid_form"];
  std::string diffs;
  for (const auto& p : r.report["pairs"])
    if (p.contains("max_energy_difference")) diffs += fmt(" %.4f", p["max_energy_difference"].get<double>());
  const double margin = inv["worst_margin"].is_number() ? inv["worst_margin"].get<double>() : NAN;
  return {r.exit_code == kExitPass && r.report["energy_differences_decreasing"] == true &&
              inv["verdict"] == "pass",
          "max |dE| pairs:" + diffs + fmt(", inviscid-form worst margin %.3e", margin)};
}

Outcome continuous_dependence() {
  ExperimentSpec s;
  s.kind = ExperimentKind::kPerturb;
  s.config = desk_config();
  s.config.nu = 0.05;
  s.values = {1e-2, 1e-3};
  const ExperimentResult r = perturb_data(s);
  bool cond = true;
  for (const auto& p : r.report["points"]) cond = cond && p["condition_a"] == true;
  const auto& q = r.report["ratios"][0];
  const double er = q["eps_ratio"], br = q["E_bar_ratio"], dr = q["distance_ratio"];
  return {cond && br >= er && dr >= er && r.exit_code == kExitPass,
          fmt("E_bar ratio %.5f, distance ratio %.5f, eps ratio %.1f", br, dr, er) +
              (cond ? ", recovery condition holds" : ", recovery condition violated")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Taylor-Green oracle", taylor_green_oracle},
      {"discrete energy balance", energy_balance},
      {"trilinear skew-symmetry", skew_symmetry},
      {"relative energy equality on a smooth solution", rei_equality},
      {"zero test field reduces to the energy inequality", zero_field_reduction},
      {"weak-strong Gronwall bound", gronwall},
      {"defect bookkeeping", defect_bookkeeping},
      {"zero defect implies the weak form", weak_after_refinement},
      {"maximal-dissipation selection", selection},
      {"vanishing viscosity", vanishing_viscosity},
      {"continuous dependence on data", continuous_dependence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed ? 1 : 0;
}
