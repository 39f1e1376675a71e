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


#include "evlab/experiments/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>

#include "evlab/common/error.hpp"
#include "evlab/common/parallel.hpp"
#include "evlab/energy/quadrature.hpp"
#include "evlab/select/selection.hpp"
#include "evlab/solver/trajectory_io.hpp"

namespace evlab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json report_header(ExperimentKind kind, const SolverConfig& cfg, const TolerancePolicy& p) {
  json j;
  j["kind"] = std::string(experiment_kind_name(kind));
  j["format_versions"] = {{"report", kReportFormatVersion},
                          {"trajectory", kTrajectoryFormatVersion},
                          {"trace_csv", kTraceCsvFormatVersion},
                          {"candidate", kCandidateFormatVersion}};
  j["config"] = to_config_map(cfg);
  j["seed"] = cfg.seed;
  j["tolerance_policy"] = p.to_json();
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot write " + path.string());
  os << text;
}

void write_report(const ExperimentSpec& spec, const json& report) {
  if (!spec.out.empty()) write_text(spec.out / "report.json", dump_report(report));
}

std::vector<std::size_t> node_indices(std::size_t n, std::size_t nodes) {
  std::vector<std::size_t> v;
  if (n == 0) return v;
  nodes = std::max<std::size_t>(2, std::min(nodes, n));
  for (std::size_t k = 0; k < nodes; ++k) v.push_back(k * (n - 1) / (nodes - 1));
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

double l2_norm(const SpectralField& f) { return std::sqrt(2.0 * kinetic_energy(f)); }

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw UsageError("trajectories have different snapshot grids");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = l2_norm(a.snapshots[i] - b.snapshots[i]);
    d[i] = x * x;
  }
  return std::sqrt(std::max(0.0, trapezoid(a.times, d, 0, a.size() - 1)));
}

void require_strictly_decreasing(const std::vector<double>& v, const char* what, bool positive) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0 || (positive && v[i] == 0.0))
      throw UsageError(std::string(what) + " must be finite and " +
                       (positive ? "positive" : "non-negative"));
    if (i > 0 && !(v[i] < v[i - 1]))
      throw UsageError(std::string(what) + " must be strictly decreasing");
  }
}

}  // namespace

std::string_view experiment_kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kSimulate: return "simulate";
    case ExperimentKind::kVerify: return "verify";
    case ExperimentKind::kSweepNu: return "sweep-nu";
    case ExperimentKind::kSweepN: return "sweep-n";
    case ExperimentKind::kPerturb: return "perturb";
    case ExperimentKind::kSelect: return "select";
  }
  return "simulate";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::kSimulate, ExperimentKind::kVerify, ExperimentKind::kSweepNu,
                 ExperimentKind::kSweepN, ExperimentKind::kPerturb, ExperimentKind::kSelect})
    if (experiment_kind_name(k) == name) return k;
  throw UsageError("unknown experiment kind '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
  switch (kind) {
    case ExperimentKind::kSweepNu:
      if (values.size() < 2) throw UsageError("viscosity sweep needs at least two values");
      require_strictly_decreasing(values, "viscosities", true);
      break;
    case ExperimentKind::kSweepN: {
      if (cutoffs.empty()) throw UsageError("Galerkin sweep needs at least one cutoff");
      for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] < 1) throw UsageError("Galerkin cutoffs must be positive");
        if (i > 0 && cutoffs[i] <= cutoffs[i - 1])
          throw UsageError("Galerkin cutoffs must be strictly increasing");
      }
      if (cutoffs.back() > config.grid.dealias_cutoff())
        throw UsageError("Galerkin cutoff " + std::to_string(cutoffs.back()) +
                         " exceeds the dealiasing bound " +
                         std::to_string(config.grid.dealias_cutoff()));
      break;
    }
    case ExperimentKind::kPerturb:
      if (values.empty()) throw UsageError("perturbation sweep needs at least one amplitude");
      require_strictly_decreasing(values, "perturbation amplitudes", false);
      break;
    case ExperimentKind::kVerify:
    case ExperimentKind::kSelect:
      if (input.empty()) throw UsageError("an input directory is required");
      break;
    case ExperimentKind::kSimulate:
      break;
  }
  if (!(policy.scale > 0.0) || !std::isfinite(policy.scale))
    throw UsageError("tolerance scale must be positive");
  if (forms.empty()) throw UsageError("at least one residual form is required");
}

ExperimentSpec parse_experiment_spec(const json& j) {
  if (!j.is_object()) throw UsageError("experiment spec must be a JSON object");
  ExperimentSpec s;
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "kind") {
        s.kind = parse_experiment_kind(val.get<std::string>());
      } else if (key == "config") {
        std::string text;
        for (const auto& [k, v] : val.items())
          text += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
        s.config = parse_solver_config(text);
      } else if (key == "config_text") {
        s.config = parse_solver_config(val.get<std::string>());
      } else if (key == "values") {
        s.values = val.get<std::vector<double>>();
      } else if (key == "cutoffs") {
        s.cutoffs = val.get<std::vector<int>>();
      } else if (key == "forms") {
        s.forms.clear();
        for (const auto& f : val) s.forms.push_back(parse_rei_form(f.get<std::string>()));
      } else if (key == "weight") {
        s.weight = val.get<std::string>();
      } else if (key == "tol_scale") {
        s.policy.scale = val.get<double>();
      } else if (key == "interval_nodes") {
        s.interval_nodes = val.get<std::size_t>();
      } else if (key == "input") {
        s.input = val.get<std::string>();
      } else if (key == "out") {
        s.out = val.get<std::string>();
      } else if (key == "perturb_forcing") {
        s.perturb_forcing = val.get<bool>();
      } else if (key == "seed") {
        s.config.seed = val.get<unsigned long long>();
      } else {
        throw UsageError("unknown experiment spec key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed experiment spec: ") + e.what());
  }
  // seed given separately wins over the config's
  if (j.contains("seed")) s.config.seed = j["seed"].get<unsigned long long>();
  s.config.validate();
  return s;
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

double inviscid_slack(double nu, double grad_l2l2, double E0) {
  const double a = std::sqrt(std::max(nu, 0.0)) * grad_l2l2;
  return a * (std::sqrt(std::max(E0, 0.0)) + a);
}

double weak_battery_max(const CandidateSolution& c, double nu, const TestFieldPtr& forcing) {
  double worst = 0.0;
  for (const auto& phi : spatial_catalogue(c.grid(), c.trajectory.config.cutoff))
    for (const auto& psi : profile_catalogue(c.times().back())) {
      const WeakResidual w = weak_residual(c, phi, psi, nu, forcing);
      if (w.phi_norm > 0.0) worst = std::max(worst, std::abs(w.residual) / w.phi_norm);
    }
  return worst;
}

VerifyOutcome verify_candidate(const CandidateSolution& c, const VerifyOptions& opt) {
  c.check_invariants();
  const double nu = c.trajectory.config.nu;
  const TestFieldPtr forcing = make_forcing(c.trajectory.config);
  check_weight_regime(opt.weight, nu);
  VerifyOutcome out;
  const auto pairs = interval_pairs(c.size(), opt.interval_nodes);
  const auto nodes = node_indices(c.size(), opt.interval_nodes);

  json rei = json::array();
  for (const auto& f : relative_energy_catalogue(c, nu)) {
    const RelativeEnergyProfile p(c, f, opt.weight, nu, forcing, opt.policy);
    auto add = [&](const ResidualReport& r) {
      out.rei_pass = out.rei_pass && r.pass;
      rei.push_back(r.to_json());
    };
    for (ReiForm form : opt.forms) {
      switch (form) {
        case ReiForm::kInterval:
          for (const auto& [a, b] : pairs) add(p.interval(a, b));
          break;
        case ReiForm::kLocal:
          for (auto i : nodes) add(p.local(i));
          break;
        case ReiForm::kReduced:
          if (f->time_dependent()) break;
          for (auto i : nodes) add(p.reduced(i));
          break;
      }
    }
  }

  const auto sei = strong_energy_inequality_check(c, nu, forcing, pairs, opt.policy);
  out.energy_pass = sei.pass;
  json sei_records = json::array();
  for (const auto& r : sei.records) sei_records.push_back(r.to_json());

  const bool defective = c.xi_max() > 1e-10;
  json weak = json::array();
  for (const auto& phi : spatial_catalogue(c.grid(), c.trajectory.config.cutoff))
    for (const auto& psi : profile_catalogue(c.times().back())) {
      const WeakResidual w = weak_residual(c, phi, psi, nu, forcing);
      const double ratio = w.phi_norm > 0.0 ? std::abs(w.residual) / w.phi_norm : 0.0;
      const bool ok = ratio < opt.weak_tol;
      out.weak_pass = out.weak_pass && ok;
      out.weak_residual_max = std::max(out.weak_residual_max, ratio);
      json r = w.to_json();
      r["relative"] = ratio;
      r["verdict"] = ok ? "pass" : (defective ? "expected-failure" : "fail");
      weak.push_back(std::move(r));
    }

  out.pass = out.rei_pass && (defective || (out.energy_pass && out.weak_pass));
  out.report = {
      {"candidate_id", c.id},
      {"provenance", std::string(provenance_name(c.provenance))},
      {"xi_max", c.xi_max()},
      {"relative_energy",
       {{"weight", opt.weight.spec()}, {"verdict", out.rei_pass ? "pass" : "fail"}, {"records", rei}}},
      {"energy_inequality",
       {{"verdict", sei.pass ? "pass" : (defective ? "expected-failure" : "fail")},
        {"max_residual", sei.max_residual},
        {"records", sei_records}}},
      {"weak_residual",
       {{"verdict", out.weak_pass ? "pass" : (defective ? "expected-failure" : "fail")},
        {"tolerance", opt.weak_tol},
        {"max_relative", out.weak_residual_max},
        {"records", weak}}},
      {"verdict", out.pass ? "pass" : "fail"}};
  return out;
}

RecoveryBound recovery_energy_bound(const Trajectory& v, const Trajectory& vbar,
                                    const TestFieldPtr& forcing, const TestFieldPtr& delta_f) {
  if (v.size() != vbar.size() || v.size() == 0)
    throw UsageError("recovery and base trajectories use different snapshot grids");
  const std::size_t n = v.size();
  const double nu = v.config.nu;
  const GalerkinSystem base(v.config, forcing);
  const GalerkinSystem pert(v.config, delta_f);
  RecoveryBound b;
  b.times = v.times;
  std::vector<double> g(n);
  b.vbar_norm.resize(n);
  b.v_norm.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& vi = v.snapshots[i];
    const auto& wi = vbar.snapshots[i];
    double gi = 2.0 * nu * grad_inner(vi, wi);
    if (delta_f) gi -= inner(pert.forcing_at(v.times[i]), vi);
    if (forcing) gi -= inner(base.forcing_at(v.times[i]), wi);
    g[i] = gi;
    b.vbar_norm[i] = l2_norm(wi);
    b.v_norm[i] = l2_norm(vi);
  }
  const std::vector<double> G = cumulative_trapezoid(v.times, g);
  const double sup_w = *std::max_element(b.vbar_norm.begin(), b.vbar_norm.end());
  const double sup_v = *std::max_element(b.v_norm.begin(), b.v_norm.end());
  const double h0 = 0.5 * b.vbar_norm[0] * b.vbar_norm[0];
  double E0 = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = 0.5 * b.vbar_norm[i] * b.vbar_norm[i];
    E0 = std::max(E0, 2.0 * sup_w * sup_v - hi + G[i] + h0);
  }
  b.E_bar.resize(n);
  b.condition_a_margin = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = 0.5 * b.vbar_norm[i] * b.vbar_norm[i];
    b.E_bar[i] = E0 - h0 - G[i] + hi;
    b.max_E_bar = std::max(b.max_E_bar, b.E_bar[i]);
    b.condition_a_margin =
        std::min(b.condition_a_margin, b.E_bar[i] - 2.0 * b.vbar_norm[i] * b.v_norm[i]);
  }
  // [E_bar - |vbar|^2 / 2]_s^t + int_s^t g <= 0 on a node subset
  for (auto s : node_indices(n, 9))
    for (auto t : node_indices(n, 9)) {
      if (t <= s) continue;
      const double hs = 0.5 * b.vbar_norm[s] * b.vbar_norm[s];
      const double ht = 0.5 * b.vbar_norm[t] * b.vbar_norm[t];
      const double lhs = (b.E_bar[t] - ht) - (b.E_bar[s] - hs) + trapezoid(v.times, g, s, t);
      b.condition_b_max = std::max(b.condition_b_max, lhs);
    }
  return b;
}

ExperimentResult run_simulate(const ExperimentSpec& spec) {
  spec.validate();
  const SolverConfig& cfg = spec.config;
  const Trajectory traj = integrate(cfg);
  const CandidateSolution c = build_energy_trace(traj, "resolved");
  const EnergyBalance eb = energy_balance_residual(traj);
  const StabilityReport st = stability_report(cfg, traj.snapshots.front());
  json r = report_header(spec.kind, cfg, spec.policy);
  r["snapshots"] = traj.size();
  r["kinetic_initial"] = c.trace.kinetic.front();
  r["kinetic_final"] = c.trace.kinetic.back();
  r["energy_balance"] = {{"max_abs_step_residual", eb.max_abs}, {"total_residual", eb.total}};
  r["stability"] = {{"viscous_number", st.viscous_number},
                    {"advective_number", st.advective_number},
                    {"override", cfg.stability_override}};
  r["verdict"] = "pass";
  if (!spec.out.empty()) {
    save_candidate(spec.out, c);
    write_report(spec, r);
  }
  return {r, kExitPass};
}

ExperimentResult run_verify(const ExperimentSpec& spec) {
  spec.validate();
  const CandidateSolution c = load_candidate(spec.input);
  VerifyOptions opt;
  opt.forms = spec.forms;
  opt.weight = RegularityWeight::parse(spec.weight, c.grid().dim);
  opt.policy = spec.policy;
  opt.interval_nodes = spec.interval_nodes;
  opt.weak_tol = spec.weak_tol * spec.policy.scale;
  const VerifyOutcome v = verify_candidate(c, opt);
  json r = report_header(spec.kind, c.trajectory.config, spec.policy);
  for (const auto& [k, val] : v.report.items()) r[k] = val;
  write_report(spec, r);
  return {r, v.pass ? kExitPass : kExitFail};
}

ExperimentResult sweep_viscosity(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t m = spec.values.size();
  std::vector<std::optional<CandidateSolution>> runs(m);
  std::vector<double> blowup(m, -1.0);
  parallel_for(m, [&](std::size_t i) {
    SolverConfig cfg = spec.config;
    cfg.nu = spec.values[i];
    try {
      runs[i] = build_energy_trace(integrate(cfg), "nu=" + fmt(cfg.nu));
    } catch (const BlowUpError& e) {
      blowup[i] = e.time();
    }
  });

  // Reference field for the reported slack: the initial condition, frozen.
  const SpectralField v0 = galerkin_project(leray_project(make_initial_condition(spec.config)),
                                            spec.config.cutoff);
  const double T = spec.config.t_final;
  const double E0 = kinetic_energy(v0);
  const double g_ref = std::sqrt(T * grad_inner(v0, v0));

  json r = report_header(spec.kind, spec.config, spec.policy);
  json points = json::array();
  bool pass = true;
  for (std::size_t i = 0; i < m; ++i) {
    json p = {{"nu", spec.values[i]},
              {"slack", inviscid_slack(spec.values[i], g_ref, E0)}};
    if (runs[i]) {
      p["status"] = "ok";
      p["E_final"] = runs[i]->trace.E.back();
    } else {
      p["status"] = "blow-up";
      p["blowup_time"] = blowup[i];
      pass = false;
    }
    points.push_back(p);
  }
  r["points"] = points;

  json pairs = json::array();
  bool decreasing = true;
  double prev = INFINITY;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (!runs[i] || !runs[i + 1]) {
      pairs.push_back({{"nu_a", spec.values[i]}, {"nu_b", spec.values[i + 1]}, {"status", "missing"}});
      decreasing = false;
      continue;
    }
    const auto& a = runs[i]->trace.E;
    const auto& b = runs[i + 1]->trace.E;
    std::vector<double> d(a.size());
    double mx = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      d[k] = std::abs(a[k] - b[k]);
      mx = std::max(mx, d[k]);
    }
    const double l1 = trapezoid(runs[i]->times(), d, 0, d.size() - 1);
    const double dist = trajectory_distance(runs[i]->trajectory, runs[i + 1]->trajectory);
    pairs.push_back({{"nu_a", spec.values[i]},
                     {"nu_b", spec.values[i + 1]},
                     {"max_energy_difference", mx},
                     {"energy_difference_l1", l1},
                     {"l2l2_distance", dist}});
    decreasing = decreasing && mx < prev;
    prev = mx;
  }
  r["pairs"] = pairs;
  r["energy_differences_decreasing"] = decreasing;
  pass = pass && decreasing;

  // Inviscid form on the smallest viscosity.
  json inv = json::array();
  bool inv_pass = false;
  double worst_margin = INFINITY;  // min of tol + slack - residual
  if (runs.back()) {
    inv_pass = true;
    const CandidateSolution& c = *runs.back();
    const double nu = spec.values.back();
    const TestFieldPtr forcing = make_forcing(spec.config);
    const RegularityWeight K = RegularityWeight::lipschitz();
    const EnergyRates rates = energy_rates(c, nu, forcing);
    std::vector<double> absw(rates.work.size());
    for (std::size_t k = 0; k < absw.size(); ++k) absw[k] = std::abs(rates.work[k]);
    const double budget = c.trace.E.front() + trapezoid(c.times(), absw, 0, c.size() - 1);
    const auto ivals = interval_pairs(c.size(), spec.interval_nodes);
    for (const auto& f : relative_energy_catalogue(c, nu)) {
      const RelativeEnergyProfile p(c, f, K, 0.0, forcing, spec.policy);
      std::vector<double> g2(c.size());
      for (std::size_t k = 0; k < c.size(); ++k) {
        const SpectralField s = f->sample(c.grid(), c.times()[k]);
        g2[k] = grad_inner(s, s);
      }
      for (const auto& [a, b] : ivals) {
        const ResidualReport rr = p.interval(a, b);
        const double G = std::sqrt(std::max(0.0, trapezoid(c.times(), g2, a, b)));
        const double slack = inviscid_slack(nu, G, budget);
        const bool ok = rr.residual <= rr.tol + slack;
        inv_pass = inv_pass && ok;
        worst_margin = std::min(worst_margin, rr.tol + slack - rr.residual);
        json j = rr.to_json();
        j["slack"] = slack;
        j["verdict"] = ok ? "pass" : "fail";
        inv.push_back(std::move(j));
      }
    }
  }
  r["inviscid_form"] = {{"nu", spec.values.back()},
                        {"weight", RegularityWeight::lipschitz().spec()},
                        {"verdict", inv_pass ? "pass" : "fail"},
                        {"worst_margin", std::isfinite(worst_margin) ? json(worst_margin) : json()},
                        {"records", inv}};
  pass = pass && inv_pass;
  r["verdict"] = pass ? "pass" : "fail";

  if (!spec.out.empty()) {
    std::string csv = "nu,status,E_final,slack\n";
    for (std::size_t i = 0; i < m; ++i) {
      csv += fmt(spec.values[i]) + "," + (runs[i] ? "ok" : "blow-up") + "," +
             (runs[i] ? fmt(runs[i]->trace.E.back()) : "nan") + "," +
             fmt(inviscid_slack(spec.values[i], g_ref, E0)) + "\n";
      if (runs[i]) {
        SolverConfig cfg = spec.config;
        cfg.nu = spec.values[i];
        write_text(spec.out / ("nu_" + std::to_string(i)) / "trace.csv",
                   trace_csv(*runs[i], cfg.nu, make_forcing(cfg)));
      }
    }
    write_text(spec.out / "summary.csv", csv);
    write_report(spec, r);
  }
  return {r, pass ? kExitPass : kExitFail};
}

ExperimentResult sweep_galerkin(const ExperimentSpec& spec) {
  spec.validate();
  SolverConfig fine_cfg = spec.config;
  fine_cfg.cutoff = spec.cutoffs.back();
  const Trajectory fine_traj = integrate(fine_cfg);
  const CandidateSolution fine = build_energy_trace(fine_traj, "n=" + std::to_string(fine_cfg.cutoff));
  const std::size_t m = spec.cutoffs.size();
  struct Point {
    double xi_final = 0, xi_max = 0, distance = 0;
    double blowup = -1;
  };
  std::vector<Point> pts(m);
  parallel_for(m, [&](std::size_t i) {
    const int n = spec.cutoffs[i];
    const CandidateSolution coarse = synthesize_defect_candidate(fine_traj, n);
    pts[i].xi_final = coarse.trace.xi.back();
    pts[i].xi_max = coarse.xi_max();
    SolverConfig cfg = spec.config;
    cfg.cutoff = n;
    try {
      const CandidateSolution run = build_energy_trace(integrate(cfg));
      pts[i].distance = l2l2_distance(run, fine);
    } catch (const BlowUpError& e) {
      pts[i].blowup = e.time();
    }
  });
  json r = report_header(spec.kind, spec.config, spec.policy);
  json points = json::array();
  bool monotone = true, pass = true;
  for (std::size_t i = 0; i < m; ++i) {
    json p = {{"cutoff", spec.cutoffs[i]},
              {"xi_final", pts[i].xi_final},
              {"xi_max", pts[i].xi_max}};
    if (pts[i].blowup >= 0) {
      p["status"] = "blow-up";
      p["blowup_time"] = pts[i].blowup;
      pass = false;
    } else {
      p["status"] = "ok";
      p["l2l2_distance_to_finest"] = pts[i].distance;
    }
    if (i > 0 && pts[i].xi_final > pts[i - 1].xi_final + 1e-14) monotone = false;
    points.push_back(p);
  }
  r["finest_cutoff"] = fine_cfg.cutoff;
  r["points"] = points;
  r["xi_nonincreasing"] = monotone;
  pass = pass && monotone;
  r["verdict"] = pass ? "pass" : "fail";
  if (!spec.out.empty()) {
    std::string csv = "cutoff,xi_final,xi_max,l2l2_distance_to_finest\n";
    for (std::size_t i = 0; i < m; ++i)
      csv += std::to_string(spec.cutoffs[i]) + "," + fmt(pts[i].xi_final) + "," +
             fmt(pts[i].xi_max) + "," + (pts[i].blowup >= 0 ? "nan" : fmt(pts[i].distance)) + "\n";
    write_text(spec.out / "summary.csv", csv);
    write_report(spec, r);
  }
  return {r, pass ? kExitPass : kExitFail};
}

ExperimentResult perturb_data(const ExperimentSpec& spec) {
  spec.validate();
  const SolverConfig& cfg = spec.config;
  const TestFieldPtr forcing = make_forcing(cfg);
  const SpectralField v0 = make_initial_condition(cfg);
  const Trajectory base = integrate_from(cfg, v0, 0.0, forcing);

  const int band = std::min(4, cfg.cutoff);
  std::mt19937_64 rng(cfg.seed + 101);
  const SpectralField u = random_solenoidal(cfg.grid, band, 0.5, rng);
  const TestFieldPtr g =
      spec.perturb_forcing ? make_random_static(cfg.grid, std::min(3, cfg.cutoff), 0.5, cfg.seed + 202)
                           : nullptr;

  const std::size_t m = spec.values.size();
  struct Point {
    RecoveryBound bound;
    double distance = 0.0;
    double balance = 0.0;
  };
  std::vector<Point> pts(m);
  parallel_for(m, [&](std::size_t i) {
    const double eps = spec.values[i];
    const TestFieldPtr df = g ? make_sum_field(nullptr, g, eps) : nullptr;
    const Trajectory vbar = stokes_recovery(df, eps * u, cfg);
    pts[i].bound = recovery_energy_bound(base, vbar, forcing, df);
    const TestFieldPtr fp = g ? make_sum_field(forcing, g, eps) : forcing;
    SpectralField w0 = v0;
    w0.axpy(eps, u);
    const Trajectory pert = integrate_from(cfg, w0, 0.0, fp);
    pts[i].distance = trajectory_distance(pert, base);
    pts[i].balance = energy_balance_residual(pert, fp).max_abs;
  });

  json r = report_header(spec.kind, cfg, spec.policy);
  r["perturb_forcing"] = spec.perturb_forcing;
  json points = json::array();
  bool pass = true;
  const double scale = std::max(1.0, kinetic_energy(base.snapshots.front()));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& b = pts[i].bound;
    const bool cond_a = b.condition_a_margin >= -1e-12 * scale;
    const bool cond_b = b.condition_b_max <= 1e-12 * scale;
    pass = pass && cond_a && cond_b;
    points.push_back({{"eps", spec.values[i]},
                      {"max_E_bar", b.max_E_bar},
                      {"E_bar_initial", b.E_bar.front()},
                      {"condition_a_margin", b.condition_a_margin},
                      {"condition_a", cond_a},
                      {"condition_b_max", b.condition_b_max},
                      {"condition_b", cond_b},
                      {"l2l2_distance", pts[i].distance},
                      {"perturbed_energy_balance_max", pts[i].balance}});
  }
  json ratios = json::array();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (spec.values[i + 1] == 0.0) continue;
    const double er = spec.values[i] / spec.values[i + 1];
    const double br = pts[i].bound.max_E_bar / pts[i + 1].bound.max_E_bar;
    const double dr = pts[i].distance / pts[i + 1].distance;
    const bool ok = br >= er && dr >= er;
    pass = pass && ok;
    ratios.push_back({{"eps_ratio", er},
                      {"E_bar_ratio", br},
                      {"distance_ratio", dr},
                      {"verdict", ok ? "pass" : "fail"}});
  }
  r["points"] = points;
  r["ratios"] = ratios;
  r["verdict"] = pass ? "pass" : "fail";
  if (!spec.out.empty()) {
    std::string csv = "eps,max_E_bar,condition_a_margin,l2l2_distance\n";
    for (std::size_t i = 0; i < m; ++i)
      csv += fmt(spec.values[i]) + "," + fmt(pts[i].bound.max_E_bar) + "," +
             fmt(pts[i].bound.condition_a_margin) + "," + fmt(pts[i].distance) + "\n";
    write_text(spec.out / "summary.csv", csv);
    write_report(spec, r);
  }
  return {r, pass ? kExitPass : kExitFail};
}

ExperimentResult run_select(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<fs::path> dirs;
  if (fs::exists(spec.input / "manifest.json")) {
    dirs.push_back(spec.input);
  } else {
    if (!fs::is_directory(spec.input))
      throw UsageError("candidate directory " + spec.input.string() + " does not exist");
    for (const auto& e : fs::directory_iterator(spec.input))
      if (e.is_directory() && fs::exists(e.path() / "manifest.json")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
  }
  if (dirs.empty()) throw UsageError("no candidates found under " + spec.input.string());

  std::vector<CandidateSolution> loaded;
  for (const auto& d : dirs) loaded.push_back(load_candidate(d));
  CandidateSet raw{loaded};
  raw.validate();

  std::vector<RefinementResult> refined(loaded.size(), RefinementResult{loaded.front(), {}});
  parallel_for(loaded.size(), [&](std::size_t i) {
    refined[i] = refine_to_fixed_point(loaded[i], spec.jump_tol);
  });
  CandidateSet set;
  for (const auto& rr : refined) set.candidates.push_back(rr.candidate);
  const SelectionResult sel = select_minimal(set);

  json r = report_header(spec.kind, loaded.front().trajectory.config, spec.policy);
  json cands = json::array();
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    json steps = json::array();
    for (const auto& s : refined[i].steps) steps.push_back({{"t0", s.t0}, {"xi_removed", s.xi_removed}});
    cands.push_back({{"id", loaded[i].id},
                     {"directory", dirs[i].filename().string()},
                     {"provenance", std::string(provenance_name(loaded[i].provenance))},
                     {"xi_max", loaded[i].xi_max()},
                     {"refined_id", refined[i].candidate.id},
                     {"refinements", steps}});
  }
  r["candidates"] = cands;
  const json sel_json = sel.to_json(set);
  for (const auto& [k, v] : sel_json.items()) r[k] = v;

  int code = kExitPass;
  switch (sel.outcome) {
    case SelectionResult::Outcome::kIncomparable:
      code = kExitIncomparable;
      r["verdict"] = "incomparable";
      break;
    case SelectionResult::Outcome::kConvexityContradiction:
      code = kExitFail;
      r["verdict"] = "fail";
      break;
    case SelectionResult::Outcome::kSelected: {
      const CandidateSolution& c = set.candidates[sel.selected];
      json steps = json::array();
      for (const auto& s : refined[sel.selected].steps)
        steps.push_back({{"t0", s.t0}, {"xi_removed", s.xi_removed}});
      const double weak =
          weak_battery_max(c, c.trajectory.config.nu, make_forcing(c.trajectory.config));
      const bool ok = c.xi_max() < spec.jump_tol && weak < spec.weak_tol;
      r["refinements"] = steps;
      r["final_xi_max"] = c.xi_max();
      r["weak_residual_max"] = weak;
      r["weak_tolerance"] = spec.weak_tol;
      r["verdict"] = ok ? "pass" : "fail";
      code = ok ? kExitPass : kExitFail;
      if (!spec.out.empty()) save_candidate(spec.out / "selected", c);
      break;
    }
  }
  write_report(spec, r);
  return {r, code};
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::kSimulate: return run_simulate(spec);
    case ExperimentKind::kVerify: return run_verify(spec);
    case ExperimentKind::kSweepNu: return sweep_viscosity(spec);
    case ExperimentKind::kSweepN: return sweep_galerkin(spec);
    case ExperimentKind::kPerturb: return perturb_data(spec);
    case ExperimentKind::kSelect: return run_select(spec);
  }
  throw UsageError("unknown experiment kind");
}

}  // namespace evlab
