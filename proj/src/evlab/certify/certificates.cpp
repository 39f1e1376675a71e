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


#include "evlab/certify/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "evlab/common/error.hpp"
#include "evlab/common/parallel.hpp"
#include "evlab/energy/quadrature.hpp"
#include "evlab/solver/trajectory_io.hpp"

namespace evlab {

CandidateSolution build_energy_trace(const Trajectory& traj, std::string id) {
  if (traj.size() == 0) throw UsageError("empty trajectory");
  CandidateSolution c;
  c.id = std::move(id);
  c.trajectory = traj;
  c.trace = make_trace(traj, {});
  c.provenance = Provenance::kResolvedRun;
  return c;
}

CandidateSolution synthesize_defect_candidate(const Trajectory& fine, int m) {
  if (fine.size() == 0) throw UsageError("empty trajectory");
  if (m < 1) throw UsageError("coarse cutoff must be at least 1");
  if (m > fine.config.cutoff) {
    throw UsageError("coarse cutoff " + std::to_string(m) + " exceeds the fine cutoff " +
                     std::to_string(fine.config.cutoff));
  }
  CandidateSolution c;
  c.id = "coarse(" + std::to_string(m) + ")";
  c.provenance = Provenance::kCoarseGrained;
  c.trajectory.config = fine.config;
  c.trajectory.config.cutoff = m;
  c.trajectory.times = fine.times;
  const std::size_t n = fine.size();
  c.trajectory.snapshots.resize(n);
  EnergyTrace& tr = c.trace;
  tr.times = fine.times;
  tr.E.resize(n);
  tr.kinetic.resize(n);
  tr.xi.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const SpectralField& v = fine.snapshots[i];
    SpectralField coarse = galerkin_project(v, m);
    tr.xi[i] = kinetic_energy(v - coarse);
    tr.kinetic[i] = kinetic_energy(coarse);
    tr.E[i] = kinetic_energy(v);
    c.trajectory.snapshots[i] = std::move(coarse);
  });
  tr.xi_left = tr.xi;
  return c;
}

double total_variation(std::span<const double> y) {
  if (y.empty()) throw UsageError("total variation of an empty series");
  double tv = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) tv += std::abs(y[i] - y[i - 1]);
  return tv;
}

EnergyTrace cadlag_representative(const EnergyTrace& trace, bool unforced, double jump_tol) {
  EnergyTrace out = trace;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double jump = out.xi[i] - out.xi_left[i];
    if (std::abs(jump) <= jump_tol) continue;
    if (unforced && jump > 0) {
      std::ostringstream os;
      os << "positive energy jump " << jump << " at t=" << out.times[i]
         << " in an unforced trace";
      throw IntegrityError(os.str());
    }
    out.E[i] = out.kinetic[i] + out.xi[i];
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> interval_pairs(std::size_t n, std::size_t nodes) {
  std::set<std::size_t> idx;
  if (n == 0) return {};
  nodes = std::max<std::size_t>(2, std::min(nodes, n));
  for (std::size_t k = 0; k < nodes; ++k) idx.insert(k * (n - 1) / (nodes - 1));
  const std::vector<std::size_t> v(idx.begin(), idx.end());
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = a + 1; b < v.size(); ++b) out.emplace_back(v[a], v[b]);
  }
  return out;
}

EnergyRates energy_rates(const CandidateSolution& c, double nu, const TestFieldPtr& forcing) {
  const std::size_t n = c.size();
  EnergyRates r{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  parallel_for(n, [&](std::size_t i) {
    const SpectralField& v = c.trajectory.snapshots[i];
    r.dissipation[i] = nu * grad_inner(v, v);
    if (forcing) r.work[i] = inner(forcing->sample(v.grid(), c.trace.times[i]), v);
  });
  return r;
}

nlohmann::json EnergyInequalityRecord::to_json() const {
  return {{"s", s},
          {"t", t},
          {"kinetic_s", kinetic_s},
          {"kinetic_t", kinetic_t},
          {"int_dissipation", int_dissipation},
          {"int_work", int_work},
          {"residual", residual},
          {"tol", tol},
          {"verdict", pass ? "pass" : "fail"}};
}

EnergyInequalityReport strong_energy_inequality_check(
    const CandidateSolution& c, double nu, const TestFieldPtr& forcing,
    std::vector<std::pair<std::size_t, std::size_t>> pairs, const TolerancePolicy& policy) {
  const std::size_t n = c.size();
  if (pairs.empty()) pairs = interval_pairs(n, n);
  const EnergyRates rates = energy_rates(c, nu, forcing);
  const auto& t = c.trace.times;
  double h = 0.0;
  for (std::size_t i = 1; i < n; ++i) h = std::max(h, t[i] - t[i - 1]);
  const double tol = policy.scale * policy.a * h * h;

  EnergyInequalityReport rep;
  for (auto [is, it] : pairs) {
    if (!(is < it && it < n)) throw UsageError("energy inequality needs s < t on the grid");
    EnergyInequalityRecord r;
    r.s = t[is];
    r.t = t[it];
    r.kinetic_s = c.trace.kinetic[is];
    r.kinetic_t = c.trace.kinetic[it];
    r.int_dissipation = trapezoid(t, rates.dissipation, is, it);
    r.int_work = trapezoid(t, rates.work, is, it);
    r.residual = r.kinetic_t - r.kinetic_s + r.int_dissipation - r.int_work;
    r.tol = tol;
    r.pass = r.residual <= tol;
    rep.pass = rep.pass && r.pass;
    rep.max_residual = rep.records.empty() ? r.residual : std::max(rep.max_residual, r.residual);
    rep.records.push_back(r);
  }
  return rep;
}

nlohmann::json WeakResidual::to_json() const {
  return {{"field_id", field_id},
          {"profile_id", profile_id},
          {"residual", residual},
          {"phi_norm", phi_norm}};
}

WeakResidual weak_residual(const CandidateSolution& c, const TestFieldPtr& field,
                           const TimeProfile& psi, double nu, const TestFieldPtr& forcing) {
  if (!field) throw UsageError("missing test field");
  const GridSpec& g = c.grid();
  const auto& t = c.trace.times;
  WeakResidual out;
  out.field_id = field->id();
  out.profile_id = psi.id();
  if (field->dim() != g.dim) throw UsageError("test field dimension does not match the grid");
  if (psi.b() > t.back() + 1e-12 && !psi.is_zero()) {
    throw UsageError("time profile must vanish at the final time");
  }
  const SpectralField phi0 = field->sample(g, t.front());
  const double scale = std::max(1.0, compute_norm(phi0, NormKind::kC0));
  if (max_pointwise_divergence(*field, g, t.front()) > 1e-10 * scale) {
    throw UsageError("test field '" + field->id() + "' is not divergence-free");
  }
  out.phi_norm = psi.sup() * (std::sqrt(2.0 * kinetic_energy(phi0)) +
                              compute_norm(phi0, NormKind::kH1Semi));
  if (psi.is_zero()) return out;

  const std::size_t n = c.size();
  std::vector<double> y(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const double p = psi.value(t[i]), dp = psi.derivative(t[i]);
    if (p == 0.0 && dp == 0.0) return;
    const SpectralField& v = c.trajectory.snapshots[i];
    const SpectralField s = field->sample(g, t[i]);
    double val = -dp * inner(v, s);
    if (field->time_dependent()) val -= p * inner(v, field->sample_time_derivative(g, t[i]));
    double space = nu * grad_inner(v, s) - trilinear(v, s, v);
    if (forcing) space -= inner(forcing->sample(g, t[i]), s);
    y[i] = val + p * space;
  });
  out.residual = trapezoid(t, y, 0, n - 1);
  const double p0 = psi.value(t.front());
  if (p0 != 0.0) out.residual -= p0 * inner(c.trajectory.snapshots.front(), phi0);
  return out;
}

nlohmann::json DefectBallReport::to_json() const {
  return {{"field_id", field_id}, {"profile_id", profile_id}, {"K_spec", K_spec},
          {"lhs", lhs},           {"rhs", rhs},               {"tol", tol},
          {"verdict", pass ? "pass" : "fail"}};
}

DefectBallReport defect_ball_check(const CandidateSolution& c, const TestFieldPtr& field,
                                   const TimeProfile& psi, const RegularityWeight& K, double nu,
                                   const TestFieldPtr& forcing, double weak_tol) {
  if (!K.rank_one_homogeneous()) {
    throw PreconditionError("defect ball needs a weight homogeneous of rank one");
  }
  const WeakResidual wr = weak_residual(c, field, psi, nu, forcing);
  DefectBallReport rep;
  rep.field_id = wr.field_id;
  rep.profile_id = wr.profile_id;
  rep.K_spec = K.spec();
  rep.lhs = std::abs(wr.residual);
  const auto& t = c.trace.times;
  const std::size_t n = c.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::abs(psi.value(t[i]));
    if (p == 0.0 || c.trace.xi[i] == 0.0) continue;
    y[i] = p * K(*field, c.grid(), t[i]) * c.trace.xi[i];
  }
  rep.rhs = n > 1 ? trapezoid(t, y, 0, n - 1) : 0.0;
  rep.tol = weak_tol * wr.phi_norm;
  rep.pass = rep.lhs <= rep.rhs + rep.tol;
  return rep;
}

std::vector<TestFieldPtr> relative_energy_catalogue(const CandidateSolution& c, double nu) {
  const GridSpec& g = c.grid();
  std::vector<TestFieldPtr> out;
  out.push_back(make_zero_field(g.dim));
  if (g.dim == 2) {
    out.push_back(make_taylor_green(nu));
    out.push_back(make_single_mode(2, {1, 2, 0}, {2.0, -1.0, 0.0}));
  } else {
    out.push_back(make_single_mode(3, {1, 1, 0}, {1.0, -1.0, 0.5}));
    out.push_back(make_single_mode(3, {0, 1, 2}, {1.0, 0.0, 0.0}));
  }
  out.push_back(make_constant_field(g.dim, {0.3, -0.2, 0.1}));
  out.push_back(make_random_static(g, std::min(3, c.trajectory.config.cutoff), 1.0, 11));
  out.push_back(std::make_shared<TrajectoryField>("projection(" + c.id + ")", c.trace.times,
                                                  c.trajectory.snapshots));
  return out;
}

std::vector<TestFieldPtr> spatial_catalogue(const GridSpec& grid, int cutoff) {
  std::vector<TestFieldPtr> out;
  const int d = grid.dim;
  auto add = [&](std::array<int, 3> k, Vec3 a) {
    if (std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])}) <= cutoff) {
      out.push_back(make_single_mode(d, k, a));
    }
  };
  add({1, 0, 0}, {0.0, 1.0, d == 3 ? 0.5 : 0.0});
  add({1, 1, 0}, {1.0, -1.0, 0.0});
  add({2, -1, 0}, {1.0, 2.0, 0.0});
  add({0, 3, d == 3 ? 1 : 0}, {1.0, 0.0, 0.0});
  if (d == 2 && cutoff >= 1) out.push_back(make_taylor_green(0.0));
  out.push_back(make_random_static(grid, std::min(cutoff, 4), 1.0, 23));
  return out;
}

std::vector<TimeProfile> profile_catalogue(double T) {
  return {TimeProfile::bump(0.5 * T, 0.4 * T), TimeProfile::bump(0.3 * T, 0.2 * T),
          TimeProfile::bump(0.7 * T, 0.25 * T), TimeProfile(0.1 * T, 0.9 * T, 0.2 * T)};
}

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string trace_csv(const CandidateSolution& c, double nu, const TestFieldPtr& forcing) {
  const EnergyRates r = energy_rates(c, nu, forcing);
  std::string out = "t,E,kinetic,xi,dissipation_rate,work_rate\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    out += g17(c.trace.times[i]) + "," + g17(c.trace.E[i]) + "," + g17(c.trace.kinetic[i]) +
           "," + g17(c.trace.xi[i]) + "," + g17(r.dissipation[i]) + "," + g17(r.work[i]) + "\n";
  }
  return out;
}

void save_candidate(const std::filesystem::path& dir, const CandidateSolution& c) {
  c.check_invariants();
  save_trajectory(dir, c.trajectory);
  const TestFieldPtr f = make_forcing(c.trajectory.config);
  {
    std::ofstream os(dir / "trace.csv", std::ios::binary);
    os << trace_csv(c, c.trajectory.config.nu, f);
    if (!os) throw Error(ErrorCode::kInternal, "cannot write " + (dir / "trace.csv").string());
  }
  nlohmann::json j = {{"id", c.id}, {"provenance", provenance_name(c.provenance)}};
  j["jumps"] = nlohmann::json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.trace.xi_left[i] != c.trace.xi[i]) {
      j["jumps"].push_back({{"index", i}, {"xi_left", c.trace.xi_left[i]}});
    }
  }
  std::ofstream os(dir / "candidate.json", std::ios::binary);
  os << j.dump(2) << "\n";
  if (!os) throw Error(ErrorCode::kInternal, "cannot write " + (dir / "candidate.json").string());
}

CandidateSolution load_candidate(const std::filesystem::path& dir) {
  CandidateSolution c;
  c.trajectory = load_trajectory(dir);
  const auto meta = dir / "candidate.json";
  const auto csv = dir / "trace.csv";
  if (!std::filesystem::exists(meta) || !std::filesystem::exists(csv)) {
    c = build_energy_trace(c.trajectory, dir.filename().string());
    return c;
  }
  try {
    std::ifstream is(meta);
    const nlohmann::json j = nlohmann::json::parse(is);
    c.id = j.at("id").get<std::string>();
    c.provenance = parse_provenance(j.at("provenance").get<std::string>());
    std::vector<double> xi;
    std::ifstream cs(csv);
    std::string line;
    std::getline(cs, line);
    if (line != "t,E,kinetic,xi,dissipation_rate,work_rate") {
      throw FormatError("unexpected header");
    }
    std::vector<double> E;
    while (std::getline(cs, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string cell;
      std::vector<double> row;
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
      if (row.size() != 6) throw FormatError("row with " + std::to_string(row.size()) + " cells");
      xi.push_back(row[3]);
      E.push_back(row[1]);
    }
    if (xi.size() != c.trajectory.size()) throw FormatError("row count differs from snapshots");
    c.trace = make_trace(c.trajectory, xi);
    for (const auto& jump : j.at("jumps")) {
      c.trace.xi_left.at(jump.at("index").get<std::size_t>()) = jump.at("xi_left").get<double>();
    }
    for (std::size_t i = 0; i < E.size(); ++i) {
      // kinetic is recomputed from the snapshots; the stored E must agree
      if (std::abs(E[i] - c.trace.E[i]) > 1e-12 * std::max(1.0, std::abs(E[i]))) {
        throw FormatError("E column disagrees with kinetic + xi at row " + std::to_string(i));
      }
    }
    c.trace.E = std::move(E);
  } catch (const FormatError& e) {
    throw FormatError(csv.string() + ": " + e.what());
  } catch (const std::exception& e) {
    throw FormatError(meta.string() + ": " + e.what());
  }
  c.check_invariants();
  return c;
}

}  // namespace evlab
