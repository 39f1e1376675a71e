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


#include "evlab/select/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "evlab/certify/certificates.hpp"
#include "evlab/common/error.hpp"
#include "evlab/energy/quadrature.hpp"

namespace evlab {
namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool same_times(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  const double scale = std::max(1.0, a.empty() ? 1.0 : std::abs(a.back()));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-12 * scale) return false;
  return true;
}

std::size_t time_index(const std::vector<double>& t, double t0, const char* what) {
  const double scale = std::max(1.0, std::abs(t.back()));
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::abs(t[i] - t0) <= 1e-9 * scale) return i;
  throw UsageError(std::string(what) + ": time " + fmt(t0) + " is not a snapshot time");
}

double field_distance(const SpectralField& a, const SpectralField& b) {
  return std::sqrt(2.0 * kinetic_energy(a - b));
}

}  // namespace

void require_compatible(const CandidateSolution& a, const CandidateSolution& b) {
  if (a.size() == 0 || b.size() == 0) throw UsageError("empty candidate");
  if (!(a.grid() == b.grid())) throw UsageError("candidates live on different grids");
  if (a.trajectory.config.nu != b.trajectory.config.nu)
    throw UsageError("candidates have different viscosities");
  if (!same_times(a.times(), b.times()))
    throw UsageError("candidates " + a.id + " and " + b.id + " use different time grids");
}

void CandidateSet::validate() const {
  if (candidates.empty()) throw UsageError("candidate set is empty");
  const auto& c0 = candidates.front();
  const double e0 = c0.trace.kinetic.front();
  for (const auto& c : candidates) {
    require_compatible(c0, c);
    if (std::abs(c.trace.kinetic.front() - e0) > 1e-10 * std::max(1.0, e0))
      throw UsageError("candidate " + c.id + " starts from different initial energy");
  }
}

CandidateSolution convex_combine(const CandidateSolution& c1, const CandidateSolution& c2,
                                 double lam) {
  if (!(lam >= 0.0 && lam <= 1.0)) throw UsageError("convex weight must lie in [0, 1]");
  require_compatible(c1, c2);
  if (lam == 0.0) return c2;
  if (lam == 1.0) return c1;
  CandidateSolution out;
  out.id = "comb(" + c1.id + "," + c2.id + "," + fmt(lam) + ")";
  out.provenance = Provenance::kConvexCombination;
  out.trajectory.config = c1.trajectory.config;
  out.trajectory.config.cutoff = std::max(c1.trajectory.config.cutoff, c2.trajectory.config.cutoff);
  out.trajectory.times = c1.times();
  const std::size_t n = c1.size();
  out.trajectory.snapshots.resize(n);
  auto& tr = out.trace;
  tr.times = c1.times();
  tr.E.resize(n);
  tr.kinetic.resize(n);
  tr.xi.resize(n);
  tr.xi_left.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    SpectralField v = lam * c1.trajectory.snapshots[i];
    v.axpy(1.0 - lam, c2.trajectory.snapshots[i]);
    const double kin = kinetic_energy(v);
    const double E = lam * c1.trace.E[i] + (1.0 - lam) * c2.trace.E[i];
    const double El = lam * c1.trace.E_left(i) + (1.0 - lam) * c2.trace.E_left(i);
    tr.kinetic[i] = kin;
    tr.xi[i] = E - kin;
    tr.xi_left[i] = El - kin;
    tr.E[i] = kin + tr.xi[i];
    out.trajectory.snapshots[i] = std::move(v);
  }
  return out;
}

CandidateSolution concatenate(const CandidateSolution& c1, const CandidateSolution& c2,
                              double t0) {
  if (c1.size() == 0 || c2.size() == 0) throw UsageError("empty candidate");
  if (!(c1.grid() == c2.grid())) throw UsageError("candidates live on different grids");
  const std::size_t i0 = time_index(c1.times(), t0, "concatenate");
  const std::size_t tail = c1.size() - i0;
  if (c2.size() != tail)
    throw UsageError("second candidate must cover [t0, T] on the first candidate's grid");
  for (std::size_t j = 0; j < tail; ++j)
    if (std::abs(c2.times()[j] - c1.times()[i0 + j]) > 1e-9 * std::max(1.0, c1.times().back()))
      throw UsageError("second candidate must cover [t0, T] on the first candidate's grid");

  const auto& v1 = c1.trajectory.snapshots[i0];
  const auto& v2 = c2.trajectory.snapshots.front();
  const double mismatch = field_distance(v1, v2);
  const double ref = std::max(1.0, std::sqrt(2.0 * kinetic_energy(v1)));
  if (mismatch > 1e-10 * ref)
    throw PreconditionError("states differ at t0 = " + fmt(t0) + " by " + fmt(mismatch));
  const double xi1 = c1.trace.xi[i0];
  const double xi2 = c2.trace.xi.front();
  if (xi2 > xi1 + 1e-12 * std::max(1.0, c1.trace.E[i0]))
    throw PreconditionError("defect would increase at t0 = " + fmt(t0) + ": " + fmt(xi1) +
                            " -> " + fmt(xi2));

  CandidateSolution out;
  out.id = "concat(" + c1.id + "," + c2.id + "@" + fmt(t0) + ")";
  out.provenance = Provenance::kConcatenation;
  out.trajectory.config = c1.trajectory.config;
  out.trajectory.config.cutoff = std::max(c1.trajectory.config.cutoff, c2.trajectory.config.cutoff);
  out.trajectory.times = c1.times();
  out.trace.times = c1.times();
  for (std::size_t i = 0; i < c1.size(); ++i) {
    const bool second = i >= i0;
    const auto& src = second ? c2 : c1;
    const std::size_t k = second ? i - i0 : i;
    out.trajectory.snapshots.push_back(src.trajectory.snapshots[k]);
    out.trace.kinetic.push_back(src.trace.kinetic[k]);
    out.trace.xi.push_back(src.trace.xi[k]);
    out.trace.E.push_back(src.trace.E[k]);
    out.trace.xi_left.push_back(i == i0 ? c1.trace.xi_left[i0] : src.trace.xi_left[k]);
  }
  return out;
}

CandidateSolution restrict_to(const CandidateSolution& c, double t0) {
  const std::size_t i0 = time_index(c.times(), t0, "restrict");
  CandidateSolution out;
  out.id = c.id + "|[" + fmt(c.times()[i0]) + ",T]";
  out.provenance = c.provenance;
  out.trajectory.config = c.trajectory.config;
  auto cut = [i0](const auto& v) { return std::vector(v.begin() + static_cast<long>(i0), v.end()); };
  out.trajectory.times = cut(c.trajectory.times);
  out.trajectory.snapshots = cut(c.trajectory.snapshots);
  out.trace.times = cut(c.trace.times);
  out.trace.E = cut(c.trace.E);
  out.trace.kinetic = cut(c.trace.kinetic);
  out.trace.xi = cut(c.trace.xi);
  out.trace.xi_left = cut(c.trace.xi_left);
  return out;
}

SolverConfig resolved_config(const CandidateSolution& c) {
  SolverConfig cfg = c.trajectory.config;
  cfg.grid = c.grid();
  cfg.cutoff = c.grid().dealias_cutoff();
  cfg.t_final = c.times().back();
  return cfg;
}

CandidateSolution restart_refinement(const CandidateSolution& c, double t0,
                                     const SolverConfig& solver_config) {
  const std::size_t i0 = time_index(c.times(), t0, "restart");
  const double ts = c.times()[i0];
  SolverConfig cfg = solver_config;
  cfg.t_final = c.times().back();
  Trajectory run = (i0 + 1 == c.size()) ? Trajectory{cfg, {ts}, {c.trajectory.snapshots[i0]}}
                                         : integrate_from(cfg, c.trajectory.snapshots[i0], ts);
  if (run.size() != c.size() - i0)
    throw UsageError("restart snapshot grid does not match the candidate's grid");
  for (std::size_t j = 0; j < run.size(); ++j) run.times[j] = c.times()[i0 + j];
  CandidateSolution fresh = build_energy_trace(run, "restart(" + fmt(ts) + ")");
  CandidateSolution out = concatenate(c, fresh, ts);
  out.id = "refine(" + c.id + "@" + fmt(ts) + ")";
  return out;
}

RefinementResult refine_to_fixed_point(const CandidateSolution& c, double jump_tol,
                                       std::optional<SolverConfig> solver_config) {
  const SolverConfig cfg = solver_config ? *solver_config : resolved_config(c);
  RefinementResult res{c, {}};
  for (std::size_t iter = 0; iter <= c.size(); ++iter) {
    const auto& xi = res.candidate.trace.xi;
    auto it = std::find_if(xi.begin(), xi.end(), [&](double x) { return x > jump_tol; });
    if (it == xi.end()) {
      if (!res.steps.empty()) res.candidate.id = "refine(" + c.id + ")";
      return res;
    }
    const double t0 = res.candidate.times()[static_cast<std::size_t>(it - xi.begin())];
    const double removed = *it;
    res.candidate = restart_refinement(res.candidate, t0, cfg);
    res.steps.push_back({t0, removed});
  }
  throw IntegrityError("refinement did not reach a fixed point for " + c.id);
}

double l2l2_distance(const CandidateSolution& a, const CandidateSolution& b) {
  require_compatible(a, b);
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = field_distance(a.trajectory.snapshots[i], b.trajectory.snapshots[i]);
    d[i] = x * x;
  }
  return std::sqrt(std::max(0.0, trapezoid(a.times(), d, 0, a.size() - 1)));
}

std::string_view outcome_name(SelectionResult::Outcome o) {
  switch (o) {
    case SelectionResult::Outcome::kSelected: return "selected";
    case SelectionResult::Outcome::kIncomparable: return "incomparable";
    case SelectionResult::Outcome::kConvexityContradiction: return "convexity-contradiction";
  }
  return "selected";
}

SelectionResult select_minimal(const CandidateSet& set, double tie_tol) {
  set.validate();
  const auto& cs = set.candidates;
  const std::size_t m = cs.size();
  const std::size_t n = cs.front().size();
  const double tie = tie_tol * std::max(1.0, cs.front().trace.E.front());

  // le[a][b]: E_a <= E_b + tie everywhere
  std::vector<std::vector<char>> le(m, std::vector<char>(m, 1));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t i = 0; i < n && le[a][b]; ++i)
        if (cs[a].trace.E[i] > cs[b].trace.E[i] + tie) le[a][b] = 0;

  std::vector<std::size_t> minimal;
  for (std::size_t a = 0; a < m; ++a) {
    bool all = true;
    for (std::size_t b = 0; b < m; ++b) all = all && le[a][b];
    if (all) minimal.push_back(a);
  }

  SelectionResult res;
  if (minimal.empty()) {
    res.outcome = SelectionResult::Outcome::kIncomparable;
    const auto& t = cs.front().times();
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) {
        if (le[a][b] || le[b][a]) continue;
        int last = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = cs[a].trace.E[i] - cs[b].trace.E[i];
          const int sgn = d > tie ? 1 : (d < -tie ? -1 : 0);
          if (sgn != 0 && last != 0 && sgn != last) res.crossing_times.push_back(t[i]);
          if (sgn != 0) last = sgn;
        }
      }
    std::sort(res.crossing_times.begin(), res.crossing_times.end());
    res.crossing_times.erase(std::unique(res.crossing_times.begin(), res.crossing_times.end()),
                             res.crossing_times.end());
    return res;
  }

  std::sort(minimal.begin(), minimal.end(),
            [&](std::size_t x, std::size_t y) { return cs[x].id < cs[y].id; });
  for (std::size_t x = 0; x < minimal.size(); ++x)
    for (std::size_t y = x + 1; y < minimal.size(); ++y) {
      const double d = l2l2_distance(cs[minimal[x]], cs[minimal[y]]);
      if (d > 1e-8) {
        res.outcome = SelectionResult::Outcome::kConvexityContradiction;
        res.tied = {minimal[x], minimal[y]};
        res.tied_distance = d;
        return res;
      }
    }
  res.selected = minimal.front();
  return res;
}

nlohmann::json SelectionResult::to_json(const CandidateSet& set) const {
  nlohmann::json j;
  j["outcome"] = std::string(outcome_name(outcome));
  switch (outcome) {
    case Outcome::kSelected:
      j["selected_id"] = set.candidates.at(selected).id;
      break;
    case Outcome::kIncomparable:
      j["incomparable"] = crossing_times;
      break;
    case Outcome::kConvexityContradiction: {
      nlohmann::json ids = nlohmann::json::array();
      for (auto k : tied) ids.push_back(set.candidates.at(k).id);
      j["tied_ids"] = ids;
      j["tied_distance"] = tied_distance;
      break;
    }
  }
  return j;
}

nlohmann::json SemiflowReport::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records)
    recs.push_back({{"test_field_id", r.test_field_id},
                    {"s", r.s},
                    {"t", r.t},
                    {"parent_verdict", r.parent_pass ? "pass" : "fail"},
                    {"restricted_verdict", r.restricted_pass ? "pass" : "fail"},
                    {"parent_residual", r.parent_residual},
                    {"restricted_residual", r.restricted_residual}});
  return {{"t0", t0}, {"all_pass", all_pass}, {"inherited", inherited}, {"records", recs}};
}

SemiflowReport semiflow_check(const CandidateSolution& c, double t0,
                              const std::vector<TestFieldPtr>& fields, const RegularityWeight& K,
                              double nu, const TestFieldPtr& forcing, std::size_t nodes,
                              const TolerancePolicy& policy) {
  const std::size_t i0 = time_index(c.times(), t0, "semiflow");
  const CandidateSolution r = restrict_to(c, t0);
  SemiflowReport rep;
  rep.t0 = c.times()[i0];
  if (r.size() < 2) return rep;
  const auto pairs = interval_pairs(r.size(), nodes);
  for (const auto& f : fields) {
    RelativeEnergyProfile parent(c, f, K, nu, forcing, policy);
    RelativeEnergyProfile child(r, f, K, nu, forcing, policy);
    for (const auto& [a, b] : pairs) {
      const auto pr = parent.interval(a + i0, b + i0);
      const auto cr = child.interval(a, b);
      SemiflowRecord rec{f->id(), cr.s, cr.t, pr.pass, cr.pass, pr.residual, cr.residual};
      rep.all_pass = rep.all_pass && cr.pass;
      rep.inherited = rep.inherited && (pr.pass == cr.pass);
      rep.records.push_back(std::move(rec));
    }
  }
  return rep;
}

}  // namespace evlab
