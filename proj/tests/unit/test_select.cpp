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


#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "evlab/certify/certificates.hpp"
#include "evlab/common/error.hpp"
#include "evlab/select/selection.hpp"

using namespace evlab;
using evlab::testing::random_config;
using evlab::testing::taylor_green_config;

namespace {

const CandidateSolution& resolved() {
  static const CandidateSolution c = build_energy_trace(integrate(random_config(0.02, 0.5)));
  return c;
}

const CandidateSolution& coarse() {
  static const CandidateSolution c = synthesize_defect_candidate(resolved().trajectory, 6);
  return c;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b,
                    std::size_t from = 0) {
  double m = 0.0;
  for (std::size_t i = from; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

CandidateSolution negated(const CandidateSolution& c) {
  CandidateSolution out = c;
  out.id = "neg(" + c.id + ")";
  for (auto& v : out.trajectory.snapshots) v *= -1.0;
  return out;
}

}  // namespace

TEST_CASE("convex combination") {
  const auto& c1 = resolved();
  const auto& c2 = coarse();
  REQUIRE(c2.trace.xi.front() == 0.0);
  REQUIRE(c2.xi_max() > 1e-6);

  SUBCASE("endpoints") {
    const auto a = convex_combine(c1, c2, 0.0);
    CHECK(a.trace.E == c2.trace.E);
    CHECK(a.trace.xi == c2.trace.xi);
    const auto b = convex_combine(c1, c2, 1.0);
    CHECK(b.trace.xi == c1.trace.xi);
    CHECK(b.trace.kinetic == c1.trace.kinetic);
  }
  SUBCASE("degenerate") {
    for (double lam : {0.1, 0.5, 0.9}) {
      const auto a = convex_combine(c1, c1, lam);
      CHECK(max_abs_diff(a.trace.E, c1.trace.E) < 1e-13);
      CHECK(a.xi_max() < 1e-13);
      CHECK(l2l2_distance(a, c1) < 1e-13);
    }
  }
  SUBCASE("strict convexity gap") {
    for (double lam : {0.25, 0.5, 0.8}) {
      const auto m = convex_combine(c1, c2, lam);
      CHECK(m.provenance == Provenance::kConvexCombination);
      CHECK_NOTHROW(m.check_invariants());
      for (std::size_t i = 0; i < m.size(); i += 7) {
        const double gap = lam * (1 - lam) *
                           kinetic_energy(c1.trajectory.snapshots[i] - c2.trajectory.snapshots[i]);
        const double base = lam * c1.trace.xi[i] + (1 - lam) * c2.trace.xi[i];
        CHECK(std::abs(m.trace.xi[i] - base - gap) < 1e-12 * std::max(1.0, m.trace.E[i]));
        CHECK(m.trace.xi[i] >= std::max(0.0, base) - 1e-12);
      }
    }
    const auto h = convex_combine(c1, c2, 0.5);
    const auto& last = h.size() - 1;
    const double d = 2.0 * kinetic_energy(c1.trajectory.snapshots[last] - c2.trajectory.snapshots[last]);
    // c1 has no defect: xi = xi2 / 2 + |v1 - v2|^2 / 8
    CHECK(h.trace.xi[last] == doctest::Approx(0.5 * c2.trace.xi[last] + d / 8).epsilon(1e-10));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(convex_combine(c1, c2, -0.1), UsageError);
    CHECK_THROWS_AS(convex_combine(c1, c2, 1.5), UsageError);
    const auto other = build_energy_trace(integrate(random_config(0.02, 0.25)));
    CHECK_THROWS_AS(convex_combine(c1, other, 0.5), UsageError);
  }
}

TEST_CASE("concatenation and restriction") {
  const auto& c = coarse();
  const double t0 = c.times()[100];

  SUBCASE("self concatenation") {
    const auto r = restrict_to(c, t0);
    CHECK(r.size() == c.size() - 100);
    const auto j = concatenate(c, r, t0);
    CHECK(j.trace.E == c.trace.E);
    CHECK(j.trace.xi == c.trace.xi);
    CHECK(j.trace.xi_left == c.trace.xi_left);
    CHECK(l2l2_distance(j, c) == 0.0);
  }
  SUBCASE("fresh run drops the defect") {
    SolverConfig cfg = resolved_config(c);
    const auto fresh = build_energy_trace(integrate_from(cfg, c.trajectory.snapshots[100], t0));
    CandidateSolution aligned = fresh;
    aligned.trace.times = restrict_to(c, t0).times();
    aligned.trajectory.times = aligned.trace.times;
    const auto j = concatenate(c, aligned, t0);
    CHECK(j.provenance == Provenance::kConcatenation);
    CHECK(j.trace.xi_left[100] == c.trace.xi[100]);
    CHECK(j.trace.xi[100] == 0.0);
    CHECK(j.trace.E_left(100) - j.trace.E[100] == doctest::Approx(c.trace.xi[100]).epsilon(1e-12));
    CHECK(max_abs_diff(j.trace.E, c.trace.E, 0) >= c.trace.xi[100] * (1 - 1e-9));
    CHECK(std::equal(j.trace.E.begin(), j.trace.E.begin() + 100, c.trace.E.begin()));
  }
  SUBCASE("preconditions") {
    auto r = restrict_to(c, t0);
    r.trajectory.snapshots.front() *= 1.001;
    CHECK_THROWS_AS(concatenate(c, r, t0), PreconditionError);
    auto up = restrict_to(c, t0);
    up.trace.xi.front() += 1e-3;
    up.trace.E.front() += 1e-3;
    CHECK_THROWS_AS(concatenate(c, up, t0), PreconditionError);
    CHECK_THROWS_AS(concatenate(c, restrict_to(c, t0), t0 + 1e-4), UsageError);
    CHECK_THROWS_AS(restrict_to(c, 7.0), UsageError);
  }
}

TEST_CASE("concatenation keeps the interval inequality") {
  const auto& c = coarse();
  const std::size_t k = 150;
  const double t0 = c.times()[k];
  const auto j = restart_refinement(c, t0, resolved_config(c));
  const auto tail = restrict_to(j, t0);
  const double nu = c.trajectory.config.nu;
  const RegularityWeight K = calibrated_serrin(2, 4.0, nu, 60, 3);
  int straddling = 0;
  for (const auto& f : relative_energy_catalogue(resolved(), nu)) {
    RelativeEnergyProfile pc(c, f, K, nu, nullptr);
    RelativeEnergyProfile pt(tail, f, K, nu, nullptr);
    RelativeEnergyProfile pj(j, f, K, nu, nullptr);
    for (std::size_t s : {0ul, 40ul, 120ul})
      for (std::size_t t : {200ul, 320ul, 500ul}) {
        const auto rc = pc.interval(s, k);
        const auto rt = pt.interval(0, t - k);
        const auto rj = pj.interval(s, t);
        // residuals add across the junction
        const double mag = 1.0 + rj.R_s + rj.R_t + std::abs(rj.int_W) + std::abs(rj.int_A) +
                           std::abs(rj.int_K_Rxi);
        CHECK(std::abs(rj.residual - rc.residual - rt.residual) < 1e-12 * mag);
        if (!(rc.pass && rt.pass)) continue;
        ++straddling;
        CHECK(rj.residual <= rc.tol + rt.tol);
      }
  }
  CHECK(straddling > 0);
}

TEST_CASE("restart refinement") {
  SUBCASE("no defect: only re-integration noise") {
    const auto& c = resolved();
    for (std::size_t k : {0ul, 125ul, 400ul}) {
      const auto r = restart_refinement(c, c.times()[k], resolved_config(c));
      CHECK(max_abs_diff(r.trace.E, c.trace.E) < 1e-10);
      CHECK(r.xi_max() == 0.0);
    }
    const auto fp = refine_to_fixed_point(c);
    CHECK(fp.steps.empty());
    CHECK(fp.candidate.id == c.id);
  }
  SUBCASE("defect drops by exactly xi") {
    const auto& c = coarse();
    for (std::size_t k : {50ul, 250ul}) {
      const auto r = restart_refinement(c, c.times()[k], resolved_config(c));
      CHECK(c.trace.E[k] - r.trace.E[k] == doctest::Approx(c.trace.xi[k]).epsilon(1e-12));
      CHECK(r.trace.E[k] == doctest::Approx(kinetic_energy(c.trajectory.snapshots[k])).epsilon(1e-14));
      for (std::size_t i = k; i < c.size(); ++i) CHECK(r.trace.E[i] <= c.trace.E[i] + 1e-10);
      CHECK_NOTHROW(r.check_invariants());
    }
  }
  SUBCASE("full restart at t = 0") {
    const auto& c = coarse();
    const auto r = restart_refinement(c, 0.0, resolved_config(c));
    CHECK(r.xi_max() == 0.0);
    CHECK(max_abs_diff(r.trace.E, resolved().trace.E) < 1e-10);
    CHECK(l2l2_distance(r, resolved()) < 1e-10);
  }
  SUBCASE("fixed point") {
    const auto fp = refine_to_fixed_point(coarse());
    REQUIRE(!fp.steps.empty());
    CHECK(fp.candidate.xi_max() < 1e-10);
    CHECK(fp.steps.front().xi_removed > 1e-10);
    const double nu = coarse().trajectory.config.nu;
    double worst = 0.0;
    for (const auto& phi : spatial_catalogue(coarse().grid(), coarse().grid().dealias_cutoff()))
      for (const auto& psi : profile_catalogue(coarse().times().back())) {
        const auto w = weak_residual(fp.candidate, phi, psi, nu, nullptr);
        worst = std::max(worst, std::abs(w.residual) / w.phi_norm);
      }
    MESSAGE("refined weak residual / |phi| = " << worst);
    CHECK(worst < 1e-6);
  }
  CHECK_THROWS_AS(restart_refinement(coarse(), 0.0123456, resolved_config(coarse())), UsageError);
}

TEST_CASE("minimal selection") {
  SUBCASE("singleton") {
    const CandidateSet set{{resolved()}};
    const auto r = select_minimal(set);
    CHECK(r.outcome == SelectionResult::Outcome::kSelected);
    CHECK(r.selected == 0);
    CHECK_THROWS_AS(select_minimal(CandidateSet{}), UsageError);
  }
  SUBCASE("resolved and coarse after refinement") {
    const auto a = refine_to_fixed_point(resolved()).candidate;
    const auto b = refine_to_fixed_point(coarse()).candidate;
    const CandidateSet set{{a, b}};
    const auto r = select_minimal(set);
    REQUIRE(r.outcome == SelectionResult::Outcome::kSelected);
    CHECK(set.candidates[r.selected].xi_max() < 1e-10);
    const CandidateSet rev{{b, a}};
    const auto r2 = select_minimal(rev);
    REQUIRE(r2.outcome == SelectionResult::Outcome::kSelected);
    CHECK(rev.candidates[r2.selected].id == set.candidates[r.selected].id);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(set.candidates[r.selected].trace.E[i] <= std::min(a.trace.E[i], b.trace.E[i]) + 1e-10);
  }
  SUBCASE("convex combination is refined and selected") {
    const auto m = convex_combine(resolved(), coarse(), 0.5);
    CHECK(m.xi_max() > 1e-8);
    const auto fm = refine_to_fixed_point(m);
    CHECK(!fm.steps.empty());
    CHECK(fm.candidate.xi_max() < 1e-10);
    const CandidateSet set{{resolved(), fm.candidate}};
    const auto r = select_minimal(set);
    REQUIRE(r.outcome == SelectionResult::Outcome::kSelected);
    CHECK(r.selected == 1);
    const auto last = m.size() - 1;
    CHECK(fm.candidate.trace.E[last] < resolved().trace.E[last]);
  }
  SUBCASE("equal energies with different fields") {
    const CandidateSet set{{resolved(), negated(resolved())}};
    const auto r = select_minimal(set);
    CHECK(r.outcome == SelectionResult::Outcome::kConvexityContradiction);
    CHECK(r.tied.size() == 2);
    CHECK(r.tied_distance > 1e-8);
    CHECK(r.to_json(set)["outcome"] == "convexity-contradiction");
  }
  SUBCASE("identical candidates resolve to the smallest id") {
    CandidateSolution twin = resolved();
    twin.id = "a-twin";
    const CandidateSet set{{resolved(), twin}};
    const auto r = select_minimal(set);
    REQUIRE(r.outcome == SelectionResult::Outcome::kSelected);
    CHECK(set.candidates[r.selected].id == "a-twin");
  }
  SUBCASE("crossing energy profiles") {
    // one mode with |k|^2 = 4 against two modes |k|^2 = 1 and 16 of equal total energy
    SolverConfig cfg = taylor_green_config(2.0, 10);
    cfg.nu = 0.2;
    const GridSpec g = cfg.grid;
    auto run = [&](const std::vector<std::pair<std::array<int, 3>, double>>& modes) {
      SpectralField v0(g, 2);
      for (const auto& [k, amp] : modes) {
        const SpectralField m = projected_sample(
            *make_single_mode(2, k, {-static_cast<double>(k[1]), static_cast<double>(k[0]), 0}, 0.0), g, 0.0);
        const double e = kinetic_energy(m);
        v0.axpy(std::sqrt(amp / e), m);
      }
      return build_energy_trace(integrate(cfg, v0));
    };
    CandidateSolution single = run({{{2, 0, 0}, 1.0}});
    single.id = "single";
    CandidateSolution split = run({{{1, 0, 0}, 0.5}, {{0, 4, 0}, 0.5}});
    split.id = "split";
    const CandidateSet set{{single, split}};
    const auto r = select_minimal(set);
    REQUIRE(r.outcome == SelectionResult::Outcome::kIncomparable);
    REQUIRE(r.crossing_times.size() == 1);
    // 0.5 e^{-2 nu t} + 0.5 e^{-32 nu t} = e^{-8 nu t}
    const double tc = r.crossing_times.front();
    const auto f = [&](double t) {
      return 0.5 * std::exp(-2 * cfg.nu * t) + 0.5 * std::exp(-32 * cfg.nu * t) - std::exp(-8 * cfg.nu * t);
    };
    CHECK(f(tc - cfg.snapshot_spacing()) < 0.0);
    CHECK(f(tc) > 0.0);
    CHECK(r.to_json(set)["incomparable"].size() == 1);
    const auto r2 = select_minimal(CandidateSet{{split, single}});
    CHECK(r2.crossing_times == r.crossing_times);
  }
}

TEST_CASE("semiflow") {
  const double nu = resolved().trajectory.config.nu;
  const RegularityWeight K = RegularityWeight::lipschitz();
  const auto fields = relative_energy_catalogue(resolved(), nu);
  SUBCASE("resolved run") {
    for (std::size_t k : {0ul, 100ul, 333ul}) {
      const auto rep = semiflow_check(resolved(), resolved().times()[k], fields, K, nu, nullptr);
      CHECK(rep.all_pass);
      CHECK(rep.inherited);
      CHECK(!rep.records.empty());
    }
  }
  SUBCASE("trivial restriction") {
    const auto rep = semiflow_check(coarse(), 0.0, fields, K, nu, nullptr);
    CHECK(rep.inherited);
    for (const auto& r : rep.records) CHECK(r.parent_residual == r.restricted_residual);
  }
  SUBCASE("junction of a concatenation") {
    const double t0 = coarse().times()[200];
    const auto j = restart_refinement(coarse(), t0, resolved_config(coarse()));
    const auto rep = semiflow_check(j, t0, fields, K, nu, nullptr);
    CHECK(rep.all_pass);
    CHECK(rep.to_json()["records"].size() == rep.records.size());
  }
}
