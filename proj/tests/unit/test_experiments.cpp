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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "evlab/certify/certificates.hpp"
#include "evlab/common/error.hpp"
#include "evlab/experiments/experiments.hpp"
#include "evlab/solver/trajectory_io.hpp"

using namespace evlab;
using evlab::testing::random_config;
using evlab::testing::taylor_green_config;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("evlab_exp_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentSpec spec_for(ExperimentKind kind, const SolverConfig& cfg) {
  ExperimentSpec s;
  s.kind = kind;
  s.config = cfg;
  return s;
}

}  // namespace

TEST_CASE("experiment kinds and spec validation") {
  for (auto name : {"simulate", "verify", "sweep-nu", "sweep-n", "perturb", "select"})
    CHECK(experiment_kind_name(parse_experiment_kind(name)) == name);
  CHECK_THROWS_AS(parse_experiment_kind("plot"), UsageError);

  ExperimentSpec s = spec_for(ExperimentKind::kSweepNu, taylor_green_config());
  s.values = {0.1};
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.values = {0.05, 0.1};
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.values = {0.1, 0.0};
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.values = {0.1, 0.05};
  CHECK_NOTHROW(s.validate());

  s.kind = ExperimentKind::kSweepN;
  s.cutoffs = {4, 8, 11};
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.cutoffs = {4, 4};
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.cutoffs = {4, 8, 10};
  CHECK_NOTHROW(s.validate());

  s.kind = ExperimentKind::kPerturb;
  s.values = {-1e-3};
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.values = {1e-2, 1e-3, 0.0};
  CHECK_NOTHROW(s.validate());

  s.kind = ExperimentKind::kVerify;
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.input = "somewhere";
  s.policy.scale = 0.0;
  CHECK_THROWS_AS(s.validate(), UsageError);
}

TEST_CASE("simulate") {
  SUBCASE("Taylor-Green trace and determinism") {
    const fs::path a = scratch("sim_a"), b = scratch("sim_b");
    ExperimentSpec s = spec_for(ExperimentKind::kSimulate, taylor_green_config(0.5, 10));
    s.out = a;
    const auto r = run_simulate(s);
    CHECK(r.exit_code == kExitPass);
    CHECK(r.report["energy_balance"]["max_abs_step_residual"].get<double>() < 1e-6);
    CHECK(r.report["format_versions"]["report"] == kReportFormatVersion);
    CHECK(r.report["seed"] == 0);
    const CandidateSolution c = load_candidate(a);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double exact = std::numbers::pi * std::numbers::pi * std::exp(-4 * 0.1 * c.times()[i]);
      CHECK(std::abs(c.trace.E[i] - exact) < 1e-7);
    }
    s.out = b;
    run_simulate(s);
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
  }
  SUBCASE("zero data") {
    SolverConfig cfg = taylor_green_config(0.1, 10);
    cfg.ic = "zero";
    const fs::path d = scratch("sim_zero");
    ExperimentSpec s = spec_for(ExperimentKind::kSimulate, cfg);
    s.out = d;
    const auto r = run_simulate(s);
    CHECK(r.report["kinetic_final"] == 0.0);
    const CandidateSolution c = load_candidate(d);
    for (double e : c.trace.E) CHECK(e == 0.0);
  }
  SUBCASE("blow-up propagates") {
    SolverConfig cfg = random_config(0.0, 2.0);
    cfg.ic_amplitude = 1e6;
    cfg.dt = 0.05;
    cfg.stability_override = true;
    CHECK_THROWS_AS(run_simulate(spec_for(ExperimentKind::kSimulate, cfg)), BlowUpError);
  }
}

TEST_CASE("verify") {
  const fs::path d = scratch("verify_resolved");
  ExperimentSpec sim = spec_for(ExperimentKind::kSimulate, random_config(0.02, 0.5, 5));
  sim.out = d;
  run_simulate(sim);

  SUBCASE("resolved run passes") {
    ExperimentSpec s = spec_for(ExperimentKind::kVerify, {});
    s.input = d;
    const auto r = run_verify(s);
    CHECK(r.exit_code == kExitPass);
    CHECK(r.report["verdict"] == "pass");
    CHECK(r.report["relative_energy"]["records"].size() > 50);
    CHECK(r.report["weak_residual"]["max_relative"].get<double>() < 1e-6);
  }
  SUBCASE("coarse candidate labels expected failures") {
    const fs::path cd = scratch("verify_coarse");
    save_candidate(cd, synthesize_defect_candidate(load_trajectory(d), 3));
    ExperimentSpec s = spec_for(ExperimentKind::kVerify, {});
    s.input = cd;
    s.forms = {ReiForm::kInterval};
    const auto r = run_verify(s);
    CHECK(r.report["xi_max"].get<double>() > 0.0);
    CHECK(r.report["weak_residual"]["verdict"] == "expected-failure");
    bool labeled = false;
    for (const auto& w : r.report["weak_residual"]["records"])
      labeled = labeled || w["verdict"] == "expected-failure";
    CHECK(labeled);
    for (const auto& rec : r.report["relative_energy"]["records"]) CHECK(rec["form"] == "interval");
  }
  SUBCASE("truncated snapshot") {
    const fs::path bad = scratch("verify_bad");
    fs::copy(d, bad, fs::copy_options::recursive);
    const fs::path snap = bad / "snap_000003.evf";
    REQUIRE(fs::exists(snap));
    fs::resize_file(snap, fs::file_size(snap) / 2);
    ExperimentSpec s = spec_for(ExperimentKind::kVerify, {});
    s.input = bad;
    try {
      run_verify(s);
      FAIL("expected a format error");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("snap_000003.evf") != std::string::npos);
    }
  }
  SUBCASE("weight regime") {
    ExperimentSpec s = spec_for(ExperimentKind::kVerify, {});
    s.input = d;
    s.weight = "serrin:4:3:1";
    CHECK_THROWS_AS(run_verify(s), UsageError);
  }
}

TEST_CASE("viscosity sweep") {
  SUBCASE("single mode decays exactly") {
    SolverConfig cfg = taylor_green_config(0.5, 50);
    cfg.ic = "single-mode";
    ExperimentSpec s = spec_for(ExperimentKind::kSweepNu, cfg);
    s.values = {0.1, 0.05, 0.025};
    const auto r = sweep_viscosity(s);
    const double E0 = 0.25 * 4 * std::numbers::pi * std::numbers::pi * 0.8;
    for (const auto& p : r.report["points"]) {
      const double nu = p["nu"];
      CHECK(p["E_final"].get<double>() == doctest::Approx(E0 * std::exp(-2 * nu * 5 * 0.5)).epsilon(1e-9));
    }
    CHECK(r.report["energy_differences_decreasing"] == true);
    double prev = INFINITY;
    for (const auto& p : r.report["points"]) {
      CHECK(p["slack"].get<double>() < prev);
      prev = p["slack"];
    }
  }
  SUBCASE("random data") {
    ExperimentSpec s = spec_for(ExperimentKind::kSweepNu, random_config(0.0, 0.5, 5));
    s.values = {0.1, 0.05, 0.025};
    s.interval_nodes = 4;
    const fs::path d = scratch("sweep_nu");
    s.out = d;
    const auto r = sweep_viscosity(s);
    CHECK(r.exit_code == kExitPass);
    CHECK(r.report["inviscid_form"]["verdict"] == "pass");
    CHECK(fs::exists(d / "summary.csv"));
    CHECK(fs::exists(d / "nu_2" / "trace.csv"));
  }
}

TEST_CASE("Galerkin sweep") {
  ExperimentSpec s = spec_for(ExperimentKind::kSweepN, random_config(0.02, 0.5, 10));
  s.config.ic_cutoff = 3;
  s.cutoffs = {3, 5, 8, 10};
  const auto r = sweep_galerkin(s);
  CHECK(r.exit_code == kExitPass);
  CHECK(r.report["xi_nonincreasing"] == true);
  const auto& pts = r.report["points"];
  CHECK(pts.back()["xi_max"] == 0.0);
  CHECK(pts.back()["l2l2_distance_to_finest"] == 0.0);
  CHECK(pts.front()["xi_final"].get<double>() > pts[1]["xi_final"].get<double>());
  s.cutoffs = {4, 11};
  CHECK_THROWS_AS(sweep_galerkin(s), UsageError);
}

TEST_CASE("data perturbation") {
  SUBCASE("zero perturbation") {
    ExperimentSpec s = spec_for(ExperimentKind::kPerturb, random_config(0.05, 0.3, 10));
    s.values = {0.0};
    const auto r = perturb_data(s);
    const auto& p = r.report["points"][0];
    CHECK(p["max_E_bar"] == 0.0);
    CHECK(p["l2l2_distance"] == 0.0);
  }
  SUBCASE("recovery bound conditions and shrinking") {
    ExperimentSpec s = spec_for(ExperimentKind::kPerturb, random_config(0.05, 0.5, 10));
    s.values = {1e-2, 1e-3};
    const auto r = perturb_data(s);
    for (const auto& p : r.report["points"]) {
      CHECK(p["condition_a"] == true);
      CHECK(p["condition_b"] == true);
    }
    const auto& q = r.report["ratios"][0];
    MESSAGE("ratios " << q.dump());
    // first-order smallness; the strict verdict depends on second-order terms
    CHECK(q["E_bar_ratio"].get<double>() > 9.9);
    CHECK(q["distance_ratio"].get<double>() > 9.9);
    const bool strict = q["E_bar_ratio"].get<double>() >= 10.0 && q["distance_ratio"].get<double>() >= 10.0;
    CHECK((q["verdict"] == "pass") == strict);
    CHECK((r.exit_code == kExitPass) == strict);
  }
  SUBCASE("recovery bound on a diagonal Stokes problem") {
    SolverConfig cfg = taylor_green_config(0.5, 10);
    const Trajectory v = integrate(cfg);
    const SpectralField m = make_single_mode(2, {1, 1, 0}, {1, -1, 0})->sample(cfg.grid, 0.0);
    const Trajectory vbar = stokes_recovery(nullptr, 1e-3 * m, cfg);
    for (std::size_t i = 0; i < vbar.size(); ++i) {
      SpectralField exact = std::exp(-cfg.nu * 2 * vbar.times[i]) * (1e-3 * m);
      CHECK(std::sqrt(2 * kinetic_energy(vbar.snapshots[i] - exact)) < 1e-15);
    }
    const RecoveryBound b = recovery_energy_bound(v, vbar, nullptr, nullptr);
    CHECK(b.condition_a_margin >= 0.0);
    CHECK(b.condition_b_max <= 1e-15);
    for (std::size_t i = 0; i < b.times.size(); ++i)
      CHECK(b.E_bar[i] >= 2 * b.vbar_norm[i] * b.v_norm[i]);
  }
}

TEST_CASE("select over a candidate directory") {
  const Trajectory fine = integrate(random_config(0.02, 0.5, 5));
  SUBCASE("resolved and coarse") {
    const fs::path d = scratch("select_pair");
    save_candidate(d / "a_resolved", build_energy_trace(fine));
    save_candidate(d / "b_coarse", synthesize_defect_candidate(fine, 6));
    ExperimentSpec s = spec_for(ExperimentKind::kSelect, {});
    s.input = d;
    s.out = scratch("select_pair_out");
    const auto r = run_select(s);
    CHECK(r.exit_code == kExitPass);
    CHECK(r.report["outcome"] == "selected");
    CHECK(r.report["final_xi_max"].get<double>() < 1e-10);
    CHECK(r.report["weak_residual_max"].get<double>() < 1e-6);
    CHECK(r.report["candidates"][1]["refinements"].size() == 1);
    CHECK(fs::exists(s.out / "selected" / "candidate.json"));
    CHECK(fs::exists(s.out / "report.json"));
  }
  SUBCASE("singleton") {
    const fs::path d = scratch("select_one");
    save_candidate(d, build_energy_trace(fine));
    ExperimentSpec s = spec_for(ExperimentKind::kSelect, {});
    s.input = d;
    const auto r = run_select(s);
    CHECK(r.exit_code == kExitPass);
    CHECK(r.report["selected_id"] == "resolved");
    CHECK(r.report["refinements"].empty());
  }
  SUBCASE("incomparable pair") {
    SolverConfig cfg = taylor_green_config(2.0, 20);
    cfg.nu = 0.2;
    auto mode = [&](std::array<int, 3> k, double energy) {
      SpectralField f = make_single_mode(2, k, {-double(k[1]), double(k[0]), 0})->sample(cfg.grid, 0.0);
      return std::sqrt(energy / kinetic_energy(f)) * f;
    };
    const fs::path d = scratch("select_cross");
    save_candidate(d / "single", build_energy_trace(integrate(cfg, mode({2, 0, 0}, 1.0)), "single"));
    save_candidate(d / "split", build_energy_trace(integrate(cfg, mode({1, 0, 0}, 0.5) + mode({0, 4, 0}, 0.5)), "split"));
    ExperimentSpec s = spec_for(ExperimentKind::kSelect, {});
    s.input = d;
    const auto r = run_select(s);
    CHECK(r.exit_code == kExitIncomparable);
    CHECK(r.report["incomparable"].size() == 1);
  }
  SUBCASE("missing directory") {
    ExperimentSpec s = spec_for(ExperimentKind::kSelect, {});
    s.input = scratch("select_none");
    CHECK_THROWS_AS(run_select(s), UsageError);
  }
}
