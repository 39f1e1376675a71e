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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "evlab/certify/certificates.hpp"
#include "evlab/energy/rei.hpp"
#include "evlab/solver/config.hpp"

namespace evlab {

inline constexpr int kReportFormatVersion = 1;
inline constexpr int kTraceCsvFormatVersion = 1;
inline constexpr int kCandidateFormatVersion = 1;

enum class ExperimentKind { kSimulate, kVerify, kSweepNu, kSweepN, kPerturb, kSelect };
std::string_view experiment_kind_name(ExperimentKind k);
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kSimulate;
  SolverConfig config;
  std::vector<double> values;  // viscosities (sweep-nu) or amplitudes (perturb)
  std::vector<int> cutoffs;    // sweep-n
  std::vector<ReiForm> forms{ReiForm::kInterval, ReiForm::kLocal, ReiForm::kReduced};
  std::string weight = "lipschitz";
  TolerancePolicy policy;
  std::size_t interval_nodes = 5;
  std::filesystem::path input;  // trajectory or candidate-set directory
  std::filesystem::path out;    // nothing is written when empty
  bool perturb_forcing = true;  // perturb f as well as v0
  double weak_tol = 1e-6;
  double jump_tol = 1e-10;

  // UsageError on inconsistent sweep values.
  void validate() const;
};

// Spec from JSON: {"kind", "config": {key: value} | "config_text", "values",
// "cutoffs", "forms", "weight", "tol_scale", "interval_nodes", "input", "out",
// "perturb_forcing", "seed"}. Unknown keys are a usage error.
ExperimentSpec parse_experiment_spec(const nlohmann::json& j);

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitUsage = 2,
  kExitBlowUp = 3,
  kExitIncomparable = 4,
};

struct ExperimentResult {
  nlohmann::json report;
  int exit_code = kExitPass;
};

ExperimentResult run_simulate(const ExperimentSpec& spec);
ExperimentResult run_verify(const ExperimentSpec& spec);
ExperimentResult sweep_viscosity(const ExperimentSpec& spec);
ExperimentResult sweep_galerkin(const ExperimentSpec& spec);
ExperimentResult perturb_data(const ExperimentSpec& spec);
ExperimentResult run_select(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Two-space indented JSON with a trailing newline.
std::string dump_report(const nlohmann::json& j);

// Certificate battery on one candidate: relative-energy forms over the
// catalogue, the kinetic energy inequality and the weak-residual battery.
struct VerifyOptions {
  std::vector<ReiForm> forms{ReiForm::kInterval, ReiForm::kLocal, ReiForm::kReduced};
  RegularityWeight weight = RegularityWeight::lipschitz();
  TolerancePolicy policy;
  std::size_t interval_nodes = 5;
  double weak_tol = 1e-6;
};
struct VerifyOutcome {
  nlohmann::json report;
  bool rei_pass = true;
  bool energy_pass = true;
  bool weak_pass = true;
  double weak_residual_max = 0.0;  // max |residual| / |phi|
  bool pass = true;
};
VerifyOutcome verify_candidate(const CandidateSolution& c, const VerifyOptions& opt);

// max |residual| / |phi| over the spatial and profile catalogues.
double weak_battery_max(const CandidateSolution& c, double nu, const TestFieldPtr& forcing);

// Slack of the inviscid form on a viscous run over [s, t]:
// sqrt(nu) G (sqrt(E0) + sqrt(nu) G) with G = ||grad vt||_{L2(s,t;L2)}.
double inviscid_slack(double nu, double grad_l2l2, double E0);

// Energy bound for the recovery candidate v + vbar.
struct RecoveryBound {
  std::vector<double> times, E_bar, vbar_norm, v_norm;
  double max_E_bar = 0.0;
  double condition_a_margin = 0.0;  // min_t E_bar - 2 |vbar| |v|
  double condition_b_max = 0.0;     // max over node pairs of the increment inequality
};
RecoveryBound recovery_energy_bound(const Trajectory& v, const Trajectory& vbar,
                                    const TestFieldPtr& forcing, const TestFieldPtr& delta_f);

}  // namespace evlab
