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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "evlab/certify/candidate.hpp"
#include "evlab/energy/rei.hpp"

namespace evlab {

// Resolved run as a candidate with xi = 0.
CandidateSolution build_energy_trace(const Trajectory& traj, std::string id = "resolved");

// v = P_m(fine v), xi = energy of the discarded modes. m == fine cutoff is
// allowed and gives xi = 0; m > cutoff or m < 1 is a usage error.
CandidateSolution synthesize_defect_candidate(const Trajectory& fine, int m);

// Sum of |y[i+1] - y[i]|. UsageError on an empty series.
double total_variation(std::span<const double> y);

// Right-continuous representative: E takes the right limit at every index
// whose left and right defects differ by more than jump_tol. With
// unforced = true a positive jump throws IntegrityError.
EnergyTrace cadlag_representative(const EnergyTrace& trace, bool unforced,
                                  double jump_tol = 1e-10);

// Node indices i < j drawn from up to `nodes` evenly spaced snapshots.
std::vector<std::pair<std::size_t, std::size_t>> interval_pairs(std::size_t n, std::size_t nodes);

// Per-snapshot dissipation nu |grad v|^2 and work <f, v>.
struct EnergyRates {
  std::vector<double> dissipation;
  std::vector<double> work;
};
EnergyRates energy_rates(const CandidateSolution& c, double nu, const TestFieldPtr& forcing);

struct EnergyInequalityRecord {
  double s = 0.0, t = 0.0;
  double kinetic_s = 0.0, kinetic_t = 0.0;
  double int_dissipation = 0.0, int_work = 0.0;
  double residual = 0.0;  // kinetic jump + int dissipation - int work
  double tol = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};

struct EnergyInequalityReport {
  std::vector<EnergyInequalityRecord> records;
  bool pass = true;
  double max_residual = 0.0;
};

// Kinetic-only inequality on every pair from `pairs` (all pairs when empty).
EnergyInequalityReport strong_energy_inequality_check(
    const CandidateSolution& c, double nu, const TestFieldPtr& forcing,
    std::vector<std::pair<std::size_t, std::size_t>> pairs = {},
    const TolerancePolicy& policy = {});

// Space-time test function phi(t, x) = psi(t) * field(x, t).
struct WeakResidual {
  std::string field_id;
  std::string profile_id;
  double residual = 0.0;
  double phi_norm = 0.0;  // sup|psi| * (||field|| + ||grad field||) at t = 0
  nlohmann::json to_json() const;
};

// -int (v, dt phi) + int nu (grad v, grad phi) - int (v (x) v : grad phi)
// - int <f, phi> - (v0, phi(0)) by trapezoid on the snapshot grid.
// UsageError for a non-solenoidal field or a profile reaching past T.
WeakResidual weak_residual(const CandidateSolution& c, const TestFieldPtr& field,
                           const TimeProfile& psi, double nu, const TestFieldPtr& forcing);

struct DefectBallReport {
  std::string field_id, profile_id, K_spec;
  double lhs = 0.0;  // |weak residual|
  double rhs = 0.0;  // int K(psi field) xi
  double tol = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};

// PreconditionError unless K is rank-one homogeneous.
DefectBallReport defect_ball_check(const CandidateSolution& c, const TestFieldPtr& field,
                                   const TimeProfile& psi, const RegularityWeight& K, double nu,
                                   const TestFieldPtr& forcing, double weak_tol = 1e-6);

// Shipped catalogues.
std::vector<TestFieldPtr> relative_energy_catalogue(const CandidateSolution& c, double nu);
std::vector<TestFieldPtr> spatial_catalogue(const GridSpec& grid, int cutoff);
std::vector<TimeProfile> profile_catalogue(double t_final);

// Trace CSV with columns t,E,kinetic,xi,dissipation_rate,work_rate.
std::string trace_csv(const CandidateSolution& c, double nu, const TestFieldPtr& forcing);

// Candidate directory: trajectory files plus trace.csv and candidate.json.
void save_candidate(const std::filesystem::path& dir, const CandidateSolution& c);
CandidateSolution load_candidate(const std::filesystem::path& dir);

}  // namespace evlab
