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
#include <string>
#include <vector>

#include "json.hpp"
#include "evlab/certify/candidate.hpp"
#include "evlab/energy/rei.hpp"

namespace evlab {

// Candidates for the same data: grid, viscosity, time grid and initial
// kinetic energy agree.
struct CandidateSet {
  std::vector<CandidateSolution> candidates;
  // Throws UsageError when the set is empty or incompatible.
  void validate() const;
};

// Throws UsageError unless the two candidates share grid, viscosity and times.
void require_compatible(const CandidateSolution& a, const CandidateSolution& b);

// v = lam v1 + (1 - lam) v2, E = lam E1 + (1 - lam) E2, xi = E - kinetic(v).
CandidateSolution convex_combine(const CandidateSolution& c1, const CandidateSolution& c2,
                                 double lam);

// c1 on [0, t0), c2 on [t0, T]. c2 starts at t0 on the same grid. Throws
// PreconditionError if the states differ at t0 by more than 1e-10
// (relative) or xi2(t0) > xi1(t0).
CandidateSolution concatenate(const CandidateSolution& c1, const CandidateSolution& c2, double t0);

// Restriction to [t0, T]; the left defect at t0 is kept.
CandidateSolution restrict_to(const CandidateSolution& c, double t0);

// Fresh resolved run from v(t0) with xi reset to zero, concatenated at t0.
CandidateSolution restart_refinement(const CandidateSolution& c, double t0,
                                     const SolverConfig& solver_config);

struct RefinementStep {
  double t0 = 0.0;
  double xi_removed = 0.0;
};

struct RefinementResult {
  CandidateSolution candidate;
  std::vector<RefinementStep> steps;
};

// Restarts at the earliest snapshot with xi(t+) > jump_tol until none is left.
// The solver configuration defaults to the candidate's own with the full
// dealiased cutoff.
RefinementResult refine_to_fixed_point(const CandidateSolution& c, double jump_tol = 1e-10,
                                       std::optional<SolverConfig> solver_config = {});

SolverConfig resolved_config(const CandidateSolution& c);

// sqrt(int ||v_a - v_b||^2 dt) by trapezoid.
double l2l2_distance(const CandidateSolution& a, const CandidateSolution& b);

struct SelectionResult {
  enum class Outcome { kSelected, kIncomparable, kConvexityContradiction };
  Outcome outcome = Outcome::kSelected;
  std::size_t selected = 0;                 // index into the set
  std::vector<double> crossing_times;       // incomparable pairs
  std::vector<std::size_t> tied;            // minimizers with distinct fields
  double tied_distance = 0.0;
  nlohmann::json to_json(const CandidateSet& set) const;
};

std::string_view outcome_name(SelectionResult::Outcome o);

// Pointwise-minimal E(t+). Ties within tie_tol * max(1, E(0)) count as equal;
// equal minimizers that differ by more than 1e-8 in L2(L2) are reported as a
// convexity contradiction; identical ones resolve to the smallest id.
SelectionResult select_minimal(const CandidateSet& set, double tie_tol = 1e-10);

struct SemiflowRecord {
  std::string test_field_id;
  double s = 0.0, t = 0.0;
  bool parent_pass = false;
  bool restricted_pass = false;
  double parent_residual = 0.0, restricted_residual = 0.0;
};

struct SemiflowReport {
  double t0 = 0.0;
  std::vector<SemiflowRecord> records;
  bool all_pass = true;   // every restricted verdict passes
  bool inherited = true;  // restricted verdicts equal the parent's
  nlohmann::json to_json() const;
};

// Interval battery on the restriction to [t0, T] against the parent on the
// same sub-intervals.
SemiflowReport semiflow_check(const CandidateSolution& c, double t0,
                              const std::vector<TestFieldPtr>& fields, const RegularityWeight& K,
                              double nu, const TestFieldPtr& forcing, std::size_t nodes = 5,
                              const TolerancePolicy& policy = {});

}  // namespace evlab
