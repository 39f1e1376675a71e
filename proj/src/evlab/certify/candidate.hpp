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

#include <string>
#include <string_view>
#include <vector>

#include "evlab/solver/galerkin.hpp"

namespace evlab {

// Total energy E = kinetic + xi sampled on the snapshot grid. Stored values
// are right limits; xi_left holds left limits and differs from xi only at
// jump times.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> E;
  std::vector<double> kinetic;
  std::vector<double> xi;
  std::vector<double> xi_left;

  std::size_t size() const { return times.size(); }
  double E_left(std::size_t i) const { return kinetic[i] + xi_left[i]; }
};

enum class Provenance { kResolvedRun, kCoarseGrained, kConvexCombination, kConcatenation };

std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view name);

// A pair (v, xi) on a common time grid.
struct CandidateSolution {
  std::string id;
  Trajectory trajectory;
  EnergyTrace trace;
  Provenance provenance = Provenance::kResolvedRun;

  std::size_t size() const { return trace.size(); }
  const GridSpec& grid() const { return trajectory.grid(); }
  const std::vector<double>& times() const { return trace.times; }
  // Largest right value of xi.
  double xi_max() const;
  // Throws IntegrityError if times disagree, xi < -slack or
  // E != kinetic + xi.
  void check_invariants(double slack = 1e-12) const;
};

// Trace with E = kinetic + xi from per-snapshot kinetic energies.
EnergyTrace make_trace(const Trajectory& traj, std::vector<double> xi);

}  // namespace evlab
