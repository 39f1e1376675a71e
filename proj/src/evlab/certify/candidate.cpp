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


#include "evlab/certify/candidate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evlab/common/error.hpp"

namespace evlab {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kResolvedRun: return "resolved-run";
    case Provenance::kCoarseGrained: return "coarse-grained";
    case Provenance::kConvexCombination: return "convex-combination";
    case Provenance::kConcatenation: return "concatenation";
  }
  return "unknown";
}

Provenance parse_provenance(std::string_view name) {
  for (auto p : {Provenance::kResolvedRun, Provenance::kCoarseGrained,
                 Provenance::kConvexCombination, Provenance::kConcatenation}) {
    if (provenance_name(p) == name) return p;
  }
  throw FormatError("unknown provenance '" + std::string(name) + "'");
}

double CandidateSolution::xi_max() const {
  double m = 0.0;
  for (double x : trace.xi) m = std::max(m, x);
  return m;
}

void CandidateSolution::check_invariants(double slack) const {
  const std::size_t n = trace.size();
  if (trajectory.times != trace.times || trajectory.snapshots.size() != n ||
      trace.E.size() != n || trace.kinetic.size() != n || trace.xi.size() != n ||
      trace.xi_left.size() != n) {
    throw IntegrityError("candidate '" + id + "': trace is not aligned with the trajectory");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = std::max(1.0, std::abs(trace.E[i]));
    if (trace.xi[i] < -slack * scale || trace.xi_left[i] < -slack * scale) {
      std::ostringstream os;
      os << "candidate '" << id << "': negative defect " << trace.xi[i] << " at t="
         << trace.times[i];
      throw IntegrityError(os.str());
    }
    if (std::abs(trace.E[i] - trace.kinetic[i] - trace.xi[i]) > slack * scale) {
      throw IntegrityError("candidate '" + id + "': E != kinetic + xi");
    }
  }
}

EnergyTrace make_trace(const Trajectory& traj, std::vector<double> xi) {
  EnergyTrace tr;
  tr.times = traj.times;
  tr.kinetic.reserve(traj.size());
  for (const auto& s : traj.snapshots) tr.kinetic.push_back(kinetic_energy(s));
  if (xi.empty()) xi.assign(traj.size(), 0.0);
  tr.xi = std::move(xi);
  tr.xi_left = tr.xi;
  tr.E.resize(traj.size());
  for (std::size_t i = 0; i < tr.E.size(); ++i) tr.E[i] = tr.kinetic[i] + tr.xi[i];
  return tr;
}

}  // namespace evlab
