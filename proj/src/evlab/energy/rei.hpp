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

#include "json.hpp"
#include "evlab/certify/candidate.hpp"
#include "evlab/energy/functionals.hpp"
#include "evlab/energy/time_profile.hpp"

namespace evlab {

enum class ReiForm { kInterval, kLocal, kReduced };
std::string_view rei_form_name(ReiForm f);
ReiForm parse_rei_form(std::string_view name);

// tol = scale * (a * h^2 + b * tail), h the largest snapshot spacing and
// tail the largest energy of the test field outside the Galerkin cutoff.
struct TolerancePolicy {
  double a = 10.0;
  double b = 10.0;
  double scale = 1.0;
  nlohmann::json to_json() const { return {{"a", a}, {"b", b}, {"scale", scale}}; }
};

struct ResidualReport {
  ReiForm form = ReiForm::kInterval;
  double s = 0.0, t = 0.0;
  std::string test_field_id;
  std::string K_spec;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  // Endpoint values; for the pointwise forms the int_* entries hold rates.
  double R_t = 0.0, R_s = 0.0, xi_t = 0.0, xi_s = 0.0;
  double int_W = 0.0, int_A = 0.0, int_K_Rxi = 0.0;

  nlohmann::json to_json() const;
};

// Per-snapshot quantities for one (candidate, test field, weight) triple;
// every residual form is assembled from these.
class RelativeEnergyProfile {
 public:
  RelativeEnergyProfile(const CandidateSolution& c, const TestFieldPtr& vt,
                        const RegularityWeight& K, double nu, const TestFieldPtr& forcing,
                        const TolerancePolicy& policy = {});

  std::size_t size() const { return t_.size(); }
  const std::vector<double>& times() const { return t_; }
  const std::vector<double>& R() const { return R_; }
  const std::vector<double>& W() const { return W_; }
  const std::vector<double>& A() const { return A_; }
  const std::vector<double>& K() const { return K_; }
  const std::vector<double>& xi() const { return xi_; }
  const std::vector<double>& xi_left() const { return xi_left_; }
  double tolerance() const { return tol_; }
  double tail() const { return tail_; }
  const std::string& test_field_id() const { return id_; }

  // Index of the snapshot at time t; UsageError when t is not on the grid.
  std::size_t index_of(double t) const;

  ResidualReport interval(std::size_t is, std::size_t it) const;
  ResidualReport local(std::size_t i) const;
  // UsageError if the test field depends on time.
  ResidualReport reduced(std::size_t i) const;
  // -int phi' (R + xi) + int phi (W + A - K (R + xi)).
  double mollified(const TimeProfile& phi) const;

 private:
  std::vector<double> t_, R_, W_, A_, K_, xi_, xi_left_, kinetic_, E_;
  // Reduced-form ingredients, filled only for static test fields.
  std::vector<double> v_dot_vt_, visc_, conv_, work_;
  std::vector<double> d_R_xi_, d_reduced_;
  bool static_ = false;
  std::string id_, K_spec_;
  double tol_ = 0.0, tail_ = 0.0;
};

struct ReiFormSpec {
  ReiForm form = ReiForm::kInterval;
  double s = 0.0;  // interval start
  double t = 0.0;  // interval end or evaluation time
};

ResidualReport rei_residual(const CandidateSolution& c, const TestFieldPtr& vt,
                            const RegularityWeight& K, const ReiFormSpec& form, double nu,
                            const TestFieldPtr& forcing, const TolerancePolicy& policy = {});

struct GronwallReport {
  std::vector<double> times, lhs, rhs, slack;
  double min_slack = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};

// Checks (R + xi)(t) + int_0^t <A, w> e^{int_tau^t K} <= (R + xi)(0) e^{int_0^t K}
// at every snapshot. PreconditionError when xi(0) > 1e-12.
GronwallReport gronwall_dissipative_bound(const CandidateSolution& c, const TestFieldPtr& vt,
                                          const RegularityWeight& K, double nu,
                                          const TestFieldPtr& forcing,
                                          double slack_tol = 1e-8);

double mollified_residual(const CandidateSolution& c, const TestFieldPtr& vt,
                          const RegularityWeight& K, const TimeProfile& phi, double nu,
                          const TestFieldPtr& forcing);

}  // namespace evlab
