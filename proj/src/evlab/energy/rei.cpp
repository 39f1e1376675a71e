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


#include "evlab/energy/rei.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evlab/common/error.hpp"
#include "evlab/common/parallel.hpp"
#include "evlab/energy/quadrature.hpp"

namespace evlab {

std::string_view rei_form_name(ReiForm f) {
  switch (f) {
    case ReiForm::kInterval: return "interval";
    case ReiForm::kLocal: return "local";
    case ReiForm::kReduced: return "reduced";
  }
  return "interval";
}

ReiForm parse_rei_form(std::string_view name) {
  for (auto f : {ReiForm::kInterval, ReiForm::kLocal, ReiForm::kReduced}) {
    if (rei_form_name(f) == name) return f;
  }
  throw UsageError("unknown relative energy form '" + std::string(name) + "'");
}

nlohmann::json ResidualReport::to_json() const {
  return {{"form", rei_form_name(form)},
          {"s", s},
          {"t", t},
          {"test_field_id", test_field_id},
          {"K_spec", K_spec},
          {"residual", residual},
          {"tol", tol},
          {"verdict", pass ? "pass" : "fail"},
          {"terms",
           {{"R_t", R_t},
            {"R_s", R_s},
            {"xi_t", xi_t},
            {"xi_s", xi_s},
            {"int_W", int_W},
            {"int_A", int_A},
            {"int_K_Rxi", int_K_Rxi}}}};
}

RelativeEnergyProfile::RelativeEnergyProfile(const CandidateSolution& c, const TestFieldPtr& vt,
                                             const RegularityWeight& K, double nu,
                                             const TestFieldPtr& forcing,
                                             const TolerancePolicy& policy) {
  if (!vt) throw UsageError("missing test field");
  if (c.size() == 0) throw UsageError("empty candidate");
  check_weight_regime(K, nu);
  const GridSpec& g = c.grid();
  if (vt->dim() != g.dim) throw UsageError("test field dimension does not match the grid");

  const std::size_t n = c.size();
  t_ = c.trace.times;
  xi_ = c.trace.xi;
  xi_left_ = c.trace.xi_left;
  kinetic_ = c.trace.kinetic;
  E_ = c.trace.E;
  R_.assign(n, 0.0);
  W_.assign(n, 0.0);
  A_.assign(n, 0.0);
  K_.assign(n, 0.0);
  static_ = !vt->time_dependent();
  if (static_) {
    v_dot_vt_.assign(n, 0.0);
    visc_.assign(n, 0.0);
    conv_.assign(n, 0.0);
    work_.assign(n, 0.0);
  }
  std::vector<double> tails(n, 0.0);
  const int cutoff = c.trajectory.config.cutoff;

  parallel_for(n, [&](std::size_t i) {
    const double t = t_[i];
    const SpectralField& v = c.trajectory.snapshots[i];
    const SpectralField s = vt->sample(g, t);
    const SpectralField sdt = vt->time_dependent() ? vt->sample_time_derivative(g, t)
                                                   : SpectralField(g, g.dim);
    const SpectralField slap = nu != 0.0 ? vt->sample_laplacian(g, t) : SpectralField(g, g.dim);
    SpectralField f;
    if (forcing) f = forcing->sample(g, t);
    const SpectralField w = v - s;
    R_[i] = kinetic_energy(w);
    K_[i] = K(s);
    W_[i] = relative_dissipation_core(w, s, nu) + K_[i] * R_[i];
    A_[i] = system_operator_pairing(s, sdt, slap, forcing ? &f : nullptr, w, nu);
    tails[i] = kinetic_energy(s - galerkin_project(s, cutoff));
    if (static_) {
      v_dot_vt_[i] = inner(v, s);
      visc_[i] = nu * (grad_inner(v, v) - grad_inner(v, s));
      conv_[i] = trilinear(v, s, v);
      work_[i] = forcing ? inner(f, w) : 0.0;
    }
  });

  std::vector<double> g1(n);
  for (std::size_t i = 0; i < n; ++i) g1[i] = R_[i] + xi_[i];
  d_R_xi_ = fd_derivative(t_, g1);
  if (static_) {
    std::vector<double> g2(n);
    for (std::size_t i = 0; i < n; ++i) g2[i] = E_[i] - v_dot_vt_[i];
    d_reduced_ = fd_derivative(t_, g2);
  }

  double h = 0.0;
  for (std::size_t i = 1; i < n; ++i) h = std::max(h, t_[i] - t_[i - 1]);
  tail_ = *std::max_element(tails.begin(), tails.end());
  tol_ = policy.scale * (policy.a * h * h + policy.b * tail_);
  id_ = vt->id();
  K_spec_ = K.spec();
}

std::size_t RelativeEnergyProfile::index_of(double t) const {
  const double span = std::max(1.0, t_.back() - t_.front());
  auto it = std::lower_bound(t_.begin(), t_.end(), t - 1e-9 * span);
  if (it == t_.end() || std::abs(*it - t) > 1e-9 * span) {
    std::ostringstream os;
    os << "time " << t << " is not a snapshot time";
    throw UsageError(os.str());
  }
  return static_cast<std::size_t>(it - t_.begin());
}

ResidualReport RelativeEnergyProfile::interval(std::size_t is, std::size_t it) const {
  if (!(is < it && it < size())) throw UsageError("interval form needs s < t on the snapshot grid");
  ResidualReport r;
  r.form = ReiForm::kInterval;
  r.s = t_[is];
  r.t = t_[it];
  r.test_field_id = id_;
  r.K_spec = K_spec_;
  r.R_t = R_[it];
  r.R_s = R_[is];
  r.xi_t = xi_[it];
  r.xi_s = xi_left_[is];
  // each segment sees the right value at its start and the left value at its end
  for (std::size_t i = is; i < it; ++i) {
    const double h = t_[i + 1] - t_[i];
    r.int_W += 0.5 * h * (W_[i] + W_[i + 1]);
    r.int_A += 0.5 * h * (A_[i] + A_[i + 1]);
    r.int_K_Rxi += 0.5 * h * (K_[i] * (R_[i] + xi_[i]) + K_[i + 1] * (R_[i + 1] + xi_left_[i + 1]));
  }
  r.residual = (r.R_t + r.xi_t) - (r.R_s + r.xi_s) + r.int_W + r.int_A - r.int_K_Rxi;
  r.tol = tol_;
  r.pass = r.residual <= r.tol;
  return r;
}

ResidualReport RelativeEnergyProfile::local(std::size_t i) const {
  if (i >= size()) throw UsageError("local form: index out of range");
  ResidualReport r;
  r.form = ReiForm::kLocal;
  r.s = r.t = t_[i];
  r.test_field_id = id_;
  r.K_spec = K_spec_;
  r.R_t = r.R_s = R_[i];
  r.xi_t = r.xi_s = xi_[i];
  r.int_W = W_[i];
  r.int_A = A_[i];
  r.int_K_Rxi = K_[i] * (R_[i] + xi_[i]);
  r.residual = d_R_xi_[i] + r.int_W + r.int_A - r.int_K_Rxi;
  r.tol = tol_;
  r.pass = r.residual <= r.tol;
  return r;
}

ResidualReport RelativeEnergyProfile::reduced(std::size_t i) const {
  if (!static_) throw UsageError("reduced form requires a time-independent test field");
  if (i >= size()) throw UsageError("reduced form: index out of range");
  ResidualReport r;
  r.form = ReiForm::kReduced;
  r.s = r.t = t_[i];
  r.test_field_id = id_;
  r.K_spec = K_spec_;
  r.R_t = r.R_s = R_[i];
  r.xi_t = r.xi_s = xi_[i];
  r.int_W = visc_[i] + conv_[i];
  r.int_A = -work_[i];
  r.int_K_Rxi = K_[i] * (E_[i] - kinetic_[i]);
  r.residual = d_reduced_[i] + r.int_W + r.int_A - r.int_K_Rxi;
  r.tol = tol_;
  r.pass = r.residual <= r.tol;
  return r;
}

double RelativeEnergyProfile::mollified(const TimeProfile& phi) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = R_[i] + xi_[i];
    y[i] = -phi.derivative(t_[i]) * g + phi.value(t_[i]) * (W_[i] + A_[i] - K_[i] * g);
  }
  return n > 1 ? trapezoid(t_, y, 0, n - 1) : 0.0;
}

ResidualReport rei_residual(const CandidateSolution& c, const TestFieldPtr& vt,
                            const RegularityWeight& K, const ReiFormSpec& form, double nu,
                            const TestFieldPtr& forcing, const TolerancePolicy& policy) {
  if (form.form == ReiForm::kReduced && vt && vt->time_dependent()) {
    throw UsageError("reduced form requires a time-independent test field");
  }
  if (form.form == ReiForm::kInterval && !(form.s < form.t)) {
    throw UsageError("interval form needs s < t");
  }
  const RelativeEnergyProfile p(c, vt, K, nu, forcing, policy);
  switch (form.form) {
    case ReiForm::kInterval: return p.interval(p.index_of(form.s), p.index_of(form.t));
    case ReiForm::kLocal: return p.local(p.index_of(form.t));
    case ReiForm::kReduced: return p.reduced(p.index_of(form.t));
  }
  return {};
}

nlohmann::json GronwallReport::to_json() const {
  return {{"min_slack", min_slack}, {"verdict", pass ? "pass" : "fail"}, {"times", times},
          {"lhs", lhs}, {"rhs", rhs}};
}

GronwallReport gronwall_dissipative_bound(const CandidateSolution& c, const TestFieldPtr& vt,
                                          const RegularityWeight& K, double nu,
                                          const TestFieldPtr& forcing, double slack_tol) {
  if (c.size() == 0) throw UsageError("empty candidate");
  if (c.trace.xi.front() > 1e-12) {
    throw PreconditionError("Gronwall bound requires xi(0) = 0");
  }
  const RelativeEnergyProfile p(c, vt, K, nu, forcing);
  const std::size_t n = p.size();
  const auto& t = p.times();
  const std::vector<double> G = cumulative_trapezoid(t, p.K());
  std::vector<double> weighted(n);
  for (std::size_t i = 0; i < n; ++i) weighted[i] = p.A()[i] * std::exp(-G[i]);
  const std::vector<double> I = cumulative_trapezoid(t, weighted);

  GronwallReport rep;
  rep.times = t;
  rep.lhs.resize(n);
  rep.rhs.resize(n);
  rep.slack.resize(n);
  const double g0 = p.R()[0] + p.xi()[0];
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(G[i]);
    rep.lhs[i] = p.R()[i] + p.xi()[i] + e * I[i];
    rep.rhs[i] = g0 * e;
    rep.slack[i] = rep.rhs[i] - rep.lhs[i];
    rep.min_slack = std::min(rep.min_slack, rep.slack[i]);
  }
  rep.pass = rep.min_slack >= -slack_tol;
  return rep;
}

double mollified_residual(const CandidateSolution& c, const TestFieldPtr& vt,
                          const RegularityWeight& K, const TimeProfile& phi, double nu,
                          const TestFieldPtr& forcing) {
  if (phi.is_zero()) return 0.0;
  return RelativeEnergyProfile(c, vt, K, nu, forcing).mollified(phi);
}

}  // namespace evlab
