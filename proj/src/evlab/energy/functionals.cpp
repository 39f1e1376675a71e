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


#include "evlab/energy/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "evlab/common/error.hpp"

namespace evlab {

namespace {

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* what) {
  if (!a.compatible(b)) {
    throw UsageError(std::string(what) + ": fields live on different grids");
  }
}

}  // namespace

double relative_energy(const SpectralField& v, const SpectralField& vt) {
  require_same_grid(v, vt, "relative_energy");
  return kinetic_energy(v - vt);
}

double system_operator_pairing(const SpectralField& vt, const SpectralField& vt_dt,
                               const SpectralField& vt_lap, const SpectralField* f,
                               const SpectralField& w, double nu) {
  double s = inner(vt_dt, w) + trilinear(vt, vt, w) - nu * inner(vt_lap, w);
  if (f) s -= inner(*f, w);
  return s;
}

double system_operator_pairing(const TestField& vt, const SpectralField& w, double nu,
                               const TestField* forcing, double t) {
  const GridSpec& g = w.grid();
  const SpectralField v = vt.sample(g, t);
  const SpectralField dt = vt.sample_time_derivative(g, t);
  const SpectralField lap = nu != 0.0 ? vt.sample_laplacian(g, t) : SpectralField(g, w.components());
  if (!forcing) return system_operator_pairing(v, dt, lap, nullptr, w, nu);
  const SpectralField f = forcing->sample(g, t);
  return system_operator_pairing(v, dt, lap, &f, w, nu);
}

void check_weight_regime(const RegularityWeight& K, double nu) {
  if (!(nu >= 0.0)) throw UsageError("viscosity must be nonnegative");
  if (nu == 0.0 && K.kind() == RegularityWeight::Kind::kSerrin) {
    throw UsageError("Serrin weight is not available for nu = 0; use the Lipschitz weight");
  }
}

double relative_dissipation_core(const SpectralField& w, const SpectralField& vt, double nu) {
  if (nu > 0.0) return nu * grad_inner(w, w) - trilinear(w, w, vt);
  return trilinear(w, vt, w);
}

double relative_dissipation_with(const SpectralField& v, const SpectralField& vt, double nu,
                                 double K_value) {
  require_same_grid(v, vt, "relative_dissipation");
  if (!(nu >= 0.0)) throw UsageError("viscosity must be nonnegative");
  const SpectralField w = v - vt;
  return relative_dissipation_core(w, vt, nu) + K_value * kinetic_energy(w);
}

double relative_dissipation(const SpectralField& v, const SpectralField& vt, double nu,
                            const RegularityWeight& K) {
  check_weight_regime(K, nu);
  return relative_dissipation_with(v, vt, nu, K(vt));
}

double max_relative_growth(const SpectralField& vt, double nu, int cutoff, int iterations,
                           std::uint64_t seed) {
  const GridSpec& g = vt.grid();
  const int d = g.dim;
  const PhysicalField grad = gradient(vt);
  auto apply = [&](const SpectralField& w) {
    const PhysicalField wp = to_physical(w);
    PhysicalField sw(g, d);
    for (int i = 0; i < d; ++i) {
      auto out = sw.comp(i);
      for (int j = 0; j < d; ++j) {
        const auto a = grad.comp(i * d + j), b = grad.comp(j * d + i);
        const auto wj = wp.comp(j);
        for (std::size_t p = 0; p < out.size(); ++p) out[p] += 0.5 * (a[p] + b[p]) * wj[p];
      }
    }
    SpectralField r = truncate(leray_project(to_spectral(sw)), cutoff);
    for (int c = 0; c < d; ++c) r.comp(c)[0] = 0.0;
    if (nu > 0) r.axpy(nu, laplacian(w));
    return r;
  };

  std::mt19937_64 rng(seed);
  SpectralField q = random_solenoidal(g, cutoff, 0.5, rng);
  q *= 1.0 / std::sqrt(inner(q, q));
  std::vector<SpectralField> basis;
  std::vector<double> alpha, beta;
  for (int it = 0; it < iterations; ++it) {
    basis.push_back(q);
    SpectralField z = apply(q);
    const double a = inner(z, q);
    alpha.push_back(a);
    for (const auto& b : basis) z.axpy(-inner(z, b), b);
    for (const auto& b : basis) z.axpy(-inner(z, b), b);
    const double nb = std::sqrt(std::max(0.0, inner(z, z)));
    if (nb < 1e-12 * (std::abs(a) + 1.0)) break;
    beta.push_back(nb);
    q = (1.0 / nb) * z;
  }
  const int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
  // Q(w) = <L w, w> and R(w) = |w|^2 / 2
  return 2.0 * es.eigenvalues().maxCoeff();
}

nlohmann::json AdmissibilityReport::to_json() const {
  return {{"weight", weight},
          {"nu", nu},
          {"samples", samples},
          {"seed", seed},
          {"min_W", min_W},
          {"min_W_relative", min_W_relative},
          {"negative_count", negative_count},
          {"calibrated_constant", std::isfinite(calibrated_constant)
                                      ? nlohmann::json(calibrated_constant)
                                      : nlohmann::json("inf")}};
}

AdmissibilityReport admissibility_probe(const RegularityWeight& K, double nu, int sample_count,
                                        std::uint64_t seed, const ProbeOptions& opt) {
  if (sample_count < 1) throw UsageError("admissibility probe needs at least one sample");
  check_weight_regime(K, nu);
  ProbeOptions o = opt;
  if (K.kind() == RegularityWeight::Kind::kSerrin && o.grid.dim != K.dim()) {
    o.grid = GridSpec::make(K.dim(), o.grid.n);
  }
  o.grid.validate();
  if (o.cutoff < 1 || o.cutoff > o.grid.dealias_cutoff()) {
    throw UsageError("admissibility probe: cutoff outside [1, N/3]");
  }

  AdmissibilityReport rep;
  rep.weight = K.spec();
  rep.nu = nu;
  rep.samples = sample_count;
  rep.seed = seed;
  rep.min_W = std::numeric_limits<double>::infinity();
  rep.min_W_relative = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_cut(1, o.cutoff);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lmin = std::log(o.energy_min), lmax = std::log(o.energy_max);
  double worst_ratio = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    const int cv = pick_cut(rng);
    const int cw = pick_cut(rng);
    const double ev = std::exp(lmin + (lmax - lmin) * unit(rng));
    const SpectralField vt = random_solenoidal(o.grid, cv, ev, rng);
    const SpectralField w = random_solenoidal(o.grid, cw, 1.0, rng);
    const double core = relative_dissipation_core(w, vt, nu);
    const double R = kinetic_energy(w);
    const double base = K.base(vt);
    const double kr = K.constant() * base * R;
    const double W = core + kr;
    const double visc = nu > 0 ? nu * grad_inner(w, w) : 0.0;
    const double scale = visc + std::abs(core - visc) + std::abs(kr);
    rep.min_W = std::min(rep.min_W, W);
    if (scale > 0) rep.min_W_relative = std::min(rep.min_W_relative, W / scale);
    if (W < -1e-10 * scale) ++rep.negative_count;
    if (!o.calibrate) continue;
    const double growth = std::max(-core / R, max_relative_growth(vt, nu, o.cutoff));
    if (growth > 0) {
      worst_ratio = base > 0 ? std::max(worst_ratio, growth / base)
                             : std::numeric_limits<double>::infinity();
    }
  }
  rep.calibrated_constant = K.kind() == RegularityWeight::Kind::kZero && worst_ratio > 0
                                ? std::numeric_limits<double>::infinity()
                                : o.safety * worst_ratio;
  return rep;
}

RegularityWeight calibrated_serrin(int dim, double r, double nu, int sample_count,
                                   std::uint64_t seed) {
  const RegularityWeight probe = RegularityWeight::serrin_from_r(dim, r, 1.0);
  ProbeOptions opt;
  opt.grid = GridSpec::make(dim, 16);
  const AdmissibilityReport rep = admissibility_probe(probe, nu, sample_count, seed, opt);
  const double c = rep.calibrated_constant > 0 ? rep.calibrated_constant : 1e-12;
  return probe.with_constant(c);
}

}  // namespace evlab
