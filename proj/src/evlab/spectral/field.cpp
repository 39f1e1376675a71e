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

#include "evlab/spectral/field.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "evlab/common/error.hpp"
#include "evlab/spectral/fft.hpp"

namespace evlab {

SpectralField::SpectralField(const GridSpec& grid, int components)
    : grid_(grid), ncomp_(components),
      coeffs_(static_cast<std::size_t>(components) * grid.points()) {}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (!compatible(o)) throw UsageError("field shape mismatch in +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (!compatible(o)) throw UsageError("field shape mismatch in -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& o) {
  if (!compatible(o)) throw UsageError("field shape mismatch in axpy");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * o.coeffs_[i];
  return *this;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

PhysicalField::PhysicalField(const GridSpec& grid, int components)
    : grid_(grid), ncomp_(components),
      values_(static_cast<std::size_t>(components) * grid.points()) {}

PhysicalField to_physical(const SpectralField& f) {
  PhysicalField out(f.grid(), f.components());
  for (int c = 0; c < f.components(); ++c) fft::inverse(f.grid(), f.comp(c), out.comp(c));
  return out;
}

SpectralField to_spectral(const PhysicalField& f) {
  SpectralField out(f.grid(), f.components());
  for (int c = 0; c < f.components(); ++c) fft::forward(f.grid(), f.comp(c), out.comp(c));
  return out;
}

SpectralField leray_project(const SpectralField& f) {
  const auto& wt = wave_table(f.grid());
  const int d = f.grid().dim;
  if (f.components() != d) throw UsageError("leray_project needs a vector field");
  SpectralField out = f;
  for (std::size_t m = 0; m < f.modes(); ++m) {
    if (wt.nyquist[m]) {
      for (int i = 0; i < d; ++i) out.comp(i)[m] = 0.0;
      continue;
    }
    if (wt.k2[m] == 0.0) continue;
    Complex kv = 0.0;
    for (int i = 0; i < d; ++i) kv += double(wt.k[m][i]) * f.comp(i)[m];
    const Complex s = kv / wt.k2[m];
    for (int i = 0; i < d; ++i) out.comp(i)[m] -= double(wt.k[m][i]) * s;
  }
  return out;
}

SpectralField truncate(const SpectralField& f, int cutoff) {
  const auto& wt = wave_table(f.grid());
  SpectralField out = f;
  for (int c = 0; c < f.components(); ++c) {
    auto oc = out.comp(c);
    for (std::size_t m = 0; m < f.modes(); ++m) {
      if (wt.kmax[m] > cutoff) oc[m] = 0.0;
    }
  }
  return out;
}

SpectralField dealias(const SpectralField& f) {
  return truncate(f, f.grid().dealias_cutoff());
}

double max_divergence(const SpectralField& f) {
  const auto& wt = wave_table(f.grid());
  double worst = 0.0;
  for (std::size_t m = 0; m < f.modes(); ++m) {
    Complex kv = 0.0;
    for (int i = 0; i < f.grid().dim; ++i) kv += double(wt.k[m][i]) * f.comp(i)[m];
    worst = std::max(worst, std::abs(kv));
  }
  return worst;
}

SpectralField laplacian(const SpectralField& f) {
  const auto& wt = wave_table(f.grid());
  SpectralField out = f;
  for (int c = 0; c < f.components(); ++c) {
    auto oc = out.comp(c);
    for (std::size_t m = 0; m < f.modes(); ++m) oc[m] *= -wt.k2[m];
  }
  return out;
}

namespace {

// i k_axis, with the Nyquist wavenumber along that axis differentiated to 0.
Complex ik(const GridSpec& g, const WaveTable& wt, std::size_t m, int axis) {
  const int k = wt.k[m][axis];
  if (k == -g.n / 2) return 0.0;
  return Complex(0.0, double(k));
}

}  // namespace

SpectralField derivative(const SpectralField& f, int axis) {
  const auto& wt = wave_table(f.grid());
  SpectralField out = f;
  for (int c = 0; c < f.components(); ++c) {
    auto oc = out.comp(c);
    for (std::size_t m = 0; m < f.modes(); ++m) oc[m] *= ik(f.grid(), wt, m, axis);
  }
  return out;
}

PhysicalField gradient(const SpectralField& f) {
  const GridSpec& g = f.grid();
  const auto& wt = wave_table(g);
  const int d = g.dim;
  const int nc = f.components();
  PhysicalField out(g, nc * d);
  std::vector<Complex> buf(f.modes());
  for (int i = 0; i < nc; ++i) {
    auto fi = f.comp(i);
    for (int j = 0; j < d; ++j) {
      for (std::size_t m = 0; m < f.modes(); ++m) buf[m] = ik(g, wt, m, j) * fi[m];
      fft::inverse(g, buf, out.comp(i * d + j));
    }
  }
  return out;
}

SpectralField convection(const SpectralField& u_in) {
  const GridSpec& g = u_in.grid();
  const auto& wt = wave_table(g);
  const int d = g.dim;
  const std::size_t np = g.points();
  const PhysicalField u = to_physical(dealias(u_in));
  SpectralField out(g, d);
  std::vector<double> prod(np);
  std::vector<Complex> hat(np);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      auto ui = u.comp(i);
      auto uj = u.comp(j);
      for (std::size_t p = 0; p < np; ++p) prod[p] = ui[p] * uj[p];
      fft::forward(g, prod, hat);
      // d_j (u_i u_j) feeds component i; d_i (u_i u_j) feeds component j.
      auto oi = out.comp(i);
      auto oj = out.comp(j);
      for (std::size_t m = 0; m < np; ++m) {
        oi[m] += ik(g, wt, m, j) * hat[m];
        if (j != i) oj[m] += ik(g, wt, m, i) * hat[m];
      }
    }
  }
  return leray_project(dealias(out));
}

double trilinear(const SpectralField& u, const SpectralField& v,
                 const SpectralField& w) {
  if (!u.compatible(v) || !u.compatible(w)) {
    throw UsageError("trilinear: field shape mismatch");
  }
  const GridSpec& g = u.grid();
  const int d = g.dim;
  const PhysicalField up = to_physical(u);
  const PhysicalField wp = to_physical(w);
  const PhysicalField gv = gradient(v);
  double sum = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p) {
    for (int i = 0; i < d; ++i) {
      double adv = 0.0;
      for (int j = 0; j < d; ++j) adv += up.comp(j)[p] * gv.comp(i * d + j)[p];
      sum += adv * wp.comp(i)[p];
    }
  }
  return sum * g.cell_volume();
}

double inner(const SpectralField& a, const SpectralField& b) {
  if (!a.compatible(b)) throw UsageError("inner: field shape mismatch");
  double s = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) {
    s += ad[i].real() * bd[i].real() + ad[i].imag() * bd[i].imag();
  }
  return s * a.grid().domain_volume();
}

double grad_inner(const SpectralField& a, const SpectralField& b) {
  if (!a.compatible(b)) throw UsageError("grad_inner: field shape mismatch");
  const GridSpec& g = a.grid();
  const auto& wt = wave_table(g);
  double s = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    auto ac = a.comp(c);
    auto bc = b.comp(c);
    for (std::size_t m = 0; m < a.modes(); ++m) {
      double k2 = 0.0;
      for (int j = 0; j < g.dim; ++j) {
        const double kj = std::abs(ik(g, wt, m, j).imag());
        k2 += kj * kj;
      }
      s += k2 * (ac[m].real() * bc[m].real() + ac[m].imag() * bc[m].imag());
    }
  }
  return s * g.domain_volume();
}

double kinetic_energy(const SpectralField& f) { return 0.5 * inner(f, f); }

NormKind parse_norm_kind(std::string_view name) {
  if (name == "L2") return NormKind::kL2;
  if (name == "H1_semi") return NormKind::kH1Semi;
  if (name == "Lp") return NormKind::kLp;
  if (name == "Lipschitz_semi") return NormKind::kLipschitzSemi;
  if (name == "C0") return NormKind::kC0;
  throw UsageError("unknown norm kind '" + std::string(name) + "'");
}

namespace {

double largest_singular_value(const PhysicalField& grad, std::size_t p, int d) {
  if (d == 2) {
    const double a = grad.comp(0)[p], b = grad.comp(1)[p];
    const double c = grad.comp(2)[p], e = grad.comp(3)[p];
    const double fro2 = a * a + b * b + c * c + e * e;
    const double det = a * e - b * c;
    const double disc = std::max(0.0, fro2 * fro2 - 4.0 * det * det);
    return std::sqrt(0.5 * (fro2 + std::sqrt(disc)));
  }
  Eigen::Matrix3d gm;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gm(i, j) = grad.comp(i * 3 + j)[p];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(gm.transpose() * gm, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

double compute_norm(const SpectralField& f, NormKind kind, double p) {
  const GridSpec& g = f.grid();
  switch (kind) {
    case NormKind::kL2:
      return std::sqrt(inner(f, f));
    case NormKind::kH1Semi:
      return std::sqrt(grad_inner(f, f));
    case NormKind::kLp:
    case NormKind::kC0: {
      if (kind == NormKind::kLp && !(p >= 1.0)) throw UsageError("Lp norm needs p >= 1");
      const PhysicalField v = to_physical(f);
      double acc = 0.0;
      for (std::size_t q = 0; q < g.points(); ++q) {
        double m2 = 0.0;
        for (int c = 0; c < f.components(); ++c) m2 += v.comp(c)[q] * v.comp(c)[q];
        const double mag = std::sqrt(m2);
        if (kind == NormKind::kC0) {
          acc = std::max(acc, mag);
        } else {
          acc += std::pow(mag, p);
        }
      }
      return kind == NormKind::kC0 ? acc : std::pow(acc * g.cell_volume(), 1.0 / p);
    }
    case NormKind::kLipschitzSemi: {
      if (f.components() != g.dim) throw UsageError("Lipschitz seminorm needs a vector field");
      const PhysicalField grad = gradient(f);
      double worst = 0.0;
      for (std::size_t q = 0; q < g.points(); ++q) {
        worst = std::max(worst, largest_singular_value(grad, q, g.dim));
      }
      return worst;
    }
  }
  throw UsageError("unknown norm kind");
}

SpectralField random_solenoidal(const GridSpec& grid, int cutoff,
                                double energy, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  PhysicalField noise(grid, grid.dim);
  for (auto& x : noise.data()) x = normal(rng);
  SpectralField f = to_spectral(noise);
  const auto& wt = wave_table(grid);
  for (int c = 0; c < grid.dim; ++c) {
    auto fc = f.comp(c);
    for (std::size_t m = 0; m < f.modes(); ++m) fc[m] /= (1.0 + wt.k2[m]);
    fc[0] = 0.0;
  }
  f = leray_project(truncate(f, cutoff));
  const double e = kinetic_energy(f);
  if (e > 0.0) f *= std::sqrt(energy / e);
  return f;
}

}  // namespace evlab
