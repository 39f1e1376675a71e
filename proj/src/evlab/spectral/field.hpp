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

#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "evlab/spectral/grid.hpp"

namespace evlab {

using Complex = std::complex<double>;

// Truncated Fourier coefficients of a real vector field on the torus,
// normalized so that u(x) = sum_k c_k e^{ik.x}. Components are stored
// one after another, each over the flat wavevector index.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(const GridSpec& grid, int components);

  const GridSpec& grid() const { return grid_; }
  int components() const { return ncomp_; }
  std::size_t modes() const { return grid_.points(); }

  std::span<Complex> comp(int c) {
    return {coeffs_.data() + c * modes(), modes()};
  }
  std::span<const Complex> comp(int c) const {
    return {coeffs_.data() + c * modes(), modes()};
  }
  std::span<Complex> data() { return coeffs_; }
  std::span<const Complex> data() const { return coeffs_; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);
  // this += a * o
  SpectralField& axpy(double a, const SpectralField& o);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) {
    return a += b;
  }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) {
    return a -= b;
  }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  bool all_finite() const;
  bool compatible(const SpectralField& o) const {
    return grid_ == o.grid_ && ncomp_ == o.ncomp_;
  }

 private:
  GridSpec grid_{};
  int ncomp_ = 0;
  std::vector<Complex> coeffs_;
};

// Real samples at collocation points, component-major.
class PhysicalField {
 public:
  PhysicalField() = default;
  PhysicalField(const GridSpec& grid, int components);

  const GridSpec& grid() const { return grid_; }
  int components() const { return ncomp_; }
  std::size_t points() const { return grid_.points(); }

  std::span<double> comp(int c) { return {values_.data() + c * points(), points()}; }
  std::span<const double> comp(int c) const {
    return {values_.data() + c * points(), points()};
  }
  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }

 private:
  GridSpec grid_{};
  int ncomp_ = 0;
  std::vector<double> values_;
};

PhysicalField to_physical(const SpectralField& f);
SpectralField to_spectral(const PhysicalField& f);

// Modewise (I - k k^T/|k|^2); Nyquist modes are removed, k = 0 untouched.
SpectralField leray_project(const SpectralField& f);
// Zero every mode with |k|_inf > cutoff.
SpectralField truncate(const SpectralField& f, int cutoff);
// 2/3 rule: truncate at floor(n/3).
SpectralField dealias(const SpectralField& f);
// max_k |k . c(k)|
double max_divergence(const SpectralField& f);

SpectralField laplacian(const SpectralField& f);
// Spectral derivative d/dx_axis of every component.
SpectralField derivative(const SpectralField& f, int axis);
// Physical-space gradient, component (i*d + j) = d_j f_i.
PhysicalField gradient(const SpectralField& f);

// Leray projection of div(u (x) u), dealiased with the 2/3 rule.
SpectralField convection(const SpectralField& u);

// b(u, v, w) = int (u . grad) v . w dx by collocation quadrature.
double trilinear(const SpectralField& u, const SpectralField& v,
                 const SpectralField& w);

// L2 inner products via Parseval.
double inner(const SpectralField& a, const SpectralField& b);
double grad_inner(const SpectralField& a, const SpectralField& b);
double kinetic_energy(const SpectralField& f);  // 0.5 * ||f||^2

enum class NormKind { kL2, kH1Semi, kLp, kLipschitzSemi, kC0 };
NormKind parse_norm_kind(std::string_view name);
double compute_norm(const SpectralField& f, NormKind kind, double p = 2.0);

// Random real divergence-free field supported in |k|_inf <= cutoff with a
// k^-2 amplitude envelope, rescaled to the requested kinetic energy.
SpectralField random_solenoidal(const GridSpec& grid, int cutoff,
                                double energy, std::mt19937_64& rng);

}  // namespace evlab
