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

#include <cmath>
#include <random>

#include "evlab/solver/config.hpp"
#include "evlab/spectral/field.hpp"

namespace evlab::testing {

inline SpectralField random_physical(const GridSpec& g, int comps, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  PhysicalField p(g, comps);
  for (auto& x : p.data()) x = nd(rng);
  return to_spectral(p);
}

inline double rel_diff(const SpectralField& a, const SpectralField& b) {
  const double nb = compute_norm(b, NormKind::kL2);
  return compute_norm(a - b, NormKind::kL2) / (nb > 0 ? nb : 1.0);
}

// Gradient of a scalar field, returned as a d-component field.
inline SpectralField scalar_gradient(const SpectralField& phi) {
  const GridSpec& g = phi.grid();
  SpectralField out(g, g.dim);
  for (int j = 0; j < g.dim; ++j) {
    const SpectralField dj = derivative(phi, j);
    auto oc = out.comp(j);
    auto src = dj.comp(0);
    for (std::size_t m = 0; m < out.modes(); ++m) oc[m] = src[m];
  }
  return out;
}

// Taylor-Green run at N = 32, nu = 0.1, dt = 1e-3 over [0, T].
inline SolverConfig taylor_green_config(double T = 1.0, int stride = 1) {
  SolverConfig c;
  c.grid = GridSpec::make(2, 32);
  c.nu = 0.1;
  c.dt = 1e-3;
  c.t_final = T;
  c.cutoff = 10;
  c.snapshot_stride = stride;
  return c;
}

// Random smooth run at N = 32 with a visible cascade.
inline SolverConfig random_config(double nu = 0.02, double T = 1.0, int stride = 1) {
  SolverConfig c = taylor_green_config(T, stride);
  c.nu = nu;
  c.ic = "random";
  c.ic_cutoff = 6;
  c.ic_amplitude = 2.0;
  c.seed = 5;
  return c;
}

}  // namespace evlab::testing
