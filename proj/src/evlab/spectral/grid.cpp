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

#include "evlab/spectral/grid.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "evlab/common/error.hpp"

namespace evlab {

GridSpec GridSpec::make(int dim, int n) {
  GridSpec g{dim, n};
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (dim != 2 && dim != 3) {
    throw ConfigError("grid dimension must be 2 or 3, got " +
                      std::to_string(dim));
  }
  if (n < 8 || n % 2 != 0) {
    throw ConfigError("points per dimension must be even and >= 8, got " +
                      std::to_string(n));
  }
}

std::size_t GridSpec::points() const {
  std::size_t p = 1;
  for (int a = 0; a < dim; ++a) p *= static_cast<std::size_t>(n);
  return p;
}

double GridSpec::cell_volume() const {
  return std::pow(2.0 * std::numbers::pi / n, dim);
}

double GridSpec::domain_volume() const {
  return std::pow(2.0 * std::numbers::pi, dim);
}

namespace {

WaveTable build_table(const GridSpec& g) {
  WaveTable t;
  const std::size_t np = g.points();
  t.k.resize(np);
  t.k2.resize(np);
  t.kmax.resize(np);
  t.nyquist.resize(np);
  for (std::size_t idx = 0; idx < np; ++idx) {
    std::size_t rest = idx;
    std::array<int, 3> k{0, 0, 0};
    bool nyq = false;
    for (int a = 0; a < g.dim; ++a) {
      const int i = static_cast<int>(rest % g.n);
      rest /= g.n;
      k[a] = i < g.n / 2 ? i : i - g.n;
      if (i == g.n / 2) nyq = true;
    }
    t.k[idx] = k;
    t.k2[idx] = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
    t.kmax[idx] = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
    t.nyquist[idx] = nyq ? 1 : 0;
  }
  return t;
}

}  // namespace

const WaveTable& wave_table(const GridSpec& grid) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<WaveTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{grid.dim, grid.n}];
  if (!slot) slot = std::make_unique<WaveTable>(build_table(grid));
  return *slot;
}

std::array<double, 3> grid_point(const GridSpec& grid, std::size_t flat) {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const double h = 2.0 * std::numbers::pi / grid.n;
  for (int a = 0; a < grid.dim; ++a) {
    x[a] = h * static_cast<double>(flat % grid.n);
    flat /= grid.n;
  }
  return x;
}

}  // namespace evlab
