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

#include <array>
#include <cstddef>
#include <vector>

namespace evlab {

// Periodic grid on the torus [0, 2*pi)^dim with n collocation points per
// direction. Flat indices are x-fastest: idx = i0 + n*(i1 + n*i2).
struct GridSpec {
  int dim = 2;
  int n = 32;

  // Validates d in {2,3}, n even and n >= 8; throws ConfigError otherwise.
  static GridSpec make(int dim, int n);
  void validate() const;

  std::size_t points() const;
  int dealias_cutoff() const { return n / 3; }
  double cell_volume() const;
  double domain_volume() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Per-grid wavevector tables, built once and shared.
struct WaveTable {
  std::vector<std::array<int, 3>> k;  // integer wavevector per flat index
  std::vector<double> k2;             // |k|^2
  std::vector<int> kmax;              // |k|_inf
  std::vector<unsigned char> nyquist; // any |k_i| == n/2
};

const WaveTable& wave_table(const GridSpec& grid);

// Physical coordinate of a flat index.
std::array<double, 3> grid_point(const GridSpec& grid, std::size_t flat);

}  // namespace evlab
