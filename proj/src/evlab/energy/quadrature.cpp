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


#include "evlab/energy/quadrature.hpp"

namespace evlab {

double trapezoid(std::span<const double> t, std::span<const double> y, std::size_t i0,
                 std::size_t i1) {
  double s = 0.0;
  for (std::size_t i = i0; i < i1; ++i) s += 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
  return s;
}

std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> y) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  }
  return out;
}

std::vector<double> fd_derivative(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (t[1] - t[0]);
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] +
           h1 / (h2 * (h1 + h2)) * y[i + 1];
  }
  {
    const double h1 = t[1] - t[0], h2 = t[2] - t[1];
    d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] -
           h1 / (h2 * (h1 + h2)) * y[2];
  }
  {
    const double a = t[n - 1] - t[n - 2], b = t[n - 2] - t[n - 3];
    d[n - 1] = (2 * a + b) / (a * (a + b)) * y[n - 1] - (a + b) / (a * b) * y[n - 2] +
               a / (b * (a + b)) * y[n - 3];
  }
  return d;
}

}  // namespace evlab
