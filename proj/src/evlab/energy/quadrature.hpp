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

#include <span>
#include <vector>

namespace evlab {

// Trapezoid rule of samples y over nodes t, restricted to [t[i0], t[i1]].
double trapezoid(std::span<const double> t, std::span<const double> y, std::size_t i0,
                 std::size_t i1);

// Running trapezoid integral: out[i] = int_{t0}^{t_i} y.
std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> y);

// Second-order three-point derivative on a nonuniform grid, one-sided at the
// ends. Two nodes fall back to the difference quotient; one node gives 0.
std::vector<double> fd_derivative(std::span<const double> t, std::span<const double> y);

}  // namespace evlab
