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
#include <span>

#include "evlab/spectral/grid.hpp"

namespace evlab::fft {

// Forward transform of one real scalar array: out = (1/N^d) sum u e^{-ikx}.
void forward(const GridSpec& grid, std::span<const double> in,
             std::span<std::complex<double>> out);

// Inverse transform, keeping the real part: out(x) = Re sum c e^{ikx}.
void inverse(const GridSpec& grid, std::span<const std::complex<double>> in,
             std::span<double> out);

}  // namespace evlab::fft
