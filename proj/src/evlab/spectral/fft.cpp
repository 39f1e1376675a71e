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

#include "evlab/spectral/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace evlab::fft {

namespace {

// FFTW planning is not thread safe; execution with the new-array interface
// is. Plans are created once per (dim, n, sign) and released at exit.
struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, p] : plans) fftw_destroy_plan(p);
    fftw_cleanup();
  }
};

fftw_plan plan_for(const GridSpec& grid, int sign) {
  static PlanCache cache;
  std::lock_guard<std::mutex> lock(cache.mu);
  auto key = std::make_tuple(grid.dim, grid.n, sign);
  auto it = cache.plans.find(key);
  if (it != cache.plans.end()) return it->second;
  const std::size_t np = grid.points();
  std::vector<std::complex<double>> a(np), b(np);
  int dims[3] = {grid.n, grid.n, grid.n};
  fftw_plan p = fftw_plan_dft(grid.dim, dims,
                              reinterpret_cast<fftw_complex*>(a.data()),
                              reinterpret_cast<fftw_complex*>(b.data()), sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.plans.emplace(key, p);
  return p;
}

std::vector<std::complex<double>>& scratch(std::size_t n) {
  thread_local std::vector<std::complex<double>> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

}  // namespace

void forward(const GridSpec& grid, std::span<const double> in,
             std::span<std::complex<double>> out) {
  const std::size_t np = grid.points();
  auto& buf = scratch(np);
  for (std::size_t i = 0; i < np; ++i) buf[i] = in[i];
  fftw_execute_dft(plan_for(grid, FFTW_FORWARD),
                   reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(np);
  for (std::size_t i = 0; i < np; ++i) out[i] *= scale;
}

void inverse(const GridSpec& grid, std::span<const std::complex<double>> in,
             std::span<double> out) {
  const std::size_t np = grid.points();
  auto& buf = scratch(2 * np);
  std::copy(in.begin(), in.begin() + np, buf.begin());
  fftw_execute_dft(plan_for(grid, FFTW_BACKWARD),
                   reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(buf.data() + np));
  for (std::size_t i = 0; i < np; ++i) out[i] = buf[np + i].real();
}

}  // namespace evlab::fft
