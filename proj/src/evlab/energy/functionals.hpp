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

#include <cstdint>

#include "json.hpp"
#include "evlab/energy/weight.hpp"
#include "evlab/spectral/test_field.hpp"

namespace evlab {

// R(v | vt) = 0.5 ||v - vt||^2. Throws UsageError on grid mismatch.
double relative_energy(const SpectralField& v, const SpectralField& vt);

// <dt vt + (vt . grad) vt - nu Lap vt - f, w> by quadrature at time t.
// forcing may be null.
double system_operator_pairing(const TestField& vt, const SpectralField& w, double nu,
                               const TestField* forcing, double t);

// Same pairing with the samples of vt, dt vt and Lap vt already taken.
double system_operator_pairing(const SpectralField& vt, const SpectralField& vt_dt,
                               const SpectralField& vt_lap, const SpectralField* f,
                               const SpectralField& w, double nu);

// nu > 0: nu ||grad w||^2 - b(w, w, vt) + K(vt) R
// nu = 0: int w^T (grad vt)_sym w + K(vt) R, with w = v - vt.
// Throws UsageError for nu < 0 or a Serrin weight at nu = 0.
double relative_dissipation(const SpectralField& v, const SpectralField& vt, double nu,
                            const RegularityWeight& K);
// Variant with K(vt) precomputed.
double relative_dissipation_with(const SpectralField& v, const SpectralField& vt, double nu,
                                 double K_value);

// Convective and viscous part of W without the K term, for w = v - vt.
double relative_dissipation_core(const SpectralField& w, const SpectralField& vt, double nu);

void check_weight_regime(const RegularityWeight& K, double nu);

// Largest value of -(W core)(w) / R(w) = (-b(w, vt, w) - nu |grad w|^2) / R(w)
// over zero-mean divergence-free w with |k|_inf <= cutoff, by Lanczos. A
// weight is admissible at vt iff K(vt) is at least this value.
double max_relative_growth(const SpectralField& vt, double nu, int cutoff, int iterations = 30,
                           std::uint64_t seed = 7);

struct ProbeOptions {
  GridSpec grid{2, 16};
  int cutoff = 5;
  double energy_min = 1e-2;  // kinetic energy range of sampled test fields
  double energy_max = 1e2;
  double safety = 2.0;
  bool calibrate = true;  // run the worst-case search for every sample
};

struct AdmissibilityReport {
  std::string weight;
  double nu = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  double min_W = 0.0;           // with the weight as given
  double min_W_relative = 0.0;  // min of W / (nu|grad w|^2 + |b| + K R)
  int negative_count = 0;       // samples with W < -1e-10 * scale
  // Safety factor times the smallest constant for which W >= 0 holds for
  // every sampled vt against the worst zero-mean w. Infinite when K(vt) = 0
  // while some w makes the core negative. Zero unless opt.calibrate.
  double calibrated_constant = 0.0;
  nlohmann::json to_json() const;
};

// Randomized (v, vt) pairs drawn deterministically from seed.
AdmissibilityReport admissibility_probe(const RegularityWeight& K, double nu, int sample_count,
                                        std::uint64_t seed, const ProbeOptions& opt = {});

// Serrin weight whose constant is calibrated by the probe.
RegularityWeight calibrated_serrin(int dim, double r, double nu, int sample_count = 200,
                                   std::uint64_t seed = 1);

}  // namespace evlab
