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

#include <string>

#include "json.hpp"
#include "evlab/spectral/field.hpp"
#include "evlab/spectral/test_field.hpp"

namespace evlab {

// Regularity weight K acting on test fields. Serrin: c ||v||_{L^r}^s with
// 2/s + d/r = 1; Lipschitz: factor * |v|_{C^{0,1}}; Zero.
class RegularityWeight {
 public:
  enum class Kind { kZero, kSerrin, kLipschitz };

  static RegularityWeight zero();
  // Throws UsageError unless r in (d, inf), s in (2, inf), c > 0 and
  // |2/s + d/r - 1| <= 1e-12.
  static RegularityWeight serrin(int dim, double r, double s, double c);
  // s determined from the exponent identity.
  static RegularityWeight serrin_from_r(int dim, double r, double c);
  static RegularityWeight lipschitz(double factor = 2.0);
  // Parses "zero", "lipschitz[:factor]", "serrin:r:s:c".
  static RegularityWeight parse(const std::string& text, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double r() const { return r_; }
  double s() const { return s_; }
  // Serrin c or Lipschitz factor.
  double constant() const { return constant_; }
  RegularityWeight with_constant(double c) const;

  // K(a v) = |a|^degree K(v).
  double homogeneity_degree() const { return kind_ == Kind::kSerrin ? s_ : 1.0; }
  bool rank_one_homogeneous() const { return kind_ != Kind::kSerrin; }

  // K with the constant set to one.
  double base(const SpectralField& v) const;
  double operator()(const SpectralField& v) const { return constant_ * base(v); }
  double operator()(const TestField& v, const GridSpec& grid, double t) const;

  std::string spec() const;
  nlohmann::json to_json() const;

 private:
  Kind kind_ = Kind::kZero;
  int dim_ = 0;
  double r_ = 0.0;
  double s_ = 0.0;
  double constant_ = 0.0;
};

}  // namespace evlab
