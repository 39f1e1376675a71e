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

namespace evlab {

// Nonnegative plateau profile in time: zero outside (a, b), equal to
// height on [a + ramp, b - ramp], joined by degree-7 smoothstep ramps whose
// first three derivatives vanish at both ends. ramp = (b - a) / 2 gives a
// single bump.
class TimeProfile {
 public:
  TimeProfile() = default;
  // Throws UsageError unless a < b, 0 < ramp <= (b - a)/2, height >= 0.
  TimeProfile(double a, double b, double ramp, double height = 1.0);
  static TimeProfile bump(double center, double half_width, double height = 1.0);
  static TimeProfile zero();

  double a() const { return a_; }
  double b() const { return b_; }
  double ramp() const { return ramp_; }
  double height() const { return height_; }
  bool is_zero() const { return height_ == 0.0; }

  double value(double t) const;
  double derivative(double t) const;
  // Exact integral over the real line.
  double integral() const;
  // max |psi| and max |psi'|.
  double sup() const { return height_; }

  std::string id() const;
  nlohmann::json to_json() const;

 private:
  double a_ = 0.0, b_ = 1.0, ramp_ = 0.5, height_ = 0.0;
};

}  // namespace evlab
