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


#include "evlab/energy/time_profile.hpp"

#include <cmath>
#include <cstdio>

#include "evlab/common/error.hpp"

namespace evlab {

namespace {

// 35u^4 - 84u^5 + 70u^6 - 20u^7 and its derivative 140 u^3 (1-u)^3.
double smooth(double u) { return u * u * u * u * (35 + u * (-84 + u * (70 - 20 * u))); }
double dsmooth(double u) {
  const double v = u * (1 - u);
  return 140 * v * v * v;
}

}  // namespace

TimeProfile::TimeProfile(double a, double b, double ramp, double height)
    : a_(a), b_(b), ramp_(ramp), height_(height) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw UsageError("time profile needs a < b");
  }
  if (!(ramp > 0 && ramp <= 0.5 * (b - a) * (1 + 1e-12))) {
    throw UsageError("time profile ramp must lie in (0, (b-a)/2]");
  }
  if (!(height >= 0) || !std::isfinite(height)) {
    throw UsageError("time profile must be nonnegative");
  }
  ramp_ = std::min(ramp, 0.5 * (b - a));
}

TimeProfile TimeProfile::bump(double center, double half_width, double height) {
  return TimeProfile(center - half_width, center + half_width, half_width, height);
}

TimeProfile TimeProfile::zero() { return TimeProfile(0.0, 1.0, 0.5, 0.0); }

double TimeProfile::value(double t) const {
  if (height_ == 0.0 || t <= a_ || t >= b_) return 0.0;
  if (t < a_ + ramp_) return height_ * smooth((t - a_) / ramp_);
  if (t > b_ - ramp_) return height_ * smooth((b_ - t) / ramp_);
  return height_;
}

double TimeProfile::derivative(double t) const {
  if (height_ == 0.0 || t <= a_ || t >= b_) return 0.0;
  if (t < a_ + ramp_) return height_ * dsmooth((t - a_) / ramp_) / ramp_;
  if (t > b_ - ramp_) return -height_ * dsmooth((b_ - t) / ramp_) / ramp_;
  return 0.0;
}

double TimeProfile::integral() const {
  // each ramp integrates to ramp / 2
  return height_ * (b_ - a_ - ramp_);
}

std::string TimeProfile::id() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "profile(%.6g,%.6g,%.6g,%.6g)", a_, b_, ramp_, height_);
  return buf;
}

nlohmann::json TimeProfile::to_json() const {
  return {{"a", a_}, {"b", b_}, {"ramp", ramp_}, {"height", height_}};
}

}  // namespace evlab
