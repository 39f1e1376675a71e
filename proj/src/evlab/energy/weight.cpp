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


#include "evlab/energy/weight.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "evlab/common/error.hpp"

namespace evlab {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

RegularityWeight RegularityWeight::zero() { return RegularityWeight{}; }

RegularityWeight RegularityWeight::serrin(int dim, double r, double s, double c) {
  if (dim != 2 && dim != 3) throw UsageError("Serrin weight: dimension must be 2 or 3");
  if (!(r > dim) || !std::isfinite(r)) throw UsageError("Serrin weight: r must lie in (d, inf)");
  if (!(s > 2) || !std::isfinite(s)) throw UsageError("Serrin weight: s must lie in (2, inf)");
  if (!(c > 0) || !std::isfinite(c)) throw UsageError("Serrin weight: c must be positive");
  if (std::abs(2.0 / s + dim / r - 1.0) > 1e-12) {
    throw UsageError("Serrin weight: exponents violate 2/s + d/r = 1 (r=" + fmt(r) +
                     ", s=" + fmt(s) + ")");
  }
  RegularityWeight k;
  k.kind_ = Kind::kSerrin;
  k.dim_ = dim;
  k.r_ = r;
  k.s_ = s;
  k.constant_ = c;
  return k;
}

RegularityWeight RegularityWeight::serrin_from_r(int dim, double r, double c) {
  if (!(r > dim)) throw UsageError("Serrin weight: r must lie in (d, inf)");
  return serrin(dim, r, 2.0 * r / (r - dim), c);
}

RegularityWeight RegularityWeight::lipschitz(double factor) {
  if (!(factor > 0) || !std::isfinite(factor)) {
    throw UsageError("Lipschitz weight: factor must be positive");
  }
  RegularityWeight k;
  k.kind_ = Kind::kLipschitz;
  k.constant_ = factor;
  return k;
}

RegularityWeight RegularityWeight::parse(const std::string& text, int dim) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  auto num = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      const double v = std::stod(parts.at(i), &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad regularity weight '" + text + "'");
    }
  };
  if (parts.size() == 1 && parts[0] == "zero") return zero();
  if (!parts.empty() && parts[0] == "lipschitz" && parts.size() <= 2) {
    return lipschitz(parts.size() == 2 ? num(1) : 2.0);
  }
  if (parts.size() == 4 && parts[0] == "serrin") return serrin(dim, num(1), num(2), num(3));
  throw UsageError("bad regularity weight '" + text +
                   "' (expected zero, lipschitz[:factor] or serrin:r:s:c)");
}

RegularityWeight RegularityWeight::with_constant(double c) const {
  if (kind_ == Kind::kSerrin) return serrin(dim_, r_, s_, c);
  if (kind_ == Kind::kLipschitz) return lipschitz(c);
  return *this;
}

double RegularityWeight::base(const SpectralField& v) const {
  switch (kind_) {
    case Kind::kZero: return 0.0;
    case Kind::kSerrin: {
      if (v.grid().dim != dim_) throw UsageError("Serrin weight: dimension mismatch");
      return std::pow(compute_norm(v, NormKind::kLp, r_), s_);
    }
    case Kind::kLipschitz: return compute_norm(v, NormKind::kLipschitzSemi);
  }
  return 0.0;
}

double RegularityWeight::operator()(const TestField& v, const GridSpec& grid, double t) const {
  if (kind_ == Kind::kZero) return 0.0;
  return (*this)(v.sample(grid, t));
}

std::string RegularityWeight::spec() const {
  switch (kind_) {
    case Kind::kZero: return "zero";
    case Kind::kSerrin: return "serrin:" + fmt(r_) + ":" + fmt(s_) + ":" + fmt(constant_);
    case Kind::kLipschitz: return "lipschitz:" + fmt(constant_);
  }
  return "zero";
}

nlohmann::json RegularityWeight::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::kZero: j["kind"] = "zero"; break;
    case Kind::kSerrin:
      j = {{"kind", "serrin"}, {"r", r_}, {"s", s_}, {"c", constant_}, {"dim", dim_}};
      break;
    case Kind::kLipschitz: j = {{"kind", "lipschitz"}, {"factor", constant_}}; break;
  }
  j["rank_one_homogeneous"] = rank_one_homogeneous();
  return j;
}

}  // namespace evlab
