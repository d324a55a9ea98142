// Copyright 2026 The mecwpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mecwpt/lambert.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mecwpt/error.hpp"

namespace mecwpt {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e
constexpr double kSlack = 1e-15;
constexpr int kMaxIter = 50;

double initial_guess(double x) {
  if (x < -0.25) {
    // Series about the branch point in p = sqrt(2 (e x + 1)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  }
  if (x < 3.0) return std::log1p(x);
  const double lx = std::log(x);
  return lx - std::log(lx);
}

}  // namespace

LambertResult lambert_w0(double x) {
  if (std::isnan(x) || x < -kInvE - kSlack)
    throw DomainError("lambert_w0: x = " + std::to_string(x) +
                      " below branch point -1/e");
  if (x <= -kInvE) return {-1.0, 0, std::abs(-kInvE - x)};
  if (x == 0.0) return {0.0, 0, 0.0};
  if (std::isinf(x)) return {x, 0, 0.0};

  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  double w = initial_guess(x);
  LambertResult r;
  for (int it = 1; it <= kMaxIter; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    r.iterations = it;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    double next = w - step;
    if (next < -1.0) next = -1.0 + 0.5 * (w + 1.0);  // stay on W0
    const bool done = std::abs(next - w) <= 1e-16 * (1.0 + std::abs(w));
    w = next;
    if (done) break;
  }
  r.value = w;
  r.residual = std::abs(w * std::exp(w) - x);
  // Halley can stall one ulp away near the branch point; a Newton polish
  // settles it.
  for (int extra = 0; extra < 4 && r.residual > tol; ++extra) {
    const double ew = std::exp(w);
    const double d = ew * (w + 1.0);
    if (d == 0.0) break;
    w -= (w * ew - x) / d;
    r.value = w;
    r.residual = std::abs(w * std::exp(w) - x);
  }
  return r;
}

}  // namespace mecwpt
