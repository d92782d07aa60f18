// Copyright 2026 The gmpcert Authors
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

#pragma once

// Real branches W_0 and W_{-1} of the Lambert W function, i.e. the solutions
// w of w e^w = x. Initial guesses come from the branch-point series or the
// logarithmic asymptotics and are refined by Halley iteration, with a
// bisection fallback if Halley fails to settle within 100 steps.

#include <cmath>
#include <numbers>

#include "gmpcert/errors.hpp"

namespace gmpcert {

struct WValue {
  double w = 0.0;
  double residual = 0.0;  // |w e^w - x|
};

namespace detail {

constexpr double kInvE = 1.0 / std::numbers::e;

inline double lambert_residual(double w, double x) { return std::abs(w * std::exp(w) - x); }

// p = +-sqrt(2 (1 + e x)); series of W about the branch point -1/e.
inline double branch_series(double p) {
  return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

template <class Bracket>
double halley(double w, double x, Bracket fallback) {
  for (int k = 0; k < 100; ++k) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (f == 0.0) return w;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (!std::isfinite(denom) || denom == 0.0) break;
    const double step = f / denom;
    const double next = w - step;
    if (!std::isfinite(next)) break;
    if (std::abs(next - w) <= 1e-15 * std::abs(next)) return next;
    w = next;
  }
  return fallback();
}

// Bisection of w e^w - x on [lo, hi]; the caller guarantees a sign change.
inline double lambert_bisect(double lo, double hi, double x) {
  double flo = lo * std::exp(lo) - x;
  for (int k = 0; k < 2000; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = mid * std::exp(mid) - x;
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// W_{-1}(x) for x in [-1/e, 0); the result is <= -1.
inline WValue lambert_w_minus1(double x) {
  if (!(x >= -detail::kInvE && x < 0.0))
    throw DomainError("lambert_w_minus1: argument outside [-1/e, 0)");
  if (x - (-detail::kInvE) <= 1e-12) return {-1.0, detail::lambert_residual(-1.0, x)};

  double w0;
  if (x < -0.25) {
    w0 = detail::branch_series(-std::sqrt(2.0 * (1.0 + std::numbers::e * x)));
  } else {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w0 = l1 - l2 + l2 / l1;
  }
  if (w0 > -1.0) w0 = -1.0 - 1e-8;

  // On the -1 branch w e^w increases from x = 0^- (w -> -inf) to -1/e (w = -1).
  auto fallback = [x] {
    double lo = -1.0;
    while (lo * std::exp(lo) > x) lo *= 2.0;
    return detail::lambert_bisect(lo, -1.0, x);
  };
  double w = detail::halley(w0, x, fallback);
  if (w > -1.0) w = -1.0;
  return {w, detail::lambert_residual(w, x)};
}

/// W_0(x) for x >= -1/e; the result is >= -1.
inline WValue lambert_w_0(double x) {
  if (!(x >= -detail::kInvE)) throw DomainError("lambert_w_0: argument below -1/e");
  if (std::isinf(x)) throw DomainError("lambert_w_0: argument is infinite");
  if (x == 0.0) return {0.0, 0.0};
  if (x - (-detail::kInvE) <= 1e-12) return {-1.0, detail::lambert_residual(-1.0, x)};

  double w0;
  if (x < -0.25) {
    w0 = detail::branch_series(std::sqrt(2.0 * (1.0 + std::numbers::e * x)));
  } else if (x < 3.0) {
    w0 = std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w0 = l1 - l2 + l2 / l1;
  }
  if (w0 < -1.0) w0 = -1.0 + 1e-8;

  auto fallback = [x] {
    double hi = 1.0;
    while (hi * std::exp(hi) < x) hi *= 2.0;
    return detail::lambert_bisect(-1.0, hi, x);
  };
  double w = detail::halley(w0, x, fallback);
  if (w < -1.0) w = -1.0;
  return {w, detail::lambert_residual(w, x)};
}

}  // namespace gmpcert
