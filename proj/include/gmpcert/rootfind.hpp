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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "gmpcert/errors.hpp"

namespace gmpcert {

enum class BisectStatus { kExactZero, kToleranceReached };

struct BisectResult {
  double root = 0.0;
  std::size_t iterations = 0;
  double width = 0.0;  // half-width of the last bracket
  BisectStatus status = BisectStatus::kToleranceReached;
};

struct GoldenResult {
  double minimizer = 0.0;
  std::size_t iterations = 0;
  std::pair<double, double> final_interval;
};

namespace detail {

constexpr double kExactZero = 1e-300;

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

inline bool is_zero(double v) { return std::abs(v) <= kExactZero; }

template <class F>
double eval_finite(F& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw NonFiniteError("function is not finite inside the bracket");
  return v;
}

}  // namespace detail

/**
 * Bisection for a root of f on the open interval (a, b).
 *
 * Either f(a) and f(b) have opposite signs, or f(a) = 0 and f has the sign
 * of -f(b) immediately to the right of a. In the second case the sign of f
 * at a is taken from a probe at a + delta, delta = min(eps, 1e-6 (b - a)).
 * If the probe already has the sign of f(b) the root lies in (a, a + delta)
 * and a + delta / 2 is returned. The result is always strictly greater
 * than a.
 *
 * Terminates when f(c) is zero (|f(c)| <= 1e-300) or the half-width of the
 * bracket is at most eps.
 */
template <class F>
BisectResult bisect(F&& f, double a, double b, double eps) {
  if (!(a < b)) throw DomainError("bisect: requires a < b");
  if (!(eps > 0.0)) throw DomainError("bisect: requires eps > 0");

  const double fa = f(a);
  const double fb = detail::eval_finite(f, b);
  if (std::isnan(fa)) throw NonFiniteError("bisect: f(a) is NaN");
  if (detail::is_zero(fb)) return {b, 0, 0.0, BisectStatus::kExactZero};

  const int sb = detail::sign_of(fb);
  if (detail::is_zero(fa)) {
    const double delta = std::min(eps, (b - a) * 1e-6);
    const double fp = detail::eval_finite(f, a + delta);
    if (detail::is_zero(fp)) return {a + delta, 0, 0.0, BisectStatus::kExactZero};
    if (detail::sign_of(fp) == sb)
      return {a + 0.5 * delta, 0, 0.5 * delta, BisectStatus::kToleranceReached};
  } else if (detail::sign_of(fa) == sb) {
    throw BracketError("bisect: f(a) and f(b) have the same sign");
  }

  BisectResult r;
  while (true) {
    ++r.iterations;
    const double c = 0.5 * (a + b);
    const double fc = detail::eval_finite(f, c);
    r.root = c;
    r.width = 0.5 * (b - a);
    if (detail::is_zero(fc)) {
      r.status = BisectStatus::kExactZero;
      return r;
    }
    // The second test stops once the bracket has no representable midpoint.
    if (r.width <= eps || c <= a || c >= b) {
      r.status = BisectStatus::kToleranceReached;
      return r;
    }
    if (detail::sign_of(fc) == sb)
      b = c;
    else
      a = c;
  }
}

/// Golden-section search for the minimizer of a unimodal f on [a, b].
/// On a tie f(x1) == f(x2) the right subinterval is dropped.
template <class F>
GoldenResult golden_section(F&& f, double a, double b, double eps) {
  if (!(a < b)) throw DomainError("golden_section: requires a < b");
  if (!(eps > 0.0)) throw DomainError("golden_section: requires eps > 0");

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = detail::eval_finite(f, x1);
  double f2 = detail::eval_finite(f, x2);

  GoldenResult r;
  while (true) {
    ++r.iterations;
    const double width_before = b - a;
    if (f1 <= f2) {
      b = x2;
      if ((b - a) / 2.0 <= eps || !(b - a < width_before)) break;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = detail::eval_finite(f, x1);
    } else {
      a = x1;
      if ((b - a) / 2.0 <= eps || !(b - a < width_before)) break;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = detail::eval_finite(f, x2);
    }
  }
  r.minimizer = 0.5 * (a + b);
  r.final_interval = {a, b};
  return r;
}

/// Finds b with f(a) < f(b) by doubling from max(1, 2a). For convex f this
/// brackets the minimizer in [a, b].
template <class F>
std::pair<double, double> expand_bracket(F&& f, double a) {
  constexpr int kMaxDoublings = 128;
  const double fa = detail::eval_finite(f, a);
  double b = std::max(1.0, 2.0 * a);
  for (int k = 0; k <= kMaxDoublings; ++k) {
    if (fa < f(b)) return {a, b};
    b *= 2.0;
  }
  throw ExpansionError("expand_bracket: no increase found after 128 doublings");
}

}  // namespace gmpcert
