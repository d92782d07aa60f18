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

// Reference routines for the tests. Nothing here calls into the library, so
// results computed with these helpers are independent of the code under test.

#include <cmath>
#include <functional>

namespace testsupport {

/// Plain bisection on a sign change, 200 halvings.
inline double ref_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
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

/// Worst-case E[(X - q)_+] given mean mu and variance var, valid when the
/// two-point optimum has both atoms positive.
inline double mean_variance_bound(double mu, double var, double q) {
  return 0.5 * (std::sqrt(var + (q - mu) * (q - mu)) - (q - mu));
}

/// Theta evaluated literally from its defining expression (mean-one scale).
inline double theta_direct(double y, double Mt, double t, double q) {
  const double c = t * q / (t - 1.0);
  const double u = c * (std::pow(y, t - 1.0) - Mt) / (std::pow(y, t) - Mt);
  return (std::pow(y, t) - Mt) / (y - 1.0) * (1.0 - u) + std::pow(u, t) - Mt;
}

/// Solution v > M1 of e^v = (Me - 1) v / M1 + 1.
inline double ref_v1(double M1, double Me) {
  const double k = (Me - 1.0) / M1;
  auto f = [k](double v) { return std::exp(v) - k * v - 1.0; };
  double hi = 2.0 * M1 + 1.0;
  while (f(hi) <= 0.0) hi *= 2.0;
  // f < 0 on (0, v1): f(0) = 0 and f'(0) = 1 - k < 0 because Me - 1 > M1.
  return ref_root(f, M1, hi);
}

}  // namespace testsupport
