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

/**
 * Worst-case E[(X - q)_+] over nonnegative X with E[X] = M1 and
 * E[e^{tX}] = Me.
 *
 * Solved for the rate-one variable tX (M1_hat = t M1, q_hat = t q). With
 * a = M1_hat / (Me - 1) and v1 the solution above M1_hat of
 * e^v = v / a + 1, the optimal support is
 *
 *   - {0, v1} when q_hat <= v1 + a - 1 (boundary branch);
 *   - {u, v2} otherwise, where u is a root of phi() in (0, min{M1_hat, q_hat}).
 *
 * For large q_hat the root u lies within about e^{-q_hat} of M1_hat, so the
 * interior branch is solved for delta = M1_hat - u by bisection on ln(delta)
 * of a log-domain residual with the same sign as phi().
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gmpcert/core.hpp"
#include "gmpcert/errors.hpp"
#include "gmpcert/lambertw.hpp"
#include "gmpcert/rootfind.hpp"

namespace gmpcert {

struct OneExpInstance {
  double M1 = 1.0;
  double Me = 8.0;
  double t = 1.0;
  double q = 1.0;

  static constexpr double kMaxExponent = 700.0;

  void validate() const {
    if (!std::isfinite(M1) || !std::isfinite(Me) || !std::isfinite(t) || !std::isfinite(q))
      throw DomainError("mp1e: parameters must be finite");
    if (!(t > 0.0)) throw DomainError("mp1e: requires t > 0");
    if (!(M1 > 0.0)) throw DomainError("mp1e: requires M1 > 0");
    if (!(q > 0.0)) throw DomainError("mp1e: requires q > 0");
    if (t * M1 > kMaxExponent || t * q > kMaxExponent)
      throw RangeError("mp1e: t*q and t*M1 must not exceed 700");
    if (!(Me > std::exp(t * M1))) throw InfeasibleError("mp1e: requires Me > e^{t M1}");
  }
};

/// Rate-one form of a OneExpInstance.
struct OneExpScaled {
  double M1;
  double Me;
  double q;

  static OneExpScaled from(const OneExpInstance& inst) {
    return {inst.t * inst.M1, inst.Me, inst.t * inst.q};
  }

  double slope_ratio() const { return M1 / (Me - 1.0); }
};

struct OneExpReport {
  double value = 0.0;
  DiscreteDistribution dist;
  DualCertificate cert;
  Branch branch = Branch::kBoundary;
  double v1 = 0.0;             // rate-one units
  std::optional<double> root;  // phi root u, rate-one units
  std::size_t bisect_iters = 0;
  VerificationReport verification;
};

inline GmpInstance make_gmp_1e(const OneExpInstance& inst, double max_support = 0.0) {
  GmpInstance g;
  g.g = moments::plus_part(inst.q);
  g.hs = {moments::constant(), moments::identity(), moments::exponential(inst.t)};
  g.ms = {1.0, inst.M1, inst.Me};
  g.sense = Sense::kMax;
  const double cap = OneExpInstance::kMaxExponent / inst.t;
  g.support_hi =
      std::max(max_support, std::min(default_support_hi(max_support, inst.q, inst.M1), cap));
  return g;
}

/// v1 = -W_{-1}(-a e^{-a}) - a with a = M1 / (Me - 1).
inline double compute_v1(const OneExpScaled& s) {
  const double a = s.slope_ratio();
  return -lambert_w_minus1(-a * std::exp(-a)).w - a;
}

/// Scaled boundary/interior threshold v1 + M1 / (Me - 1) - 1.
inline double branch_threshold(const OneExpScaled& s) {
  return compute_v1(s) + s.slope_ratio() - 1.0;
}

/// Phi(y) for the rate-one instance, 0 <= y < M1.
inline double phi(double y, const OneExpScaled& s) {
  if (y < 0.0) throw DomainError("phi: requires y >= 0");
  if (!(y < s.M1)) throw NonFiniteError("phi: pole at y = M1");
  const double ey = std::exp(y);
  const double r = (s.Me - ey) / (s.M1 - y);
  const double out = r * (s.q + 1.0 - s.M1) - ey - std::exp(s.q + 1.0 - ey / r) + s.Me;
  if (!std::isfinite(out)) throw NonFiniteError("phi: non-finite value");
  return out;
}

namespace detail {

/**
 * ln(r (q + 1 - y)) - v2(y) with y = M1 - e^{ell}, r = (Me - e^y) / (M1 - y).
 * Positive exactly where phi(y) is, and finite for every ell.
 */
inline double psi_log(double ell, const OneExpScaled& s) {
  const double delta = std::exp(ell);
  const double y = s.M1 - delta;
  const double ey = std::exp(y);
  const double gap = s.Me - ey;
  return std::log(gap) - ell + std::log(s.q + 1.0 - y) - (s.q + 1.0) + ey * delta / gap;
}

struct InteriorPoint {
  double delta;  // M1 - u
  double u;
  double v2;
  double value;  // rate-one units
  std::size_t iterations;
  double width;    // final half-width in ln(delta)
  double bracket;  // initial bracket length in ln(delta)
};

inline InteriorPoint interior_1e(const OneExpScaled& s, double eps) {
  auto f = [&](double ell) { return psi_log(ell, s); };
  const double hi = std::log(s.M1);  // y = 0
  double lo;
  if (s.M1 > s.q) {
    lo = std::log(s.M1 - s.q);  // y = q
  } else {
    // Leading-order root when delta is small; step down until psi > 0.
    const double guess = std::log(s.Me - std::exp(s.M1)) + std::log(s.q + 1.0 - s.M1) -
                         (s.q + 1.0);
    double step = 1.0;
    lo = std::min(guess, hi) - step;
    for (int k = 0; k < 64 && !(f(lo) > 0.0); ++k) {
      step *= 2.0;
      lo -= step;
    }
  }
  if (!(f(hi) < 0.0) || !(f(lo) > 0.0))
    throw RootBracketError("solve_1e: phi does not change sign on (0, min{M1, q})");
  const BisectResult br = bisect(f, lo, hi, eps);
  InteriorPoint p;
  p.delta = std::exp(br.root);
  p.u = s.M1 - p.delta;
  const double eu = std::exp(p.u);
  p.v2 = s.q + 1.0 - eu * p.delta / (s.Me - eu);
  p.value = (p.v2 - s.q) * p.delta / (p.v2 - p.u);
  p.iterations = br.iterations;
  p.width = br.width;
  p.bracket = hi - lo;
  return p;
}

}  // namespace detail

inline OneExpReport solve_1e(const OneExpInstance& inst, double eps = 1e-12,
                             const ToleranceSet& tol = {}) {
  inst.validate();
  if (!(eps > 0.0)) throw DomainError("solve_1e: requires eps > 0");

  const OneExpScaled s = OneExpScaled::from(inst);
  const double t = inst.t;

  OneExpReport r;
  r.v1 = compute_v1(s);
  RealVector z(3);
  if (s.q <= r.v1 + s.slope_ratio() - 1.0) {
    const double v1 = r.v1;
    r.branch = Branch::kBoundary;
    r.value = s.M1 * (1.0 - s.q / v1) / t;
    r.dist = DiscreteDistribution({{0.0, 1.0 - s.M1 / v1}, {v1 / t, s.M1 / v1}});
    const double ev = std::exp(v1);
    const double d = ev * (v1 - 1.0) + 1.0;
    z = {-s.q / d / t, (ev * (v1 - 1.0 - s.q) + 1.0) / d, s.q / d / t};
  } else {
    r.branch = Branch::kInterior;
    const detail::InteriorPoint ip = detail::interior_1e(s, eps);
    const double u = ip.u;
    const double v2 = ip.v2;
    r.root = u;
    r.bisect_iters = ip.iterations;
    r.value = ip.value / t;
    r.dist = DiscreteDistribution(
        {{u / t, (v2 - s.M1) / (v2 - u)}, {v2 / t, ip.delta / (v2 - u)}});
    const double eu = std::exp(u);
    const double delta = eu * std::expm1(v2 - u);
    z = {(u - 1.0) * eu / delta / t, -eu / delta, 1.0 / delta / t};
  }
  r.cert = DualCertificate(std::move(z));
  r.verification =
      verify_optimality(make_gmp_1e(inst, r.dist.max_support()), r.dist, r.cert, tol);
  return r;
}

/// Worst-case value alone, without certificate or the t q <= 700 limit.
/// Beyond that limit the value underflows gracefully towards zero.
inline double worst_case_value_1e(const OneExpInstance& inst, double eps = 1e-12) {
  OneExpInstance capped = inst;
  capped.q = std::min(inst.q, OneExpInstance::kMaxExponent / inst.t);
  capped.validate();
  if (!(eps > 0.0)) throw DomainError("worst_case_value_1e: requires eps > 0");
  const OneExpScaled s = OneExpScaled::from(inst);
  const double v1 = compute_v1(s);
  if (s.q <= v1 + s.slope_ratio() - 1.0) return s.M1 * (1.0 - s.q / v1) / inst.t;
  return detail::interior_1e(s, eps).value / inst.t;
}

/// Worst-case value as a function of the order quantity. `base.q` is ignored.
inline std::vector<CurvePoint> value_curve_1e(const OneExpInstance& base,
                                              std::span<const double> q_grid,
                                              double eps = 1e-12) {
  std::vector<CurvePoint> out;
  out.reserve(q_grid.size());
  for (std::size_t k = 0; k < q_grid.size(); ++k) {
    if (k > 0 && !(q_grid[k] > q_grid[k - 1]))
      throw DomainError("value_curve_1e: q grid must be strictly ascending");
    OneExpInstance inst = base;
    inst.q = q_grid[k];
    const OneExpReport r = solve_1e(inst, eps);
    out.push_back({inst.q, r.value, r.branch, r.root, r.bisect_iters});
  }
  return out;
}

}  // namespace gmpcert
