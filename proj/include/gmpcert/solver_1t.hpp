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
 * E[X^t] = Mt, t > 1.
 *
 * The problem is solved on the scaled variable X / M1 (mean one). With
 * s = Mt_hat^{1/(t-1)} the optimal support is
 *
 *   - {0, s} when q_hat <= (t-1)/t * s  (boundary branch, closed form);
 *   - {u, v} with 0 < u < q_hat < v otherwise (interior branch), where v is a
 *     root of theta() in (max{s, q_hat}, t q_hat / (t-1)) and u is a
 *     function of v.
 *
 * Every report carries the matching dual certificate in original units
 * together with its verification residuals.
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
#include "gmpcert/rootfind.hpp"

namespace gmpcert {

struct OneTInstance {
  double M1 = 1.0;
  double Mt = 2.0;
  double t = 2.0;
  double q = 1.0;

  void validate() const {
    if (!std::isfinite(M1) || !std::isfinite(Mt) || !std::isfinite(t) || !std::isfinite(q))
      throw DomainError("mp1t: parameters must be finite");
    if (!(t > 1.0)) throw DomainError("mp1t: requires t > 1");
    if (!(M1 > 0.0)) throw DomainError("mp1t: requires M1 > 0");
    if (!(q > 0.0)) throw DomainError("mp1t: requires q > 0");
    if (!(Mt > std::pow(M1, t))) throw InfeasibleError("mp1t: requires Mt > M1^t");
  }
};

/// Mean-one form of a OneTInstance.
struct OneTScaled {
  double Mt;
  double t;
  double q;

  static OneTScaled from(const OneTInstance& inst) {
    return {inst.Mt / std::pow(inst.M1, inst.t), inst.t, inst.q / inst.M1};
  }

  double root_point() const { return std::pow(Mt, 1.0 / (t - 1.0)); }
  double threshold() const { return (t - 1.0) / t * root_point(); }
  double upper_end() const { return t * q / (t - 1.0); }
};

struct OneTReport {
  double value = 0.0;
  DiscreteDistribution dist;
  DualCertificate cert;
  Branch branch = Branch::kBoundary;
  std::optional<double> root;  // theta root v in scaled units
  std::size_t bisect_iters = 0;
  VerificationReport verification;
};

/// The moment problem in original units, as consumed by verify_optimality
/// and the grid oracle.
inline GmpInstance make_gmp_1t(const OneTInstance& inst, double max_support = 0.0) {
  GmpInstance g;
  g.g = moments::plus_part(inst.q);
  g.hs = {moments::constant(), moments::identity(), moments::power(inst.t)};
  g.ms = {1.0, inst.M1, inst.Mt};
  g.sense = Sense::kMax;
  g.support_hi = default_support_hi(max_support, inst.q, inst.M1);
  return g;
}

namespace detail {

// y^{t-1} - Mt, accurate near the root y = Mt^{1/(t-1)}.
inline double power_gap(double y, double Mt, double t) {
  return Mt * std::expm1((t - 1.0) * std::log(y) - std::log(Mt));
}

inline double u_of_v(double v, const OneTScaled& s) {
  const double c = s.upper_end();
  const double gap = power_gap(v, s.Mt, s.t);
  return c * gap / (v * gap + (v - 1.0) * s.Mt);
}

}  // namespace detail

/**
 * Theta(y) for the mean-one instance.
 *
 * Evaluated through the equivalent form
 *   Theta(y) = (y^{t-1} - Mt)(y - c)/(y - 1) + u(y)^t,  c = t q / (t-1),
 * which keeps full relative accuracy next to the root y = Mt^{1/(t-1)}.
 */
inline double theta(double y, const OneTScaled& s) {
  if (!(y > 1.0)) throw DomainError("theta: requires y > 1");
  const double gap = detail::power_gap(y, s.Mt, s.t);
  const double denom = y * gap + (y - 1.0) * s.Mt;  // y^t - Mt
  if (denom == 0.0) throw NonFiniteError("theta: pole at y^t = Mt");
  const double c = s.upper_end();
  const double u = c * gap / denom;
  const double ut = u >= 0.0 ? std::pow(u, s.t) : -std::pow(-u, s.t);
  const double out = gap * (y - c) / (y - 1.0) + ut;
  if (!std::isfinite(out)) throw NonFiniteError("theta: non-finite value");
  return out;
}

/// (t-1)/t * M1 * (Mt/M1^t)^{1/(t-1)} in original units.
inline double boundary_threshold(const OneTInstance& inst) {
  inst.validate();
  return inst.M1 * OneTScaled::from(inst).threshold();
}

inline OneTReport solve_1t(const OneTInstance& inst, double eps = 1e-12,
                           const ToleranceSet& tol = {}) {
  inst.validate();
  if (!(eps > 0.0)) throw DomainError("solve_1t: requires eps > 0");

  const OneTScaled s = OneTScaled::from(inst);
  const double M1 = inst.M1;
  const double t = inst.t;
  const double unit_t = std::pow(M1, 1.0 - t);  // rescales z_t
  const double sp = s.root_point();

  OneTReport r;
  RealVector z(3);
  if (s.q <= s.threshold()) {
    r.branch = Branch::kBoundary;
    r.value = M1 * (1.0 - s.q / sp);
    r.dist = DiscreteDistribution({{0.0, 1.0 - 1.0 / sp}, {M1 * sp, 1.0 / sp}});
    z = {0.0, 1.0 - s.upper_end() / sp, s.q / (t - 1.0) * std::pow(sp, -t) * unit_t};
  } else {
    r.branch = Branch::kInterior;
    const double b = s.upper_end();
    BisectResult br;
    if (s.q <= sp) {
      // Left end is the known root Mt^{1/(t-1)}; pin it to an exact zero.
      auto f = [&](double y) { return y == sp ? 0.0 : theta(y, s); };
      if (!(theta(b, s) > 0.0))
        throw RootBracketError("solve_1t: theta not positive at t q / (t-1)");
      br = bisect(f, sp, b, eps);
    } else {
      auto f = [&](double y) { return theta(y, s); };
      if (!(theta(s.q, s) < 0.0) || !(theta(b, s) > 0.0))
        throw RootBracketError("solve_1t: theta does not change sign on (q, t q / (t-1))");
      br = bisect(f, s.q, b, eps);
    }
    const double v = br.root;
    const double u = detail::u_of_v(v, s);
    r.root = v;
    r.bisect_iters = br.iterations;
    r.value = M1 * (v - s.q) * (1.0 - u) / (v - u);
    r.dist = DiscreteDistribution(
        {{M1 * u, (v - 1.0) / (v - u)}, {M1 * v, (1.0 - u) / (v - u)}});
    const double d = std::pow(v, t - 1.0) - std::pow(u, t - 1.0);
    z = {M1 * (t - 1.0) * std::pow(u, t) / (t * d), -std::pow(u, t - 1.0) / d,
         unit_t / (t * d)};
  }
  r.cert = DualCertificate(std::move(z));
  r.verification =
      verify_optimality(make_gmp_1t(inst, r.dist.max_support()), r.dist, r.cert, tol);
  return r;
}

/// Worst-case value as a function of the order quantity. `base.q` is ignored.
inline std::vector<CurvePoint> value_curve_1t(const OneTInstance& base,
                                              std::span<const double> q_grid,
                                              double eps = 1e-12) {
  std::vector<CurvePoint> out;
  out.reserve(q_grid.size());
  for (std::size_t k = 0; k < q_grid.size(); ++k) {
    if (k > 0 && !(q_grid[k] > q_grid[k - 1]))
      throw DomainError("value_curve_1t: q grid must be strictly ascending");
    OneTInstance inst = base;
    inst.q = q_grid[k];
    const OneTReport r = solve_1t(inst, eps);
    out.push_back({inst.q, r.value, r.branch, r.root, r.bisect_iters});
  }
  return out;
}

}  // namespace gmpcert
