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
 * Best-case variance of the overshoot, min Var[(X - 1)_+], over nonnegative X
 * with E[X] = M1, E[X^2] = gamma M1^2 and E[(X - 1)_+] = M+.
 *
 * The order quantity is normalized to one. Two regimes:
 *
 *   - M1 <= 1/gamma + M+: unique optimal support {u, v}, 0 <= u < 1 < v;
 *   - M1 >  1/gamma + M+: every feasible support inside {0} u [1, inf) is
 *     optimal. The three-point members {0, v1, v2(v1)} are parameterized by
 *     v1 >= max{1, (gamma M1^2 - M1)/M+}.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "gmpcert/core.hpp"
#include "gmpcert/errors.hpp"

namespace gmpcert {

struct UpmInstance {
  double M1 = 0.5;
  double gamma = 2.0;  // E[X^2] = gamma * M1^2
  double Mplus = 0.1;

  double M2() const { return gamma * M1 * M1; }

  /// Checks the necessary feasibility conditions.
  void validate() const {
    if (!std::isfinite(M1) || !std::isfinite(gamma) || !std::isfinite(Mplus))
      throw DomainError("upm: parameters must be finite");
    if (!(M1 > 0.0)) throw InfeasibleError("upm: requires M1 > 0");
    if (!(gamma > 1.0)) throw InfeasibleError("upm: requires gamma > 1");
    if (!(Mplus > 0.0)) throw InfeasibleError("upm: requires Mplus > 0");
    if (!(M1 <= 2.0 / gamma)) throw InfeasibleError("upm: requires M1 <= 2/gamma");
    if (!(Mplus > M1 - 1.0)) throw InfeasibleError("upm: requires Mplus > M1 - 1");
  }

  bool two_point() const { return M1 <= 1.0 / gamma + Mplus; }

  /// Smallest admissible v1 of the degenerate family.
  double family_lower_bound() const {
    return std::max(1.0, (gamma * M1 * M1 - M1) / Mplus);
  }

  /// Normalizes raw moments (E[X], E[X^2], E[(X - q)_+], q) to q = 1.
  /// Values of the normalized problem are q^2 times smaller.
  static UpmInstance from_raw(double M1, double M2, double Mplus, double q) {
    if (!(q > 0.0)) throw DomainError("upm: requires q > 0");
    if (!(M1 > 0.0)) throw InfeasibleError("upm: requires M1 > 0");
    return {M1 / q, M2 / (M1 * M1), Mplus / q};
  }
};

struct UpmReport {
  double value = 0.0;
  DiscreteDistribution dist;
  DualCertificate cert;
  Branch branch = Branch::kTwoPoint;
  std::optional<double> kappa;
  std::optional<double> family_v1;
  VerificationReport verification;
};

inline GmpInstance make_gmp_upm(const UpmInstance& inst, double max_support = 0.0) {
  GmpInstance g;
  g.g = moments::plus_part_squared(1.0);
  g.hs = {moments::constant(), moments::identity(), moments::power(2.0),
          moments::plus_part(1.0)};
  g.ms = {1.0, inst.M1, inst.M2(), inst.Mplus};
  g.sense = Sense::kMin;
  g.support_hi = default_support_hi(max_support, 1.0, inst.M1);
  return g;
}

inline double kappa(const UpmInstance& inst) {
  const double M1 = inst.M1;
  const double gm1 = inst.gamma - 1.0;
  const double mp = inst.Mplus;
  const double radicand = gm1 * (gm1 * M1 * M1 + 4.0 * mp * (M1 - 1.0) - 4.0 * mp * mp);
  if (radicand < 0.0) throw InfeasibleError("upm: kappa radicand is negative");
  return std::sqrt(radicand);
}

namespace detail {

inline UpmReport upm_two_point(const UpmInstance& inst, const ToleranceSet& tol) {
  const double M1 = inst.M1;
  const double g = inst.gamma;
  const double mp = inst.Mplus;
  const double k = kappa(inst);
  if (!(k > 0.0)) throw InfeasibleError("upm: kappa must be positive on the two-point branch");

  const double u = std::max(0.0, M1 * (1.0 - ((g - 1.0) * M1 + k) / (2.0 * (1.0 - M1 + mp))));
  const double v = M1 * (1.0 + ((g - 1.0) * M1 - k) / (2.0 * mp));
  const double p2 = (M1 - u) / (v - u);

  UpmReport r;
  r.branch = Branch::kTwoPoint;
  r.kappa = k;
  r.value = 0.5 * (2.0 * mp * (M1 - 1.0) + M1 * ((g - 1.0) * M1 - k)) - mp * mp;
  r.dist = DiscreteDistribution({{u, 1.0 - p2}, {v, p2}});
  r.cert = DualCertificate({
      -0.5 * ((2.0 * mp - M1) * M1 +
              M1 * (2.0 * (g - 2.0) * mp * mp + (g - 1.0) * M1 * M1 -
                    2.0 * mp * (1.0 + (g - 2.0) * M1)) / k),
      mp - M1 - (2.0 * mp * mp - (g - 1.0) * M1 * M1 + mp * (2.0 + (g - 3.0) * M1)) / k,
      -0.5 * (((g - 1.0) * M1 * M1 + 2.0 * mp * (M1 - 1.0) - 2.0 * mp * mp) / (M1 * k) - 1.0),
      (M1 - 1.0) - (g - 1.0) * M1 * (M1 - 1.0 - 2.0 * mp) / k,
  });
  r.verification = verify_optimality(make_gmp_upm(inst, v), r.dist, r.cert, tol);
  return r;
}

inline UpmReport upm_family_member(const UpmInstance& inst, double v1, const ToleranceSet& tol) {
  const double M1 = inst.M1;
  const double g = inst.gamma;
  const double mp = inst.Mplus;
  const double bound = inst.family_lower_bound();
  if (!(v1 >= bound * (1.0 - 1e-12)))
    throw FamilyParamError("upm: v1 below max{1, (gamma M1^2 - M1)/Mplus}");

  const double v2 = (M1 * v1 - g * M1 * M1) / ((M1 - mp) * v1 - M1);
  const double denom = g * M1 * M1 - 2.0 * M1 * v1 + M1 * v1 * v1 - mp * v1 * v1;
  const double p0 = 1.0 - M1 + mp;
  const double p1 = M1 * M1 * (g * M1 - g * mp - 1.0) / denom;
  const double w = M1 * v1 - mp * v1 - M1;
  const double p2 = w * w / denom;

  UpmReport r;
  r.branch = Branch::kDegenerateFamily;
  r.family_v1 = v1;
  r.value = M1 * (g * M1 - 1.0) - mp - mp * mp;
  r.dist = DiscreteDistribution({{0.0, p0}, {v1, p1}, {v2, p2}});
  r.cert = DualCertificate({0.0, -1.0, 1.0, -1.0});
  r.verification =
      verify_optimality(make_gmp_upm(inst, std::max(v1, v2)), r.dist, r.cert, tol);
  return r;
}

}  // namespace detail

/// Solves the instance. On the degenerate branch `v1_choice` selects the
/// family member; it defaults to one above the admissible lower bound.
inline UpmReport solve_upm(const UpmInstance& inst, std::optional<double> v1_choice = {},
                           const ToleranceSet& tol = {}) {
  inst.validate();
  if (inst.two_point()) return detail::upm_two_point(inst, tol);
  const double v1 = v1_choice.value_or(inst.family_lower_bound() + 1.0);
  return detail::upm_family_member(inst, v1, tol);
}

inline std::vector<UpmReport> enumerate_family(const UpmInstance& inst,
                                               std::span<const double> v1_list,
                                               const ToleranceSet& tol = {}) {
  inst.validate();
  if (inst.two_point())
    throw BranchError("upm: enumerate_family requires M1 > 1/gamma + Mplus");
  std::vector<UpmReport> out;
  out.reserve(v1_list.size());
  for (double v1 : v1_list) out.push_back(detail::upm_family_member(inst, v1, tol));
  return out;
}

}  // namespace gmpcert
