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
 * Domain types shared by every moment problem in the library, and the
 * generic primal-dual optimality check.
 *
 * A generalized moment problem optimizes E[g(X)] over nonnegative random
 * variables subject to E[h_i(X)] = m_i, i = 0..n, with h_0 = 1 and m_0 = 1.
 * A dual certificate z induces H(x; z) = sum_i z_i h_i(x) - g(x). For a
 * maximization problem the pair (distribution, z) is optimal when
 *
 *   - the distribution reproduces every moment,
 *   - H vanishes on every support point,
 *   - H' vanishes on every support point where all functions are
 *     differentiable and which lies in the interior of the domain,
 *   - H >= 0 on the whole domain (H <= 0 for a minimization problem).
 *
 * verify_optimality() measures each of these as a residual.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gmpcert/errors.hpp"

namespace gmpcert {

using RealVector = std::vector<double>;

enum class Sense { kMax, kMin };

inline const char* to_string(Sense sense) {
  return sense == Sense::kMax ? "max" : "min";
}

/// Which closed-form regime produced a solver report.
enum class Branch { kBoundary, kInterior, kTwoPoint, kDegenerateFamily };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::kBoundary: return "boundary";
    case Branch::kInterior: return "interior";
    case Branch::kTwoPoint: return "two_point";
    case Branch::kDegenerateFamily: return "degenerate_family";
  }
  return "unknown";
}

/// One point of a value-versus-order-quantity curve.
struct CurvePoint {
  double q;
  double value;
  Branch branch;
  std::optional<double> root;
  std::size_t iterations;
};

/// A real function of the support variable together with its derivative.
///
/// `deriv` must be defined everywhere on [0, inf) except at the points listed
/// in `nondiff_points`, which is kept sorted ascending.
struct MomentFunction {
  std::string id;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  RealVector nondiff_points;

  double operator()(double x) const { return eval(x); }

  bool differentiable_at(double x, double tol = 1e-12) const {
    return std::none_of(nondiff_points.begin(), nondiff_points.end(),
                        [&](double p) { return std::abs(x - p) <= tol; });
  }
};

/// Factories for the moment functions that appear in the solved problems.
namespace moments {

inline MomentFunction constant(double c = 1.0) {
  return {c == 1.0 ? "1" : "const", [c](double) { return c; },
          [](double) { return 0.0; }, {}};
}

inline MomentFunction zero() { return constant(0.0); }

inline MomentFunction identity() {
  return {"x", [](double x) { return x; }, [](double) { return 1.0; }, {}};
}

/// x^t on x >= 0 for real t >= 1.
inline MomentFunction power(double t) {
  return {"x^" + std::to_string(t), [t](double x) { return std::pow(x, t); },
          [t](double x) { return t * std::pow(x, t - 1.0); }, {}};
}

/// (x - q)_+, kinked at q.
inline MomentFunction plus_part(double q) {
  return {"(x-q)+", [q](double x) { return x > q ? x - q : 0.0; },
          [q](double x) { return x > q ? 1.0 : 0.0; }, {q}};
}

/// (x - q)_+^2, continuously differentiable.
inline MomentFunction plus_part_squared(double q) {
  return {"(x-q)+^2",
          [q](double x) { return x > q ? (x - q) * (x - q) : 0.0; },
          [q](double x) { return x > q ? 2.0 * (x - q) : 0.0; },
          {}};
}

/// e^{t x}.
inline MomentFunction exponential(double t) {
  return {"exp(tx)", [t](double x) { return std::exp(t * x); },
          [t](double x) { return t * std::exp(t * x); }, {}};
}

}  // namespace moments

/// One atom of a discrete distribution.
struct Atom {
  double x;
  double p;
};

/// Finitely supported probability distribution on [0, inf).
///
/// Atoms are stored with strictly increasing x and strictly positive p that
/// sum to one within 1e-12. The constructor sorts its input and throws
/// DomainError when any invariant fails.
class DiscreteDistribution {
 public:
  static constexpr double kMassTolerance = 1e-12;

  DiscreteDistribution() = default;

  explicit DiscreteDistribution(std::vector<Atom> atoms)
      : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw DomainError("distribution has no atoms");
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.x < b.x; });
    double total = 0.0;
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
      const Atom& a = atoms_[j];
      if (!std::isfinite(a.x) || !std::isfinite(a.p))
        throw DomainError("distribution atom is not finite");
      if (a.x < 0.0) throw DomainError("support point below zero");
      if (!(a.p > 0.0)) throw DomainError("atom probability must be positive");
      if (j > 0 && !(a.x > atoms_[j - 1].x))
        throw DomainError("support points must be distinct");
      total += a.p;
    }
    if (std::abs(total - 1.0) > kMassTolerance)
      throw DomainError("probabilities do not sum to one");
  }

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Atom& operator[](std::size_t j) const { return atoms_[j]; }

  double max_support() const { return atoms_.empty() ? 0.0 : atoms_.back().x; }

  /// E[f(X)].
  template <class F>
  double expect(F&& f) const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += f(a.x) * a.p;
    return s;
  }

 private:
  std::vector<Atom> atoms_;
};

/// Coefficients z aligned with the moment functions h_0..h_n.
struct DualCertificate {
  RealVector z;

  DualCertificate() = default;
  explicit DualCertificate(RealVector coeffs) : z(std::move(coeffs)) {
    for (double v : z)
      if (!std::isfinite(v)) throw NonFiniteError("dual coefficient is not finite");
  }

  std::size_t size() const { return z.size(); }
};

/// A moment problem: optimize E[g] subject to E[h_i] = m_i.
struct GmpInstance {
  MomentFunction g;
  std::vector<MomentFunction> hs;
  RealVector ms;
  Sense sense = Sense::kMax;
  double support_hi = 0.0;  // upper end of the numerically scanned domain

  void validate() const {
    if (hs.size() != ms.size())
      throw DimensionError("moment functions and moment values differ in length");
    if (hs.empty() || ms[0] != 1.0)
      throw DomainError("first moment row must be the total mass m_0 = 1");
    if (!(support_hi > 0.0)) throw DomainError("support_hi must be positive");
  }

  double moment_scale() const {
    double s = 1.0;
    for (double m : ms) s = std::max(s, std::abs(m));
    return s;
  }
};

struct ToleranceSet {
  double primal = 1e-9;   // relative to max(1, |m|_inf)
  double slack = 1e-8;
  double tangent = 1e-6;
  double dual = 1e-7;     // allowed violation of the dual sign constraint
  double gap = 1e-8;      // relative to max(1, |value|)
  std::size_t grid_points = 10000;
};

/// Residuals of the four optimality blocks.
///
/// `dual_min_on_grid` is the minimum of H over the scan grid for a maximization
/// problem and of -H for a minimization problem, so it is >= 0 (up to
/// tolerance) for a feasible certificate either way.
struct VerificationReport {
  double primal_residual = 0.0;
  double slack_residual = 0.0;
  double tangent_residual = 0.0;
  double dual_min_on_grid = 0.0;
  double duality_gap = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  bool pass = false;
};

inline double h_function(const DualCertificate& cert, const GmpInstance& inst,
                         double x) {
  if (cert.size() != inst.hs.size())
    throw DimensionError("certificate length does not match moment count");
  if (x < 0.0 || x > inst.support_hi)
    throw DomainError("evaluation point outside [0, support_hi]");
  double s = 0.0;
  for (std::size_t i = 0; i < inst.hs.size(); ++i) s += cert.z[i] * inst.hs[i](x);
  return s - inst.g(x);
}

/// H'(x; z). Throws NonDifferentiable at a declared break point of g or any h_i.
inline double h_derivative(const DualCertificate& cert, const GmpInstance& inst,
                           double x) {
  if (cert.size() != inst.hs.size())
    throw DimensionError("certificate length does not match moment count");
  if (x < 0.0 || x > inst.support_hi)
    throw DomainError("evaluation point outside [0, support_hi]");
  if (!inst.g.differentiable_at(x))
    throw NonDifferentiable("objective is not differentiable here");
  double s = 0.0;
  for (std::size_t i = 0; i < inst.hs.size(); ++i) {
    if (!inst.hs[i].differentiable_at(x))
      throw NonDifferentiable("moment function is not differentiable here");
    s += cert.z[i] * inst.hs[i].deriv(x);
  }
  return s - inst.g.deriv(x);
}

inline RealVector moments_of(const DiscreteDistribution& dist,
                             std::span<const MomentFunction> hs) {
  RealVector out;
  out.reserve(hs.size());
  for (const MomentFunction& h : hs) out.push_back(dist.expect(h.eval));
  return out;
}

/// Measures how far (dist, cert) is from satisfying the optimality conditions.
inline VerificationReport verify_optimality(const GmpInstance& inst,
                                            const DiscreteDistribution& dist,
                                            const DualCertificate& cert,
                                            const ToleranceSet& tol = {}) {
  inst.validate();
  if (cert.size() != inst.hs.size())
    throw DimensionError("certificate length does not match moment count");
  for (const Atom& a : dist.atoms())
    if (a.x < 0.0 || a.x > inst.support_hi)
      throw DomainError("support point outside [0, support_hi]");

  VerificationReport r;

  const RealVector m = moments_of(dist, inst.hs);
  for (std::size_t i = 0; i < m.size(); ++i)
    r.primal_residual = std::max(r.primal_residual, std::abs(m[i] - inst.ms[i]));

  std::vector<double> break_points;
  auto collect = [&](const MomentFunction& f) {
    break_points.insert(break_points.end(), f.nondiff_points.begin(),
                        f.nondiff_points.end());
  };
  collect(inst.g);
  for (const MomentFunction& h : inst.hs) collect(h);

  auto near_break = [&](double x) {
    return std::any_of(break_points.begin(), break_points.end(),
                       [&](double p) { return std::abs(x - p) <= 1e-12; });
  };

  for (const Atom& a : dist.atoms()) {
    r.slack_residual = std::max(r.slack_residual, std::abs(h_function(cert, inst, a.x)));
    const bool interior = a.x > 0.0 && a.x < inst.support_hi;
    if (interior && !near_break(a.x))
      r.tangent_residual =
          std::max(r.tangent_residual, std::abs(h_derivative(cert, inst, a.x)));
  }

  const double sign = inst.sense == Sense::kMax ? 1.0 : -1.0;
  double dual_min = std::numeric_limits<double>::infinity();
  auto probe = [&](double x) {
    if (x < 0.0 || x > inst.support_hi) return;
    const double h = sign * h_function(cert, inst, x);
    // +inf means the growth term dominates; it cannot violate the sign constraint.
    if (std::isnan(h) || h == -std::numeric_limits<double>::infinity())
      dual_min = -std::numeric_limits<double>::infinity();
    else
      dual_min = std::min(dual_min, h);
  };
  const std::size_t n = std::max<std::size_t>(tol.grid_points, 2);
  for (std::size_t k = 0; k < n; ++k)
    probe(inst.support_hi * static_cast<double>(k) / static_cast<double>(n - 1));
  for (const Atom& a : dist.atoms()) probe(a.x);
  for (double p : break_points) probe(p);
  r.dual_min_on_grid = dual_min;

  r.primal_objective = dist.expect(inst.g.eval);
  for (std::size_t i = 0; i < inst.ms.size(); ++i)
    r.dual_objective += cert.z[i] * inst.ms[i];
  r.duality_gap = std::abs(r.primal_objective - r.dual_objective);

  r.pass = r.primal_residual <= tol.primal * inst.moment_scale() &&
           r.slack_residual <= tol.slack && r.tangent_residual <= tol.tangent &&
           r.dual_min_on_grid >= -tol.dual &&
           r.duality_gap <= tol.gap * std::max(1.0, std::abs(r.primal_objective));
  return r;
}

/// Default truncation of the scanned domain: ten times the largest of the
/// support, the order quantity and the mean.
inline double default_support_hi(double max_support, double q, double mean) {
  return 10.0 * std::max({max_support, q, mean, 1e-300});
}

}  // namespace gmpcert
