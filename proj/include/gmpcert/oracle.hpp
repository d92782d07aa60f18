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
 * Grid-LP oracle: restricts a moment problem to a finite support grid and
 * solves the resulting LP
 *
 *   opt sum_j g(x_j) p_j  s.t.  sum_j h_i(x_j) p_j = m_i,  p >= 0
 *
 * with a dense two-phase simplex using Bland's rule. The oracle shares no
 * code with the analytic solvers and is used to cross-check them.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "gmpcert/core.hpp"
#include "gmpcert/errors.hpp"
#include "gmpcert/solver_1e.hpp"
#include "gmpcert/solver_1t.hpp"
#include "gmpcert/solver_upm.hpp"

namespace gmpcert {

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n_points = 1001;
  RealVector refine_around;

  void validate(std::size_t n_constraints) const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || !(lo < hi))
      throw DomainError("grid: requires 0 <= lo < hi");
    if (n_points < n_constraints + 1)
      throw DomainError("grid: n_points must exceed the number of constraints");
    for (double x : refine_around)
      if (!std::isfinite(x) || x < 0.0) throw DomainError("grid: refine point below zero");
  }

  /// Uniform points on [lo, hi] merged with refine_around, sorted and unique.
  RealVector points() const {
    RealVector xs;
    xs.reserve(n_points + refine_around.size());
    for (std::size_t k = 0; k < n_points; ++k)
      xs.push_back(k + 1 == n_points
                       ? hi
                       : lo + (hi - lo) * static_cast<double>(k) /
                                  static_cast<double>(n_points - 1));
    xs.insert(xs.end(), refine_around.begin(), refine_around.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

struct OracleResult {
  double value = std::numeric_limits<double>::quiet_NaN();
  DiscreteDistribution dist;  // empty unless status is kOptimal
  LpStatus status = LpStatus::kInfeasible;
  GridSpec grid;
  RealVector duals;  // multipliers of the moment rows
  std::size_t pivots = 0;
};

/// Standard-form LP: opt c^T p s.t. A p = b, p >= 0.
struct DenseLp {
  std::vector<RealVector> A;  // rows
  RealVector b;
  RealVector c;
  Sense sense = Sense::kMax;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  RealVector p;
  RealVector y;  // duals: c_j - y^T A_j has the optimal sign for every j
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::size_t pivots = 0;
};

namespace detail {

class Tableau {
 public:
  // Columns 0..n-1 are structural, n..n+m-1 artificial.
  Tableau(const std::vector<RealVector>& A, const RealVector& b)
      : m_(A.size()), n_(A.empty() ? 0 : A[0].size()), basis_(m_) {
    rows_.assign(m_, RealVector(n_ + m_ + 1, 0.0));
    for (std::size_t i = 0; i < m_; ++i) {
      std::copy(A[i].begin(), A[i].end(), rows_[i].begin());
      rows_[i][n_ + i] = 1.0;
      rows_[i].back() = b[i];
      basis_[i] = n_ + i;
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t structural() const { return n_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  double at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  double rhs(std::size_t i) const { return rows_[i].back(); }
  bool is_artificial(std::size_t j) const { return j >= n_; }

  void pivot(std::size_t r, std::size_t col) {
    RealVector& pr = rows_[r];
    const double inv = 1.0 / pr[col];
    for (double& v : pr) v *= inv;
    pr[col] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = rows_[i][col];
      if (f == 0.0) continue;
      RealVector& ri = rows_[i];
      for (std::size_t j = 0; j < ri.size(); ++j) ri[j] -= f * pr[j];
      ri[col] = 0.0;
    }
    basis_[r] = col;
    ++pivots_;
  }

  /// Minimizes cost^T x over the current basis with Bland's rule. Artificial
  /// columns may leave but never enter when `allow_artificial` is false.
  LpStatus minimize(const RealVector& cost, bool allow_artificial) {
    const std::size_t ncols = allow_artificial ? n_ + m_ : n_;
    while (true) {
      const RealVector y = duals(cost);
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        double d = cost[j];
        for (std::size_t i = 0; i < m_; ++i) d -= y[i] * column_entry(i, j);
        if (d < -kReducedCostTol) {
          enter = j;
          break;
        }
      }
      if (!enter) return LpStatus::kOptimal;

      std::optional<std::size_t> leave;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = rows_[i][*enter];
        if (a <= kPivotTol) continue;
        const double ratio = rows_[i].back() / a;
        if (ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (!leave) return LpStatus::kUnbounded;
      pivot(*leave, *enter);
    }
  }

  /// y = c_B^T B^{-1}; B^{-1} sits in the artificial columns.
  RealVector duals(const RealVector& cost) const {
    RealVector y(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      const double cb = cost[basis_[k]];
      if (cb == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) y[i] += cb * rows_[k][n_ + i];
    }
    return y;
  }

  std::size_t pivots() const { return pivots_; }

  void set_original(const std::vector<RealVector>* A) { original_ = A; }

 private:
  static constexpr double kPivotTol = 1e-12;
  static constexpr double kReducedCostTol = 1e-11;

  // Entry of the original (scaled) constraint matrix; artificials are unit columns.
  double column_entry(std::size_t i, std::size_t j) const {
    if (j >= n_) return j - n_ == i ? 1.0 : 0.0;
    return (*original_)[i][j];
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<RealVector> rows_;
  std::vector<std::size_t> basis_;
  const std::vector<RealVector>* original_ = nullptr;
  std::size_t pivots_ = 0;
};

// Solves the square system M x = r by Gaussian elimination with partial pivoting.
inline std::optional<RealVector> solve_square(std::vector<RealVector> M, RealVector r) {
  const std::size_t n = r.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(M[i][k]) > std::abs(M[piv][k])) piv = i;
    if (M[piv][k] == 0.0) return std::nullopt;
    std::swap(M[k], M[piv]);
    std::swap(r[k], r[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = M[i][k] / M[k][k];
      for (std::size_t j = k; j < n; ++j) M[i][j] -= f * M[k][j];
      r[i] -= f * r[k];
    }
  }
  RealVector x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = r[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= M[k][j] * x[j];
    x[k] = s / M[k][k];
  }
  return x;
}

}  // namespace detail

/**
 * Two-phase dense simplex with Bland's rule.
 *
 * Rows are equilibrated and sign-normalized so that b >= 0. Phase 1 minimizes
 * the sum of artificials; the LP is infeasible if that optimum exceeds 1e-9.
 * Artificials still basic afterwards are pivoted out where possible; the rest
 * mark redundant rows and stay at zero. The final basic solution is
 * recomputed from the unscaled data when the basis is fully structural.
 */
inline LpSolution simplex(const DenseLp& lp) {
  const std::size_t m = lp.A.size();
  if (m == 0 || lp.b.size() != m) throw DimensionError("simplex: empty or mismatched rows");
  const std::size_t n = lp.A[0].size();
  if (lp.c.size() != n) throw DimensionError("simplex: cost length mismatch");
  for (const RealVector& row : lp.A)
    if (row.size() != n) throw DimensionError("simplex: ragged constraint matrix");

  std::vector<RealVector> A = lp.A;
  RealVector b = lp.b;
  RealVector scale(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    double big = std::abs(b[i]);
    for (double v : A[i]) {
      if (!std::isfinite(v)) throw NonFiniteError("simplex: non-finite constraint entry");
      big = std::max(big, std::abs(v));
    }
    double s = big > 0.0 ? 1.0 / big : 1.0;
    if (b[i] < 0.0) s = -s;
    scale[i] = s;
    for (double& v : A[i]) v *= s;
    b[i] *= s;
  }

  detail::Tableau tab(A, b);
  tab.set_original(&A);

  RealVector phase1(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1.0;
  tab.minimize(phase1, true);

  LpSolution sol;
  double infeasibility = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.is_artificial(tab.basis()[i])) infeasibility += tab.rhs(i);
  if (infeasibility > 1e-9) {
    sol.status = LpStatus::kInfeasible;
    sol.pivots = tab.pivots();
    return sol;
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (!tab.is_artificial(tab.basis()[i])) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::find(tab.basis().begin(), tab.basis().end(), j) != tab.basis().end()) continue;
      if (std::abs(tab.at(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  const double sign = lp.sense == Sense::kMax ? -1.0 : 1.0;
  RealVector cost(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.c[j])) throw NonFiniteError("simplex: non-finite cost");
    cost[j] = sign * lp.c[j];
  }
  sol.status = tab.minimize(cost, false);
  sol.pivots = tab.pivots();
  if (sol.status != LpStatus::kOptimal) return sol;

  sol.p.assign(n, 0.0);
  bool structural = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.is_artificial(tab.basis()[i])) structural = false;
    else sol.p[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
  }
  if (structural) {
    std::vector<RealVector> B(m, RealVector(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) B[i][k] = lp.A[i][tab.basis()[k]];
    if (auto x = detail::solve_square(std::move(B), lp.b)) {
      bool nonneg = true;
      for (double v : *x) nonneg = nonneg && v >= -1e-12;
      if (nonneg)
        for (std::size_t k = 0; k < m; ++k) sol.p[tab.basis()[k]] = std::max(0.0, (*x)[k]);
    }
  }

  const RealVector y_scaled = tab.duals(cost);
  sol.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.y[i] = sign * scale[i] * y_scaled[i];

  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.c[j] * sol.p[j];
  return sol;
}

/// Solves `inst` restricted to the points of `grid`.
inline OracleResult oracle_solve(const GmpInstance& inst, const GridSpec& grid) {
  grid.validate(inst.hs.size());
  if (inst.hs.size() != inst.ms.size())
    throw DimensionError("oracle: moment functions and values differ in length");

  const RealVector xs = grid.points();
  DenseLp lp;
  lp.sense = inst.sense;
  lp.b = inst.ms;
  lp.A.assign(inst.hs.size(), RealVector(xs.size()));
  lp.c.resize(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    for (std::size_t i = 0; i < inst.hs.size(); ++i) lp.A[i][j] = inst.hs[i](xs[j]);
    lp.c[j] = inst.g(xs[j]);
  }

  const LpSolution sol = simplex(lp);
  OracleResult r;
  r.grid = grid;
  r.status = sol.status;
  r.pivots = sol.pivots;
  if (sol.status != LpStatus::kOptimal) return r;

  std::vector<Atom> atoms;
  double total = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (sol.p[j] > 0.0) {
      atoms.push_back({xs[j], sol.p[j]});
      total += sol.p[j];
    }
  for (Atom& a : atoms) a.p /= total;
  r.dist = DiscreteDistribution(std::move(atoms));
  r.value = sol.objective;
  r.duals = sol.y;
  return r;
}

struct RefineResult {
  OracleResult last;
  RealVector sequence;  // oracle value of every round
  bool converged = false;
};

/// Re-solves with twice as many grid points per round until two successive
/// values differ by at most `target_tol` or `max_rounds` rounds have run.
inline RefineResult refine_until(const GmpInstance& inst, const GridSpec& base,
                                 double target_tol, std::size_t max_rounds) {
  if (!(target_tol > 0.0)) throw DomainError("refine_until: requires target_tol > 0");
  RefineResult out;
  GridSpec grid = base;
  out.last = oracle_solve(inst, grid);
  out.sequence.push_back(out.last.value);
  for (std::size_t round = 0; round < max_rounds; ++round) {
    if (out.last.status != LpStatus::kOptimal) break;
    grid.n_points = 2 * grid.n_points - 1;  // keeps every previous point
    OracleResult next = oracle_solve(inst, grid);
    out.sequence.push_back(next.value);
    const double diff = std::abs(next.value - out.last.value);
    out.last = std::move(next);
    if (diff <= target_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

/// Grid covering the analytic support range of a OneTInstance.
inline GridSpec default_grid_1t(const OneTInstance& inst, std::size_t n_points) {
  inst.validate();
  const OneTScaled s = OneTScaled::from(inst);
  return {0.0, 1.05 * inst.M1 * std::max(s.upper_end(), s.root_point()), n_points, {}};
}

/// Grid covering the analytic support range of a OneExpInstance.
inline GridSpec default_grid_1e(const OneExpInstance& inst, std::size_t n_points) {
  inst.validate();
  const OneExpScaled s = OneExpScaled::from(inst);
  const double hi = std::max((s.q + 1.0 + std::log(s.Me)) * 1.5, 1.05 * compute_v1(s)) / inst.t;
  return {0.0, hi, n_points, {}};
}

/// Grid covering the two-point support of a UpmInstance, whose upper point
/// is at most M1 + M2 / (2 M+).
inline GridSpec default_grid_upm(const UpmInstance& inst, std::size_t n_points) {
  inst.validate();
  return {0.0, 1.05 * (inst.M1 + inst.M2() / (2.0 * inst.Mplus)) + 1.0, n_points, {}};
}

/// Optimality checks of a grid-LP solution against the LP it solves: dual
/// feasibility on the grid points only and no tangent block, since the LP
/// optimum is stationary only among grid points.
inline VerificationReport verify_on_grid(const GmpInstance& inst, const DiscreteDistribution& dist,
                                         const DualCertificate& cert, const GridSpec& grid,
                                         const ToleranceSet& tol = {}) {
  ToleranceSet loose = tol;
  loose.tangent = std::numeric_limits<double>::infinity();
  loose.dual = std::numeric_limits<double>::infinity();
  VerificationReport r = verify_optimality(inst, dist, cert, loose);
  const double sign = inst.sense == Sense::kMax ? 1.0 : -1.0;
  r.tangent_residual = 0.0;
  r.dual_min_on_grid = std::numeric_limits<double>::infinity();
  for (double x : grid.points())
    r.dual_min_on_grid = std::min(r.dual_min_on_grid, sign * h_function(cert, inst, x));
  r.pass = r.pass && r.dual_min_on_grid >= -tol.dual;
  return r;
}

/// Support points of `dist` to seed a grid with.
inline RealVector support_of(const DiscreteDistribution& dist) {
  RealVector xs;
  for (const Atom& a : dist.atoms()) xs.push_back(a.x);
  return xs;
}

}  // namespace gmpcert
