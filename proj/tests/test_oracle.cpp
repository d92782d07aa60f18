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


#include <cmath>
#include <vector>

#include <catch_amalgamated.hpp>

#include "gmpcert/oracle.hpp"
#include "gmpcert/solver_1e.hpp"
#include "gmpcert/solver_1t.hpp"
#include "gmpcert/solver_upm.hpp"

using namespace gmpcert;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

GmpInstance mean_only(double mean, double q, double hi) {
  GmpInstance g;
  g.g = moments::plus_part(q);
  g.hs = {moments::constant(), moments::identity()};
  g.ms = {1.0, mean};
  g.sense = Sense::kMax;
  g.support_hi = hi;
  return g;
}

}  // namespace

TEST_CASE("grid points") {
  const GridSpec g{0.0, 2.0, 5, {0.25, 1.0}};
  const RealVector xs = g.points();
  const RealVector want{0.0, 0.25, 0.5, 1.0, 1.5, 2.0};
  REQUIRE(xs.size() == want.size());
  for (std::size_t k = 0; k < xs.size(); ++k) CHECK(xs[k] == want[k]);
  CHECK_THROWS_AS((GridSpec{1.0, 1.0, 5, {}}.validate(2)), DomainError);
  CHECK_THROWS_AS((GridSpec{0.0, 1.0, 2, {}}.validate(2)), DomainError);
  CHECK_THROWS_AS((GridSpec{0.0, 1.0, 5, {-1.0}}.validate(2)), DomainError);
}

TEST_CASE("three-point toy problem") {
  // max P(X = 2) with E X = 1 on {0, 1, 2}: half the mass at each end.
  const OracleResult r = oracle_solve(mean_only(1.0, 1.0, 2.0), {0.0, 2.0, 3, {}});
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK_THAT(r.value, WithinAbs(0.5, 1e-14));
  REQUIRE(r.dist.size() == 2);
  CHECK_THAT(r.dist[0].p, WithinAbs(0.5, 1e-14));
  CHECK_THAT(r.dist[1].x, WithinAbs(2.0, 0.0));
}

TEST_CASE("infeasible moments") {
  const OracleResult r = oracle_solve(mean_only(5.0, 1.0, 2.0), {0.0, 2.0, 11, {}});
  CHECK(r.status == LpStatus::kInfeasible);
  CHECK(r.dist.size() == 0);
  CHECK(std::isnan(r.value));
}

TEST_CASE("minimization sense") {
  // min E[(X - 1)_+] with E X = 1.5 on [0, 3]: Jensen gives 0.5.
  GmpInstance g = mean_only(1.5, 1.0, 3.0);
  g.sense = Sense::kMin;
  const OracleResult r = oracle_solve(g, {0.0, 3.0, 31, {}});
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK_THAT(r.value, WithinAbs(0.5, 1e-12));
}

TEST_CASE("agrees with the closed form on a fine grid") {
  const OneTInstance inst{1.0, 4.0, 2.0, 1.0};
  const OracleResult r = oracle_solve(make_gmp_1t(inst, 8.0), {0.0, 8.0, 4001, {}});
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK_THAT(r.value, WithinAbs(0.75, 1e-9));
  CHECK_THAT(r.value, WithinAbs(solve_1t(inst).value, 1e-9));
}

TEST_CASE("seeded grids reproduce every solver") {
  {
    const OneTInstance inst{1.0, 2.0, 2.0, 6.0};
    const OneTReport s = solve_1t(inst);
    GridSpec g = default_grid_1t(inst, 201);
    g.refine_around = support_of(s.dist);
    const OracleResult r = oracle_solve(make_gmp_1t(inst, g.hi), g);
    CHECK_THAT(r.value, WithinRel(s.value, 1e-9));
  }
  {
    const OneExpInstance inst{1.0, std::exp(2.0), 1.0, 5.0};
    const OneExpReport s = solve_1e(inst);
    GridSpec g = default_grid_1e(inst, 201);
    g.refine_around = support_of(s.dist);
    const OracleResult r = oracle_solve(make_gmp_1e(inst, g.hi), g);
    CHECK_THAT(r.value, WithinRel(s.value, 1e-9));
  }
  {
    const UpmInstance inst{0.5, 2.0, 0.1};
    const UpmReport s = solve_upm(inst);
    GridSpec g = default_grid_upm(inst, 201);
    g.refine_around = support_of(s.dist);
    const OracleResult r = oracle_solve(make_gmp_upm(inst, g.hi), g);
    // LP objective is E[(X - 1)_+^2]; the reported value subtracts Mplus^2.
    CHECK_THAT(r.value - inst.Mplus * inst.Mplus, WithinAbs(s.value, 1e-11));
  }
}

TEST_CASE("LP duals certify the grid optimum") {
  const OneTInstance inst{1.0, 4.0, 2.0, 1.0};
  const GmpInstance g = make_gmp_1t(inst, 8.0);
  const GridSpec grid{0.0, 8.0, 161, {}};
  const OracleResult r = oracle_solve(g, grid);
  REQUIRE(r.status == LpStatus::kOptimal);
  REQUIRE(r.duals.size() == 3);
  const DualCertificate c(r.duals);
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < 3; ++i) dual_obj += r.duals[i] * g.ms[i];
  CHECK_THAT(dual_obj, WithinAbs(r.value, 1e-12));
  for (double x : grid.points()) CHECK(h_function(c, g, x) >= -1e-12);
  for (const Atom& a : r.dist.atoms()) CHECK_THAT(h_function(c, g, a.x), WithinAbs(0.0, 1e-12));
}

TEST_CASE("refinement") {
  const OneTInstance inst{1.0, 2.0, 2.0, 6.0};
  const GmpInstance g = make_gmp_1t(inst, 24.0);
  const GridSpec base{0.0, 24.0, 65, {}};

  const RefineResult none = refine_until(g, base, 1e-12, 0);
  CHECK_FALSE(none.converged);
  CHECK(none.sequence.size() == 1);

  const RefineResult r = refine_until(g, base, 1e-6, 12);
  CHECK(r.converged);
  for (std::size_t k = 1; k < r.sequence.size(); ++k)
    CHECK(r.sequence[k] >= r.sequence[k - 1] - 1e-13);  // nested grids, max sense
  CHECK(r.last.value <= solve_1t(inst).value + 1e-12);
  CHECK_THAT(r.last.value, WithinAbs(solve_1t(inst).value, 1e-4));
  CHECK_THROWS_AS(refine_until(g, base, 0.0, 3), DomainError);
}

TEST_CASE("deterministic") {
  const OneExpInstance inst{1.0, std::exp(2.0), 1.0, 2.5};
  const GmpInstance g = make_gmp_1e(inst, 12.0);
  const GridSpec grid{0.0, 12.0, 301, {}};
  const OracleResult a = oracle_solve(g, grid);
  const OracleResult b = oracle_solve(g, grid);
  CHECK(a.value == b.value);
  CHECK(a.pivots == b.pivots);
  REQUIRE(a.dist.size() == b.dist.size());
  for (std::size_t k = 0; k < a.dist.size(); ++k) {
    CHECK(a.dist[k].x == b.dist[k].x);
    CHECK(a.dist[k].p == b.dist[k].p);
  }
}

TEST_CASE("dense simplex on a small LP") {
  // max x + y subject to x + 2y = 4, 3x + y = 7 (unique feasible point 2, 1).
  DenseLp lp;
  lp.A = {{1.0, 2.0}, {3.0, 1.0}};
  lp.b = {4.0, 7.0};
  lp.c = {1.0, 1.0};
  const LpSolution s = simplex(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK_THAT(s.p[0], WithinAbs(2.0, 1e-14));
  CHECK_THAT(s.p[1], WithinAbs(1.0, 1e-14));
  CHECK_THAT(s.objective, WithinAbs(3.0, 1e-14));

  DenseLp unb;
  unb.A = {{1.0, -1.0}};
  unb.b = {1.0};
  unb.c = {1.0, 0.0};
  CHECK(simplex(unb).status == LpStatus::kUnbounded);
}

TEST_CASE("grid verification of LP duals") {
  const OneTInstance inst{1.0, 4.0, 2.0, 1.0};
  const GmpInstance g = make_gmp_1t(inst, 8.0);
  const GridSpec grid{0.0, 8.0, 4001, {}};
  const OracleResult r = oracle_solve(g, grid);
  const DualCertificate c(r.duals);
  CHECK(verify_on_grid(g, r.dist, c, grid).pass);

  RealVector z = r.duals;
  for (double& zi : z) zi += 1e-3;
  CHECK_FALSE(verify_on_grid(g, r.dist, DualCertificate(z), grid).pass);
}
