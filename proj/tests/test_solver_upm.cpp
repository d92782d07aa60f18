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

#include "gmpcert/solver_upm.hpp"

using namespace gmpcert;
using Catch::Matchers::WithinAbs;

namespace {

// Moments (1, E X, E X^2, E (X-1)_+) and E (X-1)_+^2 of a distribution.
struct Moments {
  double m0 = 0, m1 = 0, m2 = 0, mp = 0, mpp = 0;
};

Moments direct_moments(const DiscreteDistribution& d) {
  Moments m;
  for (const Atom& a : d.atoms()) {
    const double plus = a.x > 1.0 ? a.x - 1.0 : 0.0;
    m.m0 += a.p;
    m.m1 += a.p * a.x;
    m.m2 += a.p * a.x * a.x;
    m.mp += a.p * plus;
    m.mpp += a.p * plus * plus;
  }
  return m;
}

}  // namespace

TEST_CASE("kappa") {
  CHECK_THAT(kappa({0.5, 2.0, 0.1}), WithinAbs(0.1, 1e-15));
  CHECK_THAT(kappa({0.5, 4.0, 0.2}), WithinAbs(std::sqrt(0.57), 1e-15));
  CHECK_THAT(kappa({0.5, 3.0, 1e-12}), WithinAbs(2.0 * 0.5, 1e-9));
  CHECK_THROWS_AS(kappa({0.5, 1.01, 0.4}), InfeasibleError);
}

TEST_CASE("two-point instance") {
  const UpmInstance inst{0.5, 2.0, 0.1};
  const UpmReport r = solve_upm(inst);
  CHECK(r.branch == Branch::kTwoPoint);
  REQUIRE(r.dist.size() == 2);
  CHECK_THAT(r.dist[0].x, WithinAbs(0.25, 1e-14));
  CHECK_THAT(r.dist[0].p, WithinAbs(0.8, 1e-14));
  CHECK_THAT(r.dist[1].x, WithinAbs(1.5, 1e-14));
  CHECK_THAT(r.dist[1].p, WithinAbs(0.2, 1e-14));
  CHECK_THAT(r.value, WithinAbs(0.04, 1e-14));
  const Moments m = direct_moments(r.dist);
  CHECK_THAT(m.m1, WithinAbs(0.5, 1e-14));
  CHECK_THAT(m.m2, WithinAbs(0.5, 1e-14));
  CHECK_THAT(m.mp, WithinAbs(0.1, 1e-14));
  CHECK_THAT(m.mpp, WithinAbs(0.05, 1e-14));
  CHECK(r.verification.pass);

  const double dual = r.cert.z[0] + r.cert.z[1] * inst.M1 + r.cert.z[2] * inst.M2() +
                      r.cert.z[3] * inst.Mplus - inst.Mplus * inst.Mplus;
  CHECK_THAT(dual, WithinAbs(r.value, 1e-8));
}

TEST_CASE("two-point dual is a pair of parabolas") {
  const UpmInstance inst{0.5, 2.0, 0.1};
  const UpmReport r = solve_upm(inst);
  const double u = r.dist[0].x;
  const double v = r.dist[1].x;
  const double z2 = r.cert.z[2];
  CHECK(z2 < 0.0);
  const GmpInstance g = make_gmp_upm(inst, v);
  for (double x = 0.0; x < 8.0; x += 0.01) {
    const double h = h_function(r.cert, g, x);
    const double shape = x < 1.0 ? z2 * (x - u) * (x - u) : (z2 - 1.0) * (x - v) * (x - v);
    CHECK_THAT(h, WithinAbs(shape, 1e-12));
    CHECK(h <= 1e-7);
  }
}

TEST_CASE("degenerate family members") {
  const UpmInstance inst{0.5, 4.0, 0.2};
  const UpmReport def = solve_upm(inst);
  CHECK(def.branch == Branch::kDegenerateFamily);
  CHECK_THAT(def.value, WithinAbs(0.26, 1e-14));
  CHECK(def.verification.pass);

  const UpmReport r = solve_upm(inst, 2.5);
  REQUIRE(r.dist.size() == 3);
  CHECK_THAT(r.dist[0].p, WithinAbs(0.7, 1e-14));
  CHECK_THAT(r.dist[1].x, WithinAbs(1.0, 1e-14));
  CHECK_THAT(r.dist[1].p, WithinAbs(1.0 / 6.0, 1e-14));
  CHECK_THAT(r.dist[2].x, WithinAbs(2.5, 1e-14));
  CHECK_THAT(r.dist[2].p, WithinAbs(2.0 / 15.0, 1e-14));
  const Moments m = direct_moments(r.dist);
  CHECK_THAT(m.mpp - 0.04, WithinAbs(0.26, 1e-14));

  CHECK_THROWS_AS(solve_upm(inst, 2.0), FamilyParamError);
}

TEST_CASE("degenerate dual shape") {
  const UpmInstance inst{0.5, 4.0, 0.2};
  const UpmReport r = solve_upm(inst);
  const GmpInstance g = make_gmp_upm(inst, r.dist.max_support());
  for (double x = 0.0; x < 1.0; x += 0.01)
    CHECK_THAT(h_function(r.cert, g, x), WithinAbs(x * x - x, 1e-14));
  for (double x = 1.0; x < 20.0; x += 0.1) CHECK_THAT(h_function(r.cert, g, x), WithinAbs(0.0, 1e-12));
}

TEST_CASE("enumerate_family") {
  const UpmInstance inst{0.5, 4.0, 0.2};
  const std::vector<double> v1s{2.5, 3.0, 5.0};
  const auto fam = enumerate_family(inst, v1s);
  REQUIRE(fam.size() == 3);
  for (const UpmReport& r : fam) {
    CHECK_THAT(r.value, WithinAbs(0.26, 1e-10));
    CHECK(r.verification.pass);
  }
  CHECK(enumerate_family(inst, std::vector<double>{}).empty());
  CHECK_THROWS_AS(enumerate_family({0.5, 2.0, 0.1}, v1s), BranchError);
}

TEST_CASE("raw moments are normalized by q") {
  // X = 2 Y with Y the two-point instance above: q = 2.
  const UpmInstance n = UpmInstance::from_raw(1.0, 2.0, 0.2, 2.0);
  CHECK_THAT(n.M1, WithinAbs(0.5, 1e-15));
  CHECK_THAT(n.gamma, WithinAbs(2.0, 1e-15));
  CHECK_THAT(n.Mplus, WithinAbs(0.1, 1e-15));
}

TEST_CASE("necessary feasibility checks") {
  CHECK_THROWS_AS(solve_upm({0.5, 1.0, 0.1}), InfeasibleError);
  CHECK_THROWS_AS(solve_upm({0.5, 2.0, 0.0}), InfeasibleError);
  CHECK_THROWS_AS(solve_upm({1.5, 2.0, 0.1}), InfeasibleError);  // M1 > 2/gamma
}
