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


#include <array>
#include <cmath>
#include <vector>

#include <catch_amalgamated.hpp>

#include "gmpcert/core.hpp"

using namespace gmpcert;
using Catch::Matchers::WithinAbs;

namespace {

GmpInstance two_moment_instance() {
  GmpInstance g;
  g.g = moments::plus_part(1.0);
  g.hs = {moments::constant(), moments::identity(), moments::power(2.0)};
  g.ms = {1.0, 1.0, 4.0};
  g.support_hi = 40.0;
  return g;
}

}  // namespace

TEST_CASE("distribution sorts atoms and enforces its invariants") {
  DiscreteDistribution d({{4.0, 0.25}, {0.0, 0.75}});
  REQUIRE(d.size() == 2);
  CHECK(d[0].x == 0.0);
  CHECK(d[1].x == 4.0);
  CHECK(d.max_support() == 4.0);

  CHECK_THROWS_AS(DiscreteDistribution(std::vector<Atom>{}), DomainError);
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<Atom>{{-1.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<Atom>{{1.0, 0.5}, {1.0, 0.5}}), DomainError);
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<Atom>{{1.0, 0.5}, {2.0, 0.4}}), DomainError);
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<Atom>{{1.0, 1.0}, {2.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<Atom>{{std::nan(""), 1.0}}), DomainError);
}

TEST_CASE("certificate rejects non-finite coefficients") {
  CHECK_THROWS_AS(DualCertificate({0.0, INFINITY}), NonFiniteError);
}

TEST_CASE("moments_of evaluates expectations") {
  const std::array hs{moments::constant(), moments::identity(), moments::power(2.0)};
  const RealVector m = moments_of(DiscreteDistribution({{0.0, 0.75}, {4.0, 0.25}}), hs);
  CHECK_THAT(m[0], WithinAbs(1.0, 1e-15));
  CHECK_THAT(m[1], WithinAbs(1.0, 1e-15));
  CHECK_THAT(m[2], WithinAbs(4.0, 1e-15));

  const std::array h2{moments::constant(), moments::identity()};
  const RealVector single = moments_of(DiscreteDistribution({{2.5, 1.0}}), h2);
  CHECK(single[1] == 2.5);

  const std::array h4{moments::constant(), moments::identity(), moments::power(2.0),
                      moments::plus_part(1.0)};
  const RealVector fam = moments_of(
      DiscreteDistribution({{0.0, 0.7}, {2.5, 2.0 / 15.0}, {1.0, 1.0 / 6.0}}), h4);
  CHECK_THAT(fam[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(fam[1], WithinAbs(0.5, 1e-12));
  CHECK_THAT(fam[2], WithinAbs(1.0, 1e-12));
  CHECK_THAT(fam[3], WithinAbs(0.2, 1e-12));
}

TEST_CASE("h_function and its derivative") {
  const GmpInstance inst = two_moment_instance();
  const DualCertificate z({0.0, 0.5, 1.0 / 16.0});
  CHECK_THAT(h_function(z, inst, 4.0), WithinAbs(0.0, 1e-15));
  CHECK_THAT(h_derivative(z, inst, 4.0), WithinAbs(0.0, 1e-15));
  CHECK_THROWS_AS(h_derivative(z, inst, 1.0), NonDifferentiable);
  CHECK_THROWS_AS(h_function(z, inst, 41.0), DomainError);
  CHECK_THROWS_AS(h_function(DualCertificate({1.0}), inst, 1.0), DimensionError);

  GmpInstance zero = inst;
  zero.g = moments::zero();
  CHECK(h_function(DualCertificate({1.0, 0.0, 0.0}), zero, 3.0) == 1.0);
  CHECK(h_function(DualCertificate({0.0, 0.0, 0.0}), inst, 0.5) == 0.0);
}

TEST_CASE("H is affine in z with offset g") {
  const GmpInstance inst = two_moment_instance();
  const DualCertificate z1({0.3, -0.2, 0.05});
  const DualCertificate z2({-0.1, 0.4, 0.01});
  const DualCertificate sum({0.2, 0.2, 0.06});
  for (double x = 0.0; x <= 10.0; x += 0.37) {
    const double lhs = h_function(sum, inst, x) - h_function(z1, inst, x) - h_function(z2, inst, x);
    CHECK_THAT(lhs, WithinAbs(inst.g(x), 1e-12));
  }
}

TEST_CASE("verify_optimality accepts an optimal pair") {
  const GmpInstance inst = two_moment_instance();
  const DiscreteDistribution d({{0.0, 0.75}, {4.0, 0.25}});
  const VerificationReport r = verify_optimality(inst, d, DualCertificate({0.0, 0.5, 1.0 / 16.0}));
  CHECK(r.pass);
  CHECK(r.duality_gap <= 1e-12);
  CHECK_THAT(r.primal_objective, WithinAbs(0.75, 1e-15));
  CHECK_THAT(r.dual_objective, WithinAbs(0.75, 1e-15));
}

TEST_CASE("verify_optimality with zero objective and zero certificate") {
  GmpInstance inst = two_moment_instance();
  inst.g = moments::zero();
  const VerificationReport r =
      verify_optimality(inst, DiscreteDistribution({{0.0, 0.75}, {4.0, 0.25}}),
                        DualCertificate({0.0, 0.0, 0.0}));
  CHECK(r.pass);
  CHECK(r.slack_residual == 0.0);
  CHECK(r.tangent_residual == 0.0);
  CHECK(r.duality_gap == 0.0);
}

TEST_CASE("verify_optimality reports a wrong mean") {
  const GmpInstance inst = two_moment_instance();
  const DiscreteDistribution d({{0.0, 0.5}, {4.0, 0.5}});
  const VerificationReport r = verify_optimality(inst, d, DualCertificate({0.0, 0.5, 1.0 / 16.0}));
  CHECK_FALSE(r.pass);
  CHECK_THAT(moments_of(d, inst.hs)[1] - inst.ms[1], WithinAbs(1.0, 1e-15));
  CHECK_THAT(r.primal_residual, WithinAbs(4.0, 1e-12));  // second moment 8 versus 4
}

TEST_CASE("verify_optimality rejects bad inputs") {
  const GmpInstance inst = two_moment_instance();
  CHECK_THROWS_AS(verify_optimality(inst, DiscreteDistribution({{50.0, 1.0}}),
                                    DualCertificate({0.0, 0.0, 0.0})),
                  DomainError);
  CHECK_THROWS_AS(verify_optimality(inst, DiscreteDistribution({{1.0, 1.0}}),
                                    DualCertificate({0.0, 0.0})),
                  DimensionError);
  GmpInstance bad = inst;
  bad.ms = {1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), DimensionError);
}

TEST_CASE("tangent check skips break points and the domain ends") {
  // g = (x - 1)_+ has a kink at 1; a support point there must not be probed.
  const GmpInstance inst = two_moment_instance();
  const VerificationReport r = verify_optimality(
      inst, DiscreteDistribution({{1.0, 1.0}}), DualCertificate({0.0, 0.0, 0.0}));
  CHECK(r.tangent_residual == 0.0);
}

TEST_CASE("dual feasibility uses -H for minimization") {
  GmpInstance inst = two_moment_instance();
  inst.sense = Sense::kMin;
  inst.g = moments::zero();
  const DiscreteDistribution d({{1.0, 1.0}});
  // H = -(x - 1)^2 <= 0 is feasible for a minimization problem.
  const VerificationReport r = verify_optimality(inst, d, DualCertificate({-1.0, 2.0, -1.0}));
  CHECK(r.dual_min_on_grid >= 0.0);
}
