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
#include <numbers>

#include <catch_amalgamated.hpp>

#include "gmpcert/lambertw.hpp"
#include "support.hpp"

using namespace gmpcert;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kBranch = -1.0 / std::numbers::e;

}  // namespace

TEST_CASE("W_{-1} at reference points") {
  CHECK(lambert_w_minus1(kBranch).w == -1.0);
  CHECK(lambert_w_minus1(-2.0 * std::exp(-2.0)).w == Catch::Approx(-2.0).epsilon(1e-14));

  const double ref = testsupport::ref_root([](double w) { return w * std::exp(w) + 0.1; }, -50.0, -1.0);
  CHECK_THAT(lambert_w_minus1(-0.1).w, WithinRel(ref, 1e-13));
  CHECK_THAT(lambert_w_minus1(-0.1).w, WithinAbs(-3.577152063957297, 1e-12));
}

TEST_CASE("W_0 at reference points") {
  CHECK(lambert_w_0(0.0).w == 0.0);
  CHECK_THAT(lambert_w_0(std::numbers::e).w, WithinAbs(1.0, 1e-14));
  CHECK(lambert_w_0(kBranch).w == -1.0);
  const double ref = testsupport::ref_root([](double w) { return w * std::exp(w) - 10.0; }, 0.0, 5.0);
  CHECK_THAT(lambert_w_0(10.0).w, WithinRel(ref, 1e-13));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(lambert_w_minus1(0.0), DomainError);
  CHECK_THROWS_AS(lambert_w_minus1(-0.5), DomainError);
  CHECK_THROWS_AS(lambert_w_minus1(0.1), DomainError);
  CHECK_THROWS_AS(lambert_w_0(-0.5), DomainError);
}

TEST_CASE("W_{-1} round trip from w") {
  for (int k = 0; k < 1000; ++k) {
    const double w = -1.0 - 0.04 * k;  // down to about -41
    const double x = w * std::exp(w);
    if (x == 0.0) continue;
    CHECK_THAT(lambert_w_minus1(x).w, WithinRel(w, 1e-10));
  }
}

TEST_CASE("branches are ordered and W_{-1} decreases") {
  double prev = -1.0;
  for (int k = 1; k < 500; ++k) {
    const double x = kBranch * (1.0 - k / 500.0);
    const double wm = lambert_w_minus1(x).w;
    const double w0 = lambert_w_0(x).w;
    CHECK(w0 > -1.0);
    CHECK(wm < -1.0);
    CHECK(wm < prev);
    prev = wm;
    CHECK(lambert_w_minus1(x).residual <= 1e-12 * std::max(1.0, std::abs(x)));
    CHECK(lambert_w_0(x).residual <= 1e-12 * std::max(1.0, std::abs(x)));
  }
}
