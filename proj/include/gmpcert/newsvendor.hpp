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

// Distributionally robust newsvendor:
//   min_q  max_F E[(X - q)_+] + (1 - eta) q
// over an ambiguity set fixed by either (mean, t-th moment) or
// (mean, exponential moment). The objective is convex in q and is minimized
// by golden-section search on a bracket found by doubling.

#include <cmath>
#include <cstddef>
#include <variant>

#include "gmpcert/errors.hpp"
#include "gmpcert/rootfind.hpp"
#include "gmpcert/solver_1e.hpp"
#include "gmpcert/solver_1t.hpp"

namespace gmpcert {

/// The order quantity field `q` of either instance is ignored.
using Ambiguity = std::variant<OneExpInstance, OneTInstance>;

struct NewsvendorInstance {
  Ambiguity ambiguity;
  double eta = 0.9;
  double eps = 1e-6;  // golden-section tolerance on q

  void validate() const {
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("newsvendor: requires 0 < eta < 1");
    if (!(eps > 0.0)) throw DomainError("newsvendor: requires eps > 0");
  }

  double mean() const {
    return std::visit([](const auto& a) { return a.M1; }, ambiguity);
  }
};

struct OrderDecision {
  double q_star = 0.0;
  double objective = 0.0;
  std::size_t golden_iters = 0;
  std::size_t inner_solves = 0;
};

struct ExponentialDemand {
  double lambda;
};

/// Known demand law used as a baseline; std::monostate means none.
using DemandFamily = std::variant<std::monostate, ExponentialDemand>;

/// Mean and exponential moment E[e^{tX}] of an Exponential(lambda) demand.
inline OneExpInstance exponential_ambiguity(double lambda, double t) {
  if (!(lambda > 0.0) || !(t > 0.0) || !(t < lambda))
    throw DomainError("exponential_ambiguity: requires 0 < t < lambda");
  return {1.0 / lambda, lambda / (lambda - t), t, 1.0};
}

namespace detail {

inline double inner_value(const Ambiguity& amb, double q, double eps) {
  if (const auto* e = std::get_if<OneExpInstance>(&amb)) {
    OneExpInstance inst = *e;
    inst.q = q;
    return worst_case_value_1e(inst, eps);
  }
  OneTInstance inst = std::get<OneTInstance>(amb);
  inst.q = q;
  return solve_1t(inst, eps).value;
}

}  // namespace detail

/// max_F E[(X - q)_+] + (1 - eta) q. At q = 0 the first term is the mean.
inline double worst_case_objective(const NewsvendorInstance& inst, double q) {
  inst.validate();
  if (!(q >= 0.0)) throw DomainError("worst_case_objective: requires q >= 0");
  const double tail = q == 0.0 ? inst.mean() : detail::inner_value(inst.ambiguity, q, inst.eps / 100.0);
  return tail + (1.0 - inst.eta) * q;
}

inline OrderDecision optimize_order(const NewsvendorInstance& inst) {
  inst.validate();
  std::size_t solves = 0;
  auto f = [&](double q) {
    ++solves;
    return worst_case_objective(inst, q);
  };
  const auto [a, b] = expand_bracket(f, 0.0);
  const GoldenResult g = golden_section(f, a, b, inst.eps);
  OrderDecision d;
  d.q_star = g.minimizer;
  d.objective = f(d.q_star);
  d.golden_iters = g.iterations;
  d.inner_solves = solves;
  return d;
}

/// eta-quantile of a known demand law, the classical newsvendor order.
inline double ground_truth_quantile(const DemandFamily& family, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("ground_truth_quantile: requires 0 < eta < 1");
  if (const auto* e = std::get_if<ExponentialDemand>(&family)) {
    if (!(e->lambda > 0.0)) throw DomainError("ground_truth_quantile: requires lambda > 0");
    return -std::log1p(-eta) / e->lambda;
  }
  throw UnsupportedFamily("ground_truth_quantile: no demand family given");
}

}  // namespace gmpcert
