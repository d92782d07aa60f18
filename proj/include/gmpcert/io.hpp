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
 * JSON instance files and result envelopes.
 *
 * An instance file is one JSON object:
 *
 *   {"problem": "mp1t" | "upm" | "mp1e" | "newsvendor" | "oracle",
 *    "params": {...},
 *    "tolerance": 1e-10,
 *    "oracle": {"lo": 0, "hi": 10, "n_points": 2001, "refine_around": [..]}}
 *
 * Only "problem" and "params" are required. Unknown keys are rejected.
 * Requires the vendored nlohmann/json header (target gmpcert_io).
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gmpcert/core.hpp"
#include "gmpcert/errors.hpp"
#include "gmpcert/newsvendor.hpp"
#include "gmpcert/oracle.hpp"
#include "gmpcert/solver_1e.hpp"
#include "gmpcert/solver_1t.hpp"
#include "gmpcert/solver_upm.hpp"

namespace gmpcert::io {

using json = nlohmann::ordered_json;

/// Malformed instance file: wrong type, missing or unknown key.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// UPM input in normalized form plus the order quantity it was scaled by.
struct UpmInput {
  UpmInstance inst;
  double q = 1.0;
  std::optional<double> v1;  // degenerate family member, normalized units
};

struct NewsvendorInput {
  NewsvendorInstance inst;
  DemandFamily family;  // set when the ambiguity came from a demand law
};

/// Grid oracle run directly on one of the moment problems.
struct OracleInput {
  std::variant<OneTInstance, UpmInput, OneExpInstance> target;
};

using Params = std::variant<OneTInstance, UpmInput, OneExpInstance, NewsvendorInput, OracleInput>;

struct OracleOverrides {
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<std::size_t> n_points;
  std::optional<RealVector> refine_around;
};

struct InstanceFile {
  std::string problem;
  Params params;
  double tolerance = 1e-10;
  OracleOverrides oracle;
};

namespace detail {

inline void check_keys(const json& obj, const std::string& where,
                       std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  for (const char* k : required)
    if (!obj.contains(k)) throw SchemaError(where + ": missing key \"" + k + "\"");
  for (const auto& [key, value] : obj.items()) {
    const auto match = [&](const char* k) { return key == k; };
    if (std::none_of(required.begin(), required.end(), match) &&
        std::none_of(optional.begin(), optional.end(), match))
      throw SchemaError(where + ": unknown key \"" + key + "\"");
  }
}

inline double number(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(where + "." + key + ": must be finite");
  return d;
}

inline std::optional<double> maybe_number(const json& obj, const char* key,
                                          const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, key, where);
}

inline OneTInstance parse_1t(const json& p, const std::string& where) {
  check_keys(p, where, {"M1", "Mt", "t", "q"});
  OneTInstance inst{number(p, "M1", where), number(p, "Mt", where), number(p, "t", where),
                    number(p, "q", where)};
  inst.validate();
  return inst;
}

inline OneExpInstance parse_1e(const json& p, const std::string& where) {
  check_keys(p, where, {"M1", "Me", "t", "q"});
  OneExpInstance inst{number(p, "M1", where), number(p, "Me", where), number(p, "t", where),
                      number(p, "q", where)};
  inst.validate();
  return inst;
}

inline UpmInput parse_upm(const json& p, const std::string& where) {
  UpmInput in;
  if (p.is_object() && p.contains("M2")) {
    check_keys(p, where, {"M1", "M2", "Mplus", "q"}, {"v1"});
    in.q = number(p, "q", where);
    in.inst = UpmInstance::from_raw(number(p, "M1", where), number(p, "M2", where),
                                    number(p, "Mplus", where), in.q);
  } else {
    check_keys(p, where, {"M1", "gamma", "Mplus"}, {"v1"});
    in.inst = {number(p, "M1", where), number(p, "gamma", where), number(p, "Mplus", where)};
  }
  if (auto v1 = maybe_number(p, "v1", where)) in.v1 = *v1 / in.q;
  in.inst.validate();
  return in;
}

inline NewsvendorInput parse_newsvendor(const json& p, const std::string& where) {
  check_keys(p, where, {"eta", "ambiguity"}, {"eps"});
  NewsvendorInput in;
  in.inst.eta = number(p, "eta", where);
  if (auto e = maybe_number(p, "eps", where)) in.inst.eps = *e;
  const json& a = p.at("ambiguity");
  const std::string aw = where + ".ambiguity";
  if (!a.is_object() || !a.contains("type") || !a.at("type").is_string())
    throw SchemaError(aw + ": expected an object with a string \"type\"");
  const std::string type = a.at("type").get<std::string>();
  if (type == "mp1t") {
    check_keys(a, aw, {"type", "M1", "Mt", "t"});
    in.inst.ambiguity = OneTInstance{number(a, "M1", aw), number(a, "Mt", aw),
                                     number(a, "t", aw), 1.0};
  } else if (type == "mp1e") {
    check_keys(a, aw, {"type", "M1", "Me", "t"});
    in.inst.ambiguity = OneExpInstance{number(a, "M1", aw), number(a, "Me", aw),
                                       number(a, "t", aw), 1.0};
  } else if (type == "exponential") {
    check_keys(a, aw, {"type", "lambda", "t"});
    const double lambda = number(a, "lambda", aw);
    in.inst.ambiguity = exponential_ambiguity(lambda, number(a, "t", aw));
    in.family = ExponentialDemand{lambda};
  } else {
    throw SchemaError(aw + ".type: expected \"mp1t\", \"mp1e\" or \"exponential\"");
  }
  in.inst.validate();
  std::visit([](const auto& amb) { amb.validate(); }, in.inst.ambiguity);
  return in;
}

inline OracleInput parse_oracle_params(const json& p, const std::string& where) {
  if (!p.is_object() || !p.contains("target") || !p.at("target").is_string())
    throw SchemaError(where + ": expected a string \"target\"");
  const std::string target = p.at("target").get<std::string>();
  json rest = p;
  rest.erase("target");
  if (target == "mp1t") return {parse_1t(rest, where)};
  if (target == "mp1e") return {parse_1e(rest, where)};
  if (target == "upm") return {parse_upm(rest, where)};
  throw SchemaError(where + ".target: expected \"mp1t\", \"mp1e\" or \"upm\"");
}

inline OracleOverrides parse_overrides(const json& o) {
  check_keys(o, "oracle", {}, {"lo", "hi", "n_points", "refine_around"});
  OracleOverrides r;
  r.lo = maybe_number(o, "lo", "oracle");
  r.hi = maybe_number(o, "hi", "oracle");
  if (o.contains("n_points")) {
    const json& n = o.at("n_points");
    if (!n.is_number_unsigned() || n.get<std::size_t>() < 2)
      throw SchemaError("oracle.n_points: expected an integer >= 2");
    r.n_points = n.get<std::size_t>();
  }
  if (o.contains("refine_around")) {
    const json& xs = o.at("refine_around");
    if (!xs.is_array()) throw SchemaError("oracle.refine_around: expected an array");
    RealVector v;
    for (const json& x : xs) {
      if (!x.is_number()) throw SchemaError("oracle.refine_around: expected numbers");
      v.push_back(x.get<double>());
    }
    r.refine_around = std::move(v);
  }
  return r;
}

}  // namespace detail

/// Parses and validates an instance document. Throws SchemaError on
/// structural problems and the library errors on invalid parameters.
inline InstanceFile parse_instance(const json& doc) {
  detail::check_keys(doc, "instance", {"problem", "params"}, {"tolerance", "oracle"});
  if (!doc.at("problem").is_string()) throw SchemaError("instance.problem: expected a string");
  InstanceFile f;
  f.problem = doc.at("problem").get<std::string>();
  const json& p = doc.at("params");
  if (f.problem == "mp1t") {
    f.params = detail::parse_1t(p, "params");
  } else if (f.problem == "mp1e") {
    f.params = detail::parse_1e(p, "params");
  } else if (f.problem == "upm") {
    f.params = detail::parse_upm(p, "params");
  } else if (f.problem == "newsvendor") {
    f.params = detail::parse_newsvendor(p, "params");
  } else if (f.problem == "oracle") {
    f.params = detail::parse_oracle_params(p, "params");
  } else {
    throw SchemaError("instance.problem: unknown problem \"" + f.problem + "\"");
  }
  if (auto tol = detail::maybe_number(doc, "tolerance", "instance")) {
    if (!(*tol > 0.0)) throw SchemaError("instance.tolerance: must be positive");
    f.tolerance = *tol;
  }
  if (doc.contains("oracle")) f.oracle = detail::parse_overrides(doc.at("oracle"));
  return f;
}

struct RunOptions {
  std::optional<double> tol;                // overrides the file tolerance
  std::optional<std::size_t> grid_points;   // oracle grid size
  bool seed_support = true;                 // seed oracle grids with the solver support
  double dual_noise = 0.0;                  // added to every dual coefficient
};

/// Everything a command needs from one solve.
struct SolveOutcome {
  std::string problem;
  double value = 0.0;
  DiscreteDistribution dist;
  RealVector dual;
  std::optional<std::string> branch;
  std::optional<double> root;
  std::size_t iterations = 0;
  VerificationReport verification;
  json details = json::object();

  // The moment problem that `dist` and `dual` certify, in its own units.
  // Its optimal value maps to `value` units through to_value().
  GmpInstance gmp;
  DiscreteDistribution gmp_dist;
  DualCertificate gmp_cert;
  double gmp_value = 0.0;
  double value_scale = 1.0;
  double value_offset = 0.0;
  GridSpec grid;

  double to_value(double gmp_objective) const {
    return (gmp_objective - value_offset) * value_scale;
  }
};

namespace detail {

inline GridSpec apply_overrides(GridSpec g, const OracleOverrides& o, const RunOptions& opt) {
  if (o.lo) g.lo = *o.lo;
  if (o.hi) g.hi = *o.hi;
  if (o.n_points) g.n_points = *o.n_points;
  if (opt.grid_points) g.n_points = *opt.grid_points;
  if (o.refine_around) g.refine_around = *o.refine_around;
  return g;
}

inline DualCertificate noisy(const DualCertificate& c, double noise) {
  if (noise == 0.0) return c;
  RealVector z = c.z;
  for (double& v : z) v += noise;
  return DualCertificate(std::move(z));
}

inline void fill_certificate(SolveOutcome& o, const GmpInstance& gmp,
                             const DiscreteDistribution& dist, const DualCertificate& cert,
                             double value, const RunOptions& opt) {
  o.gmp = gmp;
  o.gmp_dist = dist;
  o.gmp_cert = noisy(cert, opt.dual_noise);
  o.gmp_value = value;
  o.verification = verify_optimality(gmp, dist, o.gmp_cert, ToleranceSet{});
}

inline void solve_target(SolveOutcome& o, const OneTInstance& inst, double eps,
                         const RunOptions& opt) {
  const OneTReport r = solve_1t(inst, eps);
  o.value = r.value;
  o.dist = r.dist;
  o.branch = to_string(r.branch);
  o.root = r.root;
  o.iterations = r.bisect_iters;
  fill_certificate(o, make_gmp_1t(inst, r.dist.max_support()), r.dist, r.cert, r.value, opt);
  o.dual = o.gmp_cert.z;
  o.grid = default_grid_1t(inst, 2001);
}

inline void solve_target(SolveOutcome& o, const OneExpInstance& inst, double eps,
                         const RunOptions& opt) {
  const OneExpReport r = solve_1e(inst, eps);
  o.value = r.value;
  o.dist = r.dist;
  o.branch = to_string(r.branch);
  o.root = r.root;
  o.iterations = r.bisect_iters;
  o.details["v1"] = r.v1;
  fill_certificate(o, make_gmp_1e(inst, r.dist.max_support()), r.dist, r.cert, r.value, opt);
  o.dual = o.gmp_cert.z;
  o.grid = default_grid_1e(inst, 2001);
}

inline void solve_target(SolveOutcome& o, const UpmInput& in, double, const RunOptions& opt) {
  const UpmReport r = solve_upm(in.inst, in.v1);
  const double q = in.q;
  o.value_scale = q * q;
  o.value = r.value * q * q;
  std::vector<Atom> atoms;
  for (const Atom& a : r.dist.atoms()) atoms.push_back({a.x * q, a.p});
  o.dist = DiscreteDistribution(std::move(atoms));
  o.branch = to_string(r.branch);
  if (r.kappa) o.details["kappa"] = *r.kappa;
  if (r.family_v1) o.details["family_v1"] = *r.family_v1 * q;
  // The LP objective is E[(X - 1)_+^2]; the variance subtracts M+^2.
  o.value_offset = in.inst.Mplus * in.inst.Mplus;
  fill_certificate(o, make_gmp_upm(in.inst, r.dist.max_support()), r.dist, r.cert,
                   r.value + o.value_offset, opt);
  const RealVector& z = o.gmp_cert.z;
  o.dual = {z[0] * q * q, z[1] * q, z[2], z[3] * q};
  o.grid = default_grid_upm(in.inst, 2001);
}

inline void solve_newsvendor(SolveOutcome& o, const NewsvendorInput& in, const RunOptions& opt) {
  const OrderDecision d = optimize_order(in.inst);
  o.value = d.objective;
  o.iterations = d.golden_iters;
  o.details["q_star"] = d.q_star;
  o.details["golden_iters"] = d.golden_iters;
  o.details["inner_solves"] = d.inner_solves;
  if (!std::holds_alternative<std::monostate>(in.family))
    o.details["ground_truth_quantile"] = ground_truth_quantile(in.family, in.inst.eta);

  // Certify the inner worst case at the chosen order quantity.
  SolveOutcome inner;
  const double eps = in.inst.eps / 100.0;
  std::visit(
      [&](auto amb) {
        amb.q = d.q_star;
        solve_target(inner, amb, eps, opt);
      },
      in.inst.ambiguity);
  o.dist = inner.dist;
  o.dual = inner.dual;
  o.branch = inner.branch;
  o.root = inner.root;
  o.details["worst_case_value"] = inner.value;
  o.verification = inner.verification;
  o.gmp = std::move(inner.gmp);
  o.gmp_dist = std::move(inner.gmp_dist);
  o.gmp_cert = std::move(inner.gmp_cert);
  o.gmp_value = inner.gmp_value;
  o.grid = inner.grid;
}

}  // namespace detail

/// Oracle grid for `o`, with file and command-line overrides applied.
inline GridSpec oracle_grid(const SolveOutcome& o, const InstanceFile& f, const RunOptions& opt) {
  GridSpec g = detail::apply_overrides(o.grid, f.oracle, opt);
  if (opt.seed_support && !f.oracle.refine_around) g.refine_around = support_of(o.gmp_dist);
  return g;
}

/// Runs the solver named by the instance file.
inline SolveOutcome run_solve(const InstanceFile& f, const RunOptions& opt = {}) {
  const double eps = opt.tol.value_or(f.tolerance);
  SolveOutcome o;
  o.problem = f.problem;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, NewsvendorInput>) {
          detail::solve_newsvendor(o, p, opt);
        } else if constexpr (std::is_same_v<P, OracleInput>) {
          SolveOutcome target;
          std::visit([&](const auto& t) { detail::solve_target(target, t, eps, opt); }, p.target);
          const GridSpec grid = oracle_grid(target, f, opt);
          const OracleResult r = oracle_solve(target.gmp, grid);
          if (r.status == LpStatus::kInfeasible)
            throw InfeasibleError("oracle: moment constraints are infeasible on the grid");
          if (r.status == LpStatus::kUnbounded) throw DomainError("oracle: LP is unbounded");
          o.value = target.to_value(r.value);
          o.dist = r.dist;
          o.dual = r.duals;
          o.iterations = r.pivots;
          o.details["status"] = to_string(r.status);
          o.details["grid_points"] = grid.points().size();
          o.details["solver_value"] = target.value;
          o.gmp = target.gmp;
          o.gmp_dist = r.dist;
          o.gmp_cert = detail::noisy(DualCertificate(r.duals), opt.dual_noise);
          o.gmp_value = r.value;
          o.value_scale = target.value_scale;
          o.value_offset = target.value_offset;
          o.grid = grid;
          o.verification = verify_on_grid(o.gmp, o.gmp_dist, o.gmp_cert, grid);
        } else {
          detail::solve_target(o, p, eps, opt);
        }
      },
      f.params);
  return o;
}

inline json encode_verification(const VerificationReport& v) {
  json j;
  j["primal_residual"] = v.primal_residual;
  j["slack_residual"] = v.slack_residual;
  j["tangent_residual"] = v.tangent_residual;
  j["dual_min_on_grid"] = v.dual_min_on_grid;
  j["duality_gap"] = v.duality_gap;
  j["primal_objective"] = v.primal_objective;
  j["dual_objective"] = v.dual_objective;
  j["pass"] = v.pass;
  return j;
}

/// Result envelope with a fixed field order.
inline json encode_envelope(const SolveOutcome& o, double timing_ms) {
  json j;
  j["problem"] = o.problem;
  j["optimal_value"] = o.value;
  json dist = json::array();
  for (const Atom& a : o.dist.atoms()) dist.push_back({{"x", a.x}, {"p", a.p}});
  j["distribution"] = std::move(dist);
  j["dual"] = o.dual;
  j["branch"] = o.branch ? json(*o.branch) : json(nullptr);
  j["root"] = o.root ? json(*o.root) : json(nullptr);
  j["iterations"] = o.iterations;
  j["verification"] = encode_verification(o.verification);
  j["verified"] = o.verification.pass;
  j["details"] = o.details;
  j["timing_ms"] = timing_ms;
  return j;
}

/// Returns `doc` with params[key] replaced, for parameter sweeps.
inline json with_param(json doc, const std::string& key, double value) {
  if (!doc.is_object() || !doc.contains("params") || !doc.at("params").is_object())
    throw SchemaError("sweep: instance has no params object");
  json& p = doc.at("params");
  if (p.contains(key) && p.at(key).is_number()) {
    p[key] = value;
    return doc;
  }
  if (p.contains("ambiguity") && p.at("ambiguity").is_object() &&
      p.at("ambiguity").contains(key) && p.at("ambiguity").at(key).is_number()) {
    p["ambiguity"][key] = value;
    return doc;
  }
  throw SchemaError("sweep: params has no numeric key \"" + key + "\"");
}

}  // namespace gmpcert::io
