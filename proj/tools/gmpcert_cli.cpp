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


// gmpcert: solve, sweep and cross-check moment problems from JSON instance
// files. See README.md for the file format and exit codes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmpcert/io.hpp"

namespace {

using gmpcert::io::json;

enum ExitCode {
  kOk = 0,
  kOther = 1,
  kSchema = 2,
  kInfeasible = 3,
  kRange = 4,
  kSweepRowFailed = 5,
  kDisagreement = 6,
};

struct ErrorInfo {
  int code;
  std::string kind;
};

ErrorInfo classify(const std::exception& e) {
  if (dynamic_cast<const gmpcert::io::SchemaError*>(&e)) return {kSchema, "schema"};
  if (dynamic_cast<const json::exception*>(&e)) return {kSchema, "schema"};
  if (dynamic_cast<const gmpcert::DomainError*>(&e)) return {kSchema, "domain"};
  if (dynamic_cast<const gmpcert::FamilyParamError*>(&e)) return {kSchema, "family_param"};
  if (dynamic_cast<const gmpcert::InfeasibleError*>(&e)) return {kInfeasible, "infeasible"};
  if (dynamic_cast<const gmpcert::RangeError*>(&e)) return {kRange, "range"};
  return {kOther, "error"};
}

int report_error(const std::exception& e) {
  const ErrorInfo info = classify(e);
  json err;
  err["error"] = info.kind;
  err["message"] = e.what();
  err["exit_code"] = info.code;
  std::cerr << err.dump() << '\n';
  return info.code;
}

json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gmpcert::io::SchemaError("cannot open instance file " + path);
  return json::parse(in);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Replaces an oracle instance by its target so that check compares the
// target's solver against the grid oracle.
gmpcert::io::InstanceFile as_solver_instance(gmpcert::io::InstanceFile f) {
  if (const auto* o = std::get_if<gmpcert::io::OracleInput>(&f.params)) {
    auto target = o->target;
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, gmpcert::OneTInstance>) f.problem = "mp1t";
          else if constexpr (std::is_same_v<T, gmpcert::OneExpInstance>) f.problem = "mp1e";
          else f.problem = "upm";
          f.params = t;
        },
        target);
  }
  return f;
}

struct CommonFlags {
  std::string instance;
  std::optional<double> tol;
  std::optional<std::size_t> grid_points;
  bool seed_support = true;
  double dual_noise = 0.0;

  gmpcert::io::RunOptions options() const {
    return {tol, grid_points, seed_support, dual_noise};
  }
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("instance", f.instance, "Instance JSON file")->required();
  cmd->add_option("--tol", f.tol, "Solver root-finding tolerance (overrides the file)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-points", f.grid_points, "Oracle grid size")->check(CLI::Range(2, 1 << 24));
  cmd->add_flag("--seed-support,!--no-seed-support", f.seed_support,
                "Seed the oracle grid with the solver support (default on)");
  cmd->add_option("--inject-dual-noise", f.dual_noise)->group("");
}

int cmd_solve(const CommonFlags& flags) {
  try {
    const auto file = gmpcert::io::parse_instance(read_document(flags.instance));
    const auto start = std::chrono::steady_clock::now();
    const auto out = gmpcert::io::run_solve(file, flags.options());
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::cout << gmpcert::io::encode_envelope(out, ms).dump(2) << '\n';
    std::cerr << out.problem << ": value " << fmt(out.value);
    if (out.branch) std::cerr << " (" << *out.branch << ")";
    std::cerr << ", verification " << (out.verification.pass ? "passed" : "FAILED") << '\n';
    return kOk;
  } catch (const std::exception& e) {
    return report_error(e);
  }
}

struct SweepFlags {
  CommonFlags common;
  std::string param = "q";
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 1;
  std::string csv;
};

struct SweepRow {
  double x;
  double value = std::nan("");
  std::string branch;
  std::optional<double> root;
  std::size_t iters = 0;
  bool ok = false;
  std::string error;
};

int cmd_sweep(const SweepFlags& flags) {
  json doc;
  try {
    doc = read_document(flags.common.instance);
    gmpcert::io::parse_instance(gmpcert::io::with_param(doc, flags.param, flags.from));
  } catch (const gmpcert::io::SchemaError& e) {
    return report_error(e);
  } catch (const json::exception& e) {
    return report_error(e);
  } catch (const std::exception&) {
    // Invalid parameters at the first grid point are reported per row.
  }

  std::vector<double> xs;
  for (std::size_t k = 0; k < flags.steps; ++k)
    xs.push_back(flags.steps == 1 ? flags.from
                                  : flags.from + (flags.to - flags.from) * static_cast<double>(k) /
                                                     static_cast<double>(flags.steps - 1));

  const auto opts = flags.common.options();
  std::vector<std::future<SweepRow>> jobs;
  for (double x : xs) {
    jobs.push_back(std::async(std::launch::async, [&doc, &flags, opts, x] {
      SweepRow row;
      row.x = x;
      try {
        const auto file = gmpcert::io::parse_instance(gmpcert::io::with_param(doc, flags.param, x));
        const auto out = gmpcert::io::run_solve(file, opts);
        row.value = out.value;
        row.branch = out.branch.value_or("");
        row.root = out.root;
        row.iters = out.iterations;
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      return row;
    }));
  }

  std::ostringstream csv;
  csv << "param,value,branch,root,iters\n";
  bool failed = false;
  for (auto& job : jobs) {
    const SweepRow row = job.get();
    csv << fmt(row.x) << ',' << fmt(row.value) << ',' << row.branch << ','
        << (row.root ? fmt(*row.root) : "") << ',' << row.iters << '\n';
    if (!row.ok) {
      failed = true;
      std::cerr << json{{"error", "row"}, {"param", row.x}, {"message", row.error}}.dump() << '\n';
    }
  }

  if (flags.csv.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(flags.csv);
    if (!out) {
      std::cerr << json{{"error", "io"}, {"message", "cannot write " + flags.csv}}.dump() << '\n';
      return kOther;
    }
    out << csv.str();
  }
  return failed ? kSweepRowFailed : kOk;
}

int cmd_check(const CommonFlags& flags) {
  try {
    const auto file =
        as_solver_instance(gmpcert::io::parse_instance(read_document(flags.instance)));
    const auto opts = flags.options();
    const auto out = gmpcert::io::run_solve(file, opts);

    const double solver_value = out.to_value(out.gmp_value);
    const gmpcert::GridSpec grid = gmpcert::io::oracle_grid(out, file, opts);
    const double target = 1e-9 * std::max(1.0, std::abs(out.gmp_value));
    const auto refined = gmpcert::refine_until(out.gmp, grid, target, 3);
    if (refined.last.status != gmpcert::LpStatus::kOptimal)
      throw gmpcert::InfeasibleError(std::string("oracle: LP is ") +
                                     gmpcert::to_string(refined.last.status));

    const double oracle_value = out.to_value(refined.last.value);
    const auto& seq = refined.sequence;
    const double grid_error =
        seq.size() >= 2 ? std::abs(seq[seq.size() - 1] - seq[seq.size() - 2]) * out.value_scale : 0.0;
    const double diff = std::abs(solver_value - oracle_value);
    const bool agree = diff <= std::max(1e-6, grid_error);
    const bool ok = agree && out.verification.pass;

    json j;
    j["problem"] = out.problem;
    j["solver_value"] = solver_value;
    j["oracle_value"] = oracle_value;
    j["difference"] = diff;
    j["grid_error_bound"] = grid_error;
    j["oracle_rounds"] = seq.size();
    j["oracle_converged"] = refined.converged;
    j["verification"] = gmpcert::io::encode_verification(out.verification);
    j["agree"] = agree;
    j["pass"] = ok;
    std::cout << j.dump(2) << '\n';
    if (!ok)
      std::cerr << "check failed: solver " << fmt(solver_value) << ", oracle " << fmt(oracle_value)
                << ", verification " << (out.verification.pass ? "passed" : "FAILED") << '\n';
    return ok ? kOk : kDisagreement;
  } catch (const std::exception& e) {
    return report_error(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified solvers for moment problems"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  CLI::App* solve = app.add_subcommand("solve", "Solve one instance and print the result envelope");
  add_common(solve, solve_flags);

  SweepFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "Solve over a grid of one parameter and emit CSV");
  add_common(sweep, sweep_flags.common);
  sweep->add_option("--param", sweep_flags.param, "Parameter to vary")->capture_default_str();
  sweep->add_option("--from", sweep_flags.from, "First value")->required();
  sweep->add_option("--to", sweep_flags.to, "Last value")->required();
  sweep->add_option("--steps", sweep_flags.steps, "Number of grid points")
      ->required()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--csv", sweep_flags.csv, "Output CSV file (default stdout)");

  CommonFlags check_flags;
  CLI::App* check =
      app.add_subcommand("check", "Compare the solver with the grid oracle and verify it");
  add_common(check, check_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kSchema;
  }

  if (*solve) return cmd_solve(solve_flags);
  if (*sweep) return cmd_sweep(sweep_flags);
  return cmd_check(check_flags);
}
