#pragma once

// Command dispatch for the opa tool. run() never throws: failures map to
// exit codes (0 success, 1 solver failure, 2 invalid input).

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "opa/bounds.hpp"
#include "opa/checks.hpp"
#include "opa/experiments.hpp"
#include "opa/parse.hpp"
#include "opa/report.hpp"
#include "opa/solvers.hpp"

namespace opa::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kSolverFailure = 1, kInvalidInput = 2 };

struct RunConfig {
  std::string command;
  std::vector<std::string> f_exprs;
  int n = 0;
  std::optional<double> p;
  int grid_log2 = 12;
  std::string output = "json";
  std::string method = "auto";
  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::string suite = "all";
  std::vector<double> p_list;
  int n_max = 8;
  /// Relaxation for fixed-point runs; empty selects stable_damping(p).
  std::optional<double> damping = 1.0;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline void validate(const RunConfig& c) {
  static const std::vector<std::string> commands{"solve", "bounds", "sweep-p", "sweep-n", "sweep-f", "roots", "check"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
    throw InvalidArgument("unknown command '" + c.command + "'");
  }
  if (c.grid_log2 < 4 || c.grid_log2 > 20) throw InvalidArgument("grid_log2 must lie in [4, 20]");
  if (c.n < 0) throw InvalidArgument("n must be nonnegative");
  if (c.output != "json" && c.output != "csv") throw InvalidArgument("output must be json or csv");
  if (c.method != "auto" && c.method != "gram2" && c.method != "convex" && c.method != "fixed-point") {
    throw InvalidArgument("unknown method '" + c.method + "'");
  }
  if (!(c.tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (c.p && !(*c.p > 1.0 && std::isfinite(*c.p))) throw InvalidArgument("p must lie in (1, inf)");
  if (c.command != "check" && c.command != "sweep-p" && !c.p) throw InvalidArgument("--p is required");
  if (c.command == "sweep-p" && c.p_list.empty()) throw InvalidArgument("--p-list is required for sweep-p");
  if (c.command != "check" && c.f_exprs.empty()) throw InvalidArgument("--f is required");
  if (c.command != "sweep-f" && c.f_exprs.size() > 1) throw InvalidArgument("--f given more than once");
  if (c.method == "gram2" && c.p && *c.p != 2.0) throw InvalidArgument("method gram2 requires p = 2");
  if (c.method == "fixed-point" && c.n > 1) throw InvalidArgument("fixed-point method supports n <= 1");
}

inline HardyFunction parse_nonzero(const std::string& text, const BoundaryGrid& grid) {
  HardyFunction f = parse_function(text);
  const BoundarySamples s = evaluate_on_grid(f, grid);
  bool zero = true;
  for (const cd& v : s.values()) zero = zero && v == cd{0.0, 0.0};
  if (zero) throw InvalidArgument("f is identically zero");
  return f;
}

inline json header(const RunConfig& c, const BoundaryGrid& grid) {
  json h{{"command", c.command}, {"grid_points", grid.size()}};
  if (c.f_exprs.size() == 1) h["f"] = parse_function(c.f_exprs[0]).to_string();
  if (c.p) h["p"] = *c.p;
  return h;
}

inline int status_code(Status s) { return s == Status::nonconverged ? kSolverFailure : kOk; }

inline void emit_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

inline int run_solve(const RunConfig& c, const BoundaryGrid& grid, Streams io) {
  const HardyFunction f = parse_nonzero(c.f_exprs[0], grid);
  const double p = *c.p;
  SolverOptions opts;
  opts.tol_residual = c.tol;
  OpaResult r;
  const bool unit_zero = f.at_zero() == cd{0.0, 0.0};
  if (c.method == "gram2" || (c.method == "auto" && p == 2.0 && !unit_zero)) {
    r = gram_solve_p2(f, c.n, grid);
  } else if (c.method == "fixed-point") {
    const double damping = c.damping.value_or(stable_damping(p));
    r = c.n == 0 ? fixed_point_degree0(f, p, 0.0, c.tol, opts.max_iters, grid, damping).result
                 : fixed_point_degree1(f, p, {0.0, 0.0}, c.tol, opts.max_iters, grid, damping).result;
  } else {
    r = solve_general(f, c.n, p, grid, opts);
  }
  emit_warnings(r.warnings, io.err);
  if (c.output == "csv") {
    io.out << report::to_csv(r);
  } else {
    json j = header(c, grid);
    j["n"] = c.n;
    j["result"] = report::to_json(r);
    io.out << j.dump(2) << '\n';
  }
  return status_code(r.status);
}

inline int run_bounds(const RunConfig& c, const BoundaryGrid& grid, Streams io) {
  const HardyFunction f = parse_nonzero(c.f_exprs[0], grid);
  CertifyOptions opts;
  opts.solver.tol_residual = c.tol;
  const BoundReport b = certify(f, c.n, *c.p, grid, opts);
  emit_warnings(b.warnings, io.err);
  if (c.output == "csv") {
    io.out << report::to_csv(b);
  } else {
    json j = header(c, grid);
    j["n"] = c.n;
    j.update(report::to_json(b));
    io.out << j.dump(2) << '\n';
  }
  if (b.solution && b.solution->status == Status::nonconverged) return kSolverFailure;
  return kOk;
}

inline int emit_sweep(const RunConfig& c, const BoundaryGrid& grid, const SweepResult& s, Streams io) {
  emit_warnings(s.warnings, io.err);
  for (const auto& row : s.rows) emit_warnings(row.warnings, io.err);
  if (c.output == "csv") {
    io.out << report::to_csv(s);
  } else {
    json j = header(c, grid);
    j.update(report::to_json(s));
    io.out << j.dump(2) << '\n';
  }
  for (const auto& row : s.rows) {
    if (row.status == Status::nonconverged) return kSolverFailure;
  }
  return kOk;
}

inline SweepOptions sweep_options(const RunConfig& c, const BoundaryGrid& grid) {
  SweepOptions o;
  o.grid = grid;
  o.solver.tol_residual = c.tol;
  return o;
}

inline int run_roots(const RunConfig& c, const BoundaryGrid& grid, Streams io) {
  const HardyFunction f = parse_nonzero(c.f_exprs[0], grid);
  SolverOptions opts;
  opts.tol_residual = c.tol;
  const OpaResult r = solve_general(f, c.n, *c.p, grid, opts);
  emit_warnings(r.warnings, io.err);
  const RootsResult roots = r.status == Status::nonconverged ? RootsResult{} : roots_of(r.coeffs);
  if (c.output == "csv") {
    io.out << "root\n";
    for (const cd& w : roots.roots) io.out << report::complex_csv(w) << '\n';
  } else {
    json j = header(c, grid);
    j["n"] = c.n;
    j["coeffs"] = report::complex_list(r.coeffs);
    j["roots"] = report::complex_list(roots.roots);
    j["degenerate"] = roots.degenerate;
    j["status"] = to_string(r.status);
    io.out << j.dump(2) << '\n';
  }
  return status_code(r.status);
}

inline int run_check(const RunConfig& c, const BoundaryGrid& grid, Streams io) {
  checks::SuiteConfig cfg;
  cfg.seed = c.seed;
  cfg.grid = grid;
  cfg.solver.tol_residual = c.tol;
  if (c.p) cfg.p_list = {*c.p};
  if (!c.p_list.empty()) cfg.p_list = c.p_list;
  const bool ok = checks::run_suite(c.suite, cfg, [&](const json& rec) { io.out << rec.dump() << '\n'; });
  return ok ? kOk : kSolverFailure;
}

}  // namespace detail

/// Executes one command, writing the report to io.out and diagnostics to io.err.
inline int run(const RunConfig& config, Streams io) {
  try {
    detail::validate(config);
    const BoundaryGrid grid(std::size_t{1} << config.grid_log2);
    if (config.command == "solve") return detail::run_solve(config, grid, io);
    if (config.command == "bounds") return detail::run_bounds(config, grid, io);
    if (config.command == "roots") return detail::run_roots(config, grid, io);
    if (config.command == "check") return detail::run_check(config, grid, io);
    const SweepOptions so = detail::sweep_options(config, grid);
    if (config.command == "sweep-p") {
      const HardyFunction f = detail::parse_nonzero(config.f_exprs[0], grid);
      return detail::emit_sweep(config, grid, sweep_p(f, config.n, config.p_list, so), io);
    }
    if (config.command == "sweep-n") {
      const HardyFunction f = detail::parse_nonzero(config.f_exprs[0], grid);
      return detail::emit_sweep(config, grid, sweep_degree(f, *config.p, config.n_max, so), io);
    }
    std::vector<HardyFunction> fs;
    for (const auto& e : config.f_exprs) fs.push_back(detail::parse_nonzero(e, grid));
    return detail::emit_sweep(config, grid, sweep_function_sequence(fs, config.n, *config.p, so), io);
  } catch (const InvalidArgument& e) {
    io.err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const UnsupportedInput& e) {
    io.err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace opa::cli
