#pragma once

// Sweeps over p, degree and function sequences, OPA root loci, and the
// structural checks on linear OPAs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "opa/circle.hpp"
#include "opa/error.hpp"
#include "opa/functions.hpp"
#include "opa/polynomial.hpp"
#include "opa/solvers.hpp"

namespace opa {

struct SweepRow {
  double key = 0.0;
  Coeffs coeffs;
  double error = 0.0;
  double residual_max = 0.0;
  std::vector<cd> roots;
  Status status = Status::converged;
  /// Coefficient distance to the final row (function sequences only).
  std::optional<double> distance_to_last;
  std::vector<std::string> warnings;
};

struct SweepResult {
  std::string key_name;
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

struct SweepOptions {
  SolverOptions solver{};
  BoundaryGrid grid = uniform_grid(kDefaultGridPoints);
  /// Rows solved from the previous row's coefficients.
  bool chain = true;
  /// Allowed coefficient jump per unit change of p between neighbours.
  double lipschitz_budget = 10.0;
  double lipschitz_window = 0.05;
};

/// Largest coefficient difference, padding the shorter vector with zeros.
inline double coeff_distance(const Coeffs& a, const Coeffs& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
    const cd x = k < a.size() ? a[k] : cd{};
    const cd y = k < b.size() ? b[k] : cd{};
    d = std::max(d, std::abs(x - y));
  }
  return d;
}

struct RootsResult {
  std::vector<cd> roots;
  bool degenerate = false;
};

/// Roots of q after dropping trailing coefficients below rel_tol * max|q_k|.
inline RootsResult roots_of(const Coeffs& q, double rel_tol = 1e-12) {
  const Coeffs t = poly::trim(q, rel_tol);
  if (t.empty()) return {{}, true};
  return {poly::roots(t), false};
}

namespace detail {

inline SweepRow solve_row(double key, const HardyFunction& f, int n, double p, const SweepOptions& opts,
                          const std::optional<Coeffs>& start) {
  SweepRow row;
  row.key = key;
  try {
    OpaProblem problem{f, n, p};
    problem.grid = opts.grid;
    problem.options = opts.solver;
    if (start && std::abs(f.at_zero()) != 0.0) {
      Coeffs init = *start;
      init.resize(static_cast<std::size_t>(n) + 1, cd{0.0, 0.0});
      problem.initial = std::move(init);
    }
    const OpaResult r = solve_general(problem);
    row.coeffs = r.coeffs;
    row.error = r.error;
    row.residual_max = r.residual_max();
    row.status = r.status;
    row.warnings = r.warnings;
    row.roots = roots_of(r.coeffs).roots;
  } catch (const std::exception& e) {
    row.status = Status::nonconverged;
    row.warnings.push_back(e.what());
  }
  return row;
}

inline std::string format_key(double k) {
  std::ostringstream os;
  os << k;
  return os.str();
}

}  // namespace detail

/// One solve per p, in increasing order; neighbours closer than the
/// Lipschitz window whose coefficients jump more than the budget are
/// reported.
inline SweepResult sweep_p(const HardyFunction& f, int n, std::vector<double> p_list, const SweepOptions& opts = {}) {
  if (p_list.empty()) throw InvalidArgument("empty p list");
  for (double p : p_list) detail::require_exponent(p);
  std::sort(p_list.begin(), p_list.end());
  SweepResult out{"p", {}, {}};
  std::optional<Coeffs> prev;
  for (double p : p_list) {
    SweepRow row = detail::solve_row(p, f, n, p, opts, opts.chain ? prev : std::nullopt);
    if (row.status != Status::nonconverged && !row.coeffs.empty()) prev = row.coeffs;
    if (!out.rows.empty()) {
      const SweepRow& last = out.rows.back();
      const double dp = p - last.key;
      if (dp > 0.0 && dp <= opts.lipschitz_window && !last.coeffs.empty() && !row.coeffs.empty()) {
        const double jump = coeff_distance(row.coeffs, last.coeffs);
        if (jump > opts.lipschitz_budget * dp) {
          out.warnings.push_back("coefficient jump " + detail::format_key(jump) + " between p = " +
                                 detail::format_key(last.key) + " and p = " + detail::format_key(p));
        }
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

/// One solve per degree 0..n_max; errors must not increase.
inline SweepResult sweep_degree(const HardyFunction& f, double p, int n_max, const SweepOptions& opts = {}) {
  detail::require_exponent(p);
  if (n_max < 0) throw InvalidArgument("n_max must be nonnegative");
  SweepResult out{"n", {}, {}};
  std::optional<Coeffs> prev;
  for (int n = 0; n <= n_max; ++n) {
    SweepRow row = detail::solve_row(n, f, n, p, opts, opts.chain ? prev : std::nullopt);
    if (row.status != Status::nonconverged && !row.coeffs.empty()) prev = row.coeffs;
    if (!out.rows.empty() && row.error > out.rows.back().error + 1e-10) {
      out.warnings.push_back("error increased from n = " + std::to_string(n - 1) + " to n = " + std::to_string(n));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

/// One solve per function, in order; each row records its coefficient
/// distance to the final row.
inline SweepResult sweep_function_sequence(const std::vector<HardyFunction>& fs, int n, double p,
                                           const SweepOptions& opts = {}) {
  detail::require_exponent(p);
  if (fs.empty()) throw InvalidArgument("empty function sequence");
  SweepResult out{"index", {}, {}};
  std::optional<Coeffs> prev;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    SweepRow row = detail::solve_row(static_cast<double>(i), fs[i], n, p, opts, opts.chain ? prev : std::nullopt);
    if (row.status != Status::nonconverged && !row.coeffs.empty()) prev = row.coeffs;
    out.rows.push_back(std::move(row));
  }
  const Coeffs& last = out.rows.back().coeffs;
  for (auto& row : out.rows) row.distance_to_last = coeff_distance(row.coeffs, last);
  return out;
}

/// Roots of q_{n,p}[f]; empty and degenerate when the OPA vanishes.
inline RootsResult opa_roots(const HardyFunction& f, int n, double p, const BoundaryGrid& grid,
                             const SolverOptions& opts = {}) {
  const OpaResult r = solve_general(f, n, p, grid, opts);
  if (r.status == Status::nonconverged) throw Inconsistency("solver did not converge");
  return roots_of(r.coeffs);
}

/// Distance between q_{1,p}[f(gamma z)] and the prediction
/// (a_0, gamma a_1) from q_{1,p}[f] = a_0 + a_1 z.
inline double rotation_symmetry_check(const HardyFunction& f, double p, cd gamma, const BoundaryGrid& grid,
                                      const SolverOptions& opts = {}) {
  if (std::abs(std::abs(gamma) - 1.0) > 1e-12) throw InvalidArgument("gamma must be unimodular");
  const HardyFunction rotated = HardyFunction::rotated(gamma, f);
  const auto solve = [&](const HardyFunction& h) {
    const OpaResult r = p == 2.0 ? gram_solve_p2(h, 1, grid) : solve_general(h, 1, p, grid, opts);
    if (r.status == Status::nonconverged) throw Inconsistency("solver did not converge");
    return r.coeffs;
  };
  const Coeffs base = solve(f);
  const Coeffs turned = solve(rotated);
  return coeff_distance(turned, poly::rotate(base, gamma));
}

struct CollapseReport {
  bool applicable = false;
  std::string note;
  cd root;
  Coeffs cofactor;
  Coeffs linear_opa;
  double discrepancy = 0.0;
};

/// Writes q_{n,p}[f] = q~ (z - w) for an isolated root w and checks that the
/// linear OPA of q~ f is exactly z - w.
inline CollapseReport degree_collapse_check(const HardyFunction& f, int n, double p, const BoundaryGrid& grid,
                                            const SolverOptions& opts = {}, double cluster_tol = 1e-4) {
  CollapseReport out;
  if (n < 1) {
    out.note = "degree 0 OPAs have no roots";
    return out;
  }
  const OpaResult r = solve_general(f, n, p, grid, opts);
  if (r.status == Status::nonconverged) throw Inconsistency("solver did not converge");
  const Coeffs q = poly::trim(r.coeffs, 1e-12);
  const RootsResult rr = roots_of(q);
  std::optional<cd> pick;
  for (std::size_t i = 0; i < rr.roots.size() && !pick; ++i) {
    bool isolated = true;
    for (std::size_t j = 0; j < rr.roots.size(); ++j) {
      if (j != i && std::abs(rr.roots[i] - rr.roots[j]) < cluster_tol) isolated = false;
    }
    if (isolated) pick = rr.roots[i];
  }
  if (!pick) {
    out.note = rr.roots.empty() ? "OPA has no roots" : "all roots are clustered";
    return out;
  }
  out.applicable = true;
  out.root = *pick;
  out.cofactor = poly::divide_linear(q, *pick).quotient;
  const HardyFunction g = [&] {
    if (const Coeffs* fc = f.polynomial_coeffs()) return HardyFunction::polynomial(poly::mul(out.cofactor, *fc));
    return HardyFunction::product(HardyFunction::polynomial(out.cofactor), f);
  }();
  const OpaResult lin = solve_general(g, 1, p, grid, opts);
  if (lin.status == Status::nonconverged) throw Inconsistency("linear solve did not converge");
  out.linear_opa = lin.coeffs;
  out.discrepancy = coeff_distance(lin.coeffs, Coeffs{-*pick, cd{1.0, 0.0}});
  return out;
}

}  // namespace opa
