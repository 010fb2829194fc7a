#pragma once

// Certified bounds on the OPA error ||q_{n,p}[f] f - 1||_p.
//
// Lower bounds come from dual witnesses: any psi in L^q with mean 1 that
// annihilates f, zf, ..., z^n f gives error >= 1 / ||psi||_q.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opa/circle.hpp"
#include "opa/error.hpp"
#include "opa/functions.hpp"
#include "opa/solvers.hpp"

namespace opa {

enum class Direction { lower, upper };

struct PythagoreanParams {
  double r = 2.0;
  double K = 1.0;
  Direction direction = Direction::lower;
  double p = 2.0;
};

/// Exponent r and weight K in ||x+y||^r >= ||x||^r + K ||y||^r (lower) or
/// <= (upper), valid whenever x is Birkhoff-James orthogonal to y.
inline PythagoreanParams pythagorean_params(double p, Direction dir) {
  detail::require_exponent(p);
  const double power_weight = 1.0 / (std::pow(2.0, p - 1.0) - 1.0);
  const bool power_form = (p <= 2.0) == (dir == Direction::upper);
  if (p == 2.0) return {2.0, 1.0, dir, p};
  if (power_form) return {p, power_weight, dir, p};
  return {2.0, p - 1.0, dir, p};
}

struct PythagoreanSlack {
  PythagoreanParams lower_params;
  PythagoreanParams upper_params;
  /// ||x+y||^r - ||x||^r - K ||y||^r for the lower parameters.
  double lower = 0.0;
  /// ||x||^r + K ||y||^r - ||x+y||^r for the upper parameters.
  double upper = 0.0;
  cd orthogonality_residual;
};

/// Slacks of both Pythagorean inequalities; requires x orthogonal to y.
inline PythagoreanSlack pythagorean_check(const BoundarySamples& x, const BoundarySamples& y, double p,
                                          double hypothesis_tol = 1e-8) {
  detail::require_exponent(p);
  const cd res = bj_residual(x, y, p);
  const double nx = lp_norm(x, p);
  const double ny = lp_norm(y, p);
  const double scale = std::max(1.0, std::pow(nx, p - 1.0) * ny);
  if (std::abs(res) > hypothesis_tol * scale) {
    throw InvalidArgument("x is not orthogonal to y: |residual| = " + std::to_string(std::abs(res)));
  }
  const double nxy = lp_norm(x + y, p);
  PythagoreanSlack out;
  out.orthogonality_residual = res;
  out.lower_params = pythagorean_params(p, Direction::lower);
  out.upper_params = pythagorean_params(p, Direction::upper);
  const auto& lo = out.lower_params;
  const auto& up = out.upper_params;
  out.lower = std::pow(nxy, lo.r) - std::pow(nx, lo.r) - lo.K * std::pow(ny, lo.r);
  out.upper = std::pow(nx, up.r) + up.K * std::pow(ny, up.r) - std::pow(nxy, up.r);
  return out;
}

/// A feasible point of the dual problem for degree n: mean psi = 1 and
/// <z^k f, psi> = 0 for k = 0..n.
struct DualWitness {
  BoundarySamples psi;
  std::vector<cd> constraint_residuals;
  cd zeroth_coeff;
  int degree = 0;
  /// Tolerance scale for each constraint, ||z^k f||_2 ||psi||_2.
  std::vector<double> residual_scales;

  bool valid(double coeff_tol = 1e-9, double residual_tol = 1e-8) const {
    if (!(std::abs(zeroth_coeff - 1.0) <= coeff_tol)) return false;
    for (std::size_t k = 0; k < constraint_residuals.size(); ++k) {
      if (!(std::abs(constraint_residuals[k]) <= residual_tol * std::max(1.0, residual_scales[k]))) return false;
    }
    return true;
  }
};

inline DualWitness make_witness(BoundarySamples psi, const BoundarySamples& f, int degree) {
  require_same_grid(psi, f);
  DualWitness w{std::move(psi), {}, {}, degree, {}};
  w.zeroth_coeff = detail::pairwise_mean<cd>(w.psi.size(), [&](std::size_t j) { return w.psi[j]; });
  const double psi_norm = lp_norm(w.psi, 2.0);
  const auto basis = shifted_basis(f, degree);
  for (const auto& b : basis) {
    w.constraint_residuals.push_back(pairing(b, w.psi));
    w.residual_scales.push_back(lp_norm(b, 2.0) * psi_norm);
  }
  return w;
}

/// 1 / ||psi||_q, a lower bound on the degree-n error.
inline double dual_feasible_value(const DualWitness& w, double q) {
  if (!w.valid()) {
    double worst = 0.0;
    for (const cd& r : w.constraint_residuals) worst = std::max(worst, std::abs(r));
    throw InvalidArgument("dual witness violates its constraints (psi_0 = " + std::to_string(w.zeroth_coeff.real()) +
                          ", max residual " + std::to_string(worst) + ")");
  }
  return 1.0 / lp_norm(w.psi, q);
}

namespace detail {

inline void require_unit_constant(const TaylorSeries& f) {
  if (f.coeffs.empty() || std::abs(f[0] - 1.0) > 1e-12) throw InvalidArgument("series must be normalized to f(0) = 1");
}

inline BoundarySamples analytic_samples(const BoundaryGrid& grid, const std::vector<cd>& c) {
  return BoundarySamples::from(grid, [&](cd z) { return poly::eval(c, z); });
}

inline BoundarySamples taylor_samples(const BoundaryGrid& grid, const TaylorSeries& f) {
  return analytic_samples(grid, f.coeffs);
}

}  // namespace detail

/// psi = 1 + psi_1 z + ... + psi_n z^n with <z^k f, psi> = 0 for k < n, i.e.
/// sum_{j>=k} f_{j-k} conj(psi_j) = -delta_k0. Bounds the degree n-1 error.
/// `f_samples` are the boundary values used to verify the constraints.
inline DualWitness psi_toeplitz_system(const TaylorSeries& f, int n, const BoundarySamples& f_samples) {
  detail::require_unit_constant(f);
  if (n < 1) throw InvalidArgument("toeplitz witness needs n >= 1");
  if (f.size() < static_cast<std::size_t>(n) + 1) throw InvalidArgument("not enough Taylor coefficients");
  const Eigen::Index m = n;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index j = std::max<Eigen::Index>(k, 1); j <= m; ++j) a(k, j - 1) = f[static_cast<std::size_t>(j - k)];
  }
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
  rhs(0) = -1.0;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) throw SingularSystem("toeplitz witness system is singular");
  const Eigen::VectorXcd conj_psi = lu.solve(rhs);
  std::vector<cd> psi(static_cast<std::size_t>(n) + 1);
  psi[0] = 1.0;
  for (Eigen::Index k = 0; k < m; ++k) psi[static_cast<std::size_t>(k) + 1] = std::conj(conj_psi(k));
  return make_witness(detail::analytic_samples(f_samples.grid(), psi), f_samples, n - 1);
}

/// Overload that samples the truncated series itself (exact for polynomials).
inline DualWitness psi_toeplitz_system(const TaylorSeries& f, int n, const BoundaryGrid& grid) {
  return psi_toeplitz_system(f, n, detail::taylor_samples(grid, f));
}

/// |g_n| / ||1 + g_1 z + ... + g_n z^n||_q where 1/f = sum g_k z^k; a lower
/// bound on the degree n-1 error. Returns 0 when g_n = 0.
inline double lower_bound_reciprocal(const TaylorSeries& f, int n, double q, const BoundaryGrid& grid) {
  detail::require_unit_constant(f);
  if (n < 1) throw InvalidArgument("reciprocal bound needs n >= 1");
  const TaylorSeries g = reciprocal_series(f, static_cast<std::size_t>(n) + 1);
  if (g[static_cast<std::size_t>(n)] == cd{0.0, 0.0}) return 0.0;
  return std::abs(g[static_cast<std::size_t>(n)]) / lp_norm(detail::taylor_samples(grid, g), q);
}

/// The snail witness 1 + sum_k conj(g_{n-k} / g_n) z^k.
inline BoundarySamples snail_witness(const TaylorSeries& f, int n, const BoundaryGrid& grid) {
  detail::require_unit_constant(f);
  const TaylorSeries g = reciprocal_series(f, static_cast<std::size_t>(n) + 1);
  const cd gn = g[static_cast<std::size_t>(n)];
  if (gn == cd{0.0, 0.0}) throw InvalidArgument("g_n = 0: the snail witness does not exist");
  std::vector<cd> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = std::conj(g[static_cast<std::size_t>(n - k)] / gn);
  return detail::analytic_samples(grid, c);
}

struct Completion {
  /// Taylor coefficients G_1..G_M of G in z H^q.
  std::vector<cd> g_coeffs;
  double min_norm = 0.0;
  bool converged = false;
};

/// Minimizes ||F + conj(G)||_q over G = G_1 z + ... + G_M z^M.
inline Completion anti_analytic_completion(const BoundarySamples& F, double q, int trunc_m,
                                           const SolverOptions& opts = {}) {
  detail::require_exponent(q);
  if (trunc_m < 1 || static_cast<std::size_t>(trunc_m) >= F.size() / 2) {
    throw InvalidArgument("truncation must lie in [1, N/2)");
  }
  const BoundaryGrid& grid = F.grid();
  std::vector<BoundarySamples> basis;
  basis.reserve(static_cast<std::size_t>(trunc_m));
  for (int k = 1; k <= trunc_m; ++k) {
    basis.push_back(BoundarySamples::from(grid, [k](cd z) { return std::pow(std::conj(z), k); }));
  }
  const BoundarySamples target = cd{-1.0, 0.0} * F;
  const Coeffs zero(static_cast<std::size_t>(trunc_m), cd{0.0, 0.0});
  std::vector<Coeffs> starts{zero};
  try {
    starts.push_back(detail::least_squares_fit(basis, target));
  } catch (const SingularSystem&) {
  }
  const detail::LpFit fit = detail::minimize_lp(basis, target, q, opts, starts);
  Completion out;
  const double base = lp_norm(F, q);
  const double value = lp_norm(fit_residual(fit.coeffs, basis, target), q);
  if (value <= base) {
    out.min_norm = value;
    for (const cd& c : fit.coeffs) out.g_coeffs.push_back(std::conj(c));
    out.converged = fit.converged;
  } else {
    out.min_norm = base;
    out.g_coeffs = zero;
  }
  return out;
}

struct ImprovedBound {
  double value = 0.0;
  int truncation = 0;
  bool converged = false;
};

inline int default_truncation(int n) { return 4 * (n + 1); }

/// 1 / min_G ||psi_snail + conj(G)||_q, a lower bound on the degree n-1 error
/// at least as large as lower_bound_reciprocal. The truncation doubles from
/// `trunc_m` until the minimum moves by less than 1e-6 or reaches `max_m`.
inline ImprovedBound improved_lower_bound(const TaylorSeries& f, int n, double p, int trunc_m, const BoundaryGrid& grid,
                                          int max_m = 64, const SolverOptions& opts = {}) {
  const double q = conjugate_exponent(p);
  const BoundarySamples psi = snail_witness(f, n, grid);
  ImprovedBound out;
  double previous = lp_norm(psi, q);
  int m = std::max(1, trunc_m);
  for (;;) {
    const Completion c = anti_analytic_completion(psi, q, m, opts);
    out.truncation = m;
    out.converged = c.converged;
    const bool settled = previous - c.min_norm < 1e-6;
    previous = std::min(previous, c.min_norm);
    if (settled || 2 * m > max_m) break;
    m *= 2;
  }
  out.value = 1.0 / previous;
  return out;
}

/// 1 - prod |w_i|; bounds the error of any f vanishing at every w_i.
inline double lower_bound_blaschke_zeros(const std::vector<cd>& zeros) {
  double prod = 1.0;
  for (const cd& w : zeros) {
    if (!(std::abs(w) < 1.0)) throw InvalidArgument("zero outside the open unit disk");
    prod *= std::abs(w);
  }
  return 1.0 - prod;
}

/// (1 - |J(0)|^2) / ||1 - conj(J(0)) J||_q for an inner divisor J of f.
/// Returns 0 for trivial J.
inline double lower_bound_inner(const FiniteBlaschke& J, double q, const BoundaryGrid& grid) {
  if (J.trivial()) return 0.0;
  const cd j0 = J.at_zero();
  const BoundarySamples psi = BoundarySamples::from(grid, [&](cd z) { return 1.0 - std::conj(j0) * J(z); });
  return (1.0 - std::norm(j0)) / lp_norm(psi, q);
}

/// sqrt(1 - |J(0)|^2); a lower bound only for p >= 2.
inline double lower_bound_h2_inner(const FiniteBlaschke& J) { return std::sqrt(std::max(0.0, 1.0 - std::norm(J.at_zero()))); }

/// sqrt(1 - (q_{n,2}[f] f)(0)); an upper bound for 1 < p <= 2.
inline double upper_bound_p_lt_2(const HardyFunction& f, int n, const BoundaryGrid& grid) {
  const cd f0 = f.at_zero();
  if (f0 == cd{0.0, 0.0}) throw InvalidArgument("f(0) = 0");
  const OpaResult g = gram_solve_p2(f, n, grid);
  const double radicand = 1.0 - (g.coeffs[0] * f0).real();
  if (radicand < -1e-10) throw Inconsistency("negative radicand " + std::to_string(radicand));
  return std::sqrt(std::max(0.0, radicand));
}

struct BoundEntry {
  double value = 0.0;
  std::string provenance;
};

struct BoundReport {
  std::vector<BoundEntry> lower;
  std::vector<BoundEntry> upper;
  std::optional<double> computed_error;
  std::optional<OpaResult> solution;
  std::vector<std::string> warnings;

  double max_lower() const {
    double m = 0.0;
    for (const auto& e : lower) m = std::max(m, e.value);
    return m;
  }
  double min_upper() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : upper) m = std::min(m, e.value);
    return m;
  }
  bool consistent(double tol = 1e-8) const {
    if (max_lower() > min_upper() + tol) return false;
    if (computed_error) return max_lower() - tol <= *computed_error && *computed_error <= min_upper() + tol;
    return true;
  }
};

struct CertifyOptions {
  bool compute_error = true;
  bool improved = true;
  int max_truncation = 64;
  SolverOptions solver{};
};

namespace detail {

template <class F>
void add_bound(std::vector<BoundEntry>& list, std::vector<std::string>& warnings, const char* tag, F&& compute) {
  try {
    const double v = compute();
    if (std::isfinite(v)) {
      list.push_back({v, tag});
    } else {
      warnings.push_back(std::string(tag) + ": non-finite value");
    }
  } catch (const std::exception& e) {
    warnings.push_back(std::string(tag) + ": " + e.what());
  }
}

}  // namespace detail

/// Every applicable bound on the degree-n error for f, plus the computed
/// error when requested. Failures of individual bounds become warnings.
inline BoundReport certify(const HardyFunction& f, int n, double p, const BoundaryGrid& grid,
                           const CertifyOptions& options = {}) {
  detail::require_exponent(p);
  if (n < 0) throw InvalidArgument("degree must be nonnegative");
  const cd f0 = f.at_zero();
  if (f0 == cd{0.0, 0.0}) throw InvalidArgument("certify requires f(0) != 0");
  const double q = conjugate_exponent(p);
  const HardyFunction fn = HardyFunction::scaled(1.0 / f0, f);
  BoundReport report;

  const auto count = static_cast<std::size_t>(n) + 2;
  std::optional<TaylorSeries> series;
  try {
    series = taylor_coefficients(fn, count, grid);
    series->coeffs[0] = 1.0;
  } catch (const std::exception& e) {
    report.warnings.push_back(std::string("taylor: ") + e.what());
  }
  if (series) {
    const BoundarySamples fs = evaluate_on_grid(fn, grid);
    detail::add_bound(report.lower, report.warnings, "toeplitz_witness",
                      [&] { return dual_feasible_value(psi_toeplitz_system(*series, n + 1, fs), q); });
    detail::add_bound(report.lower, report.warnings, "reciprocal_series",
                      [&] { return lower_bound_reciprocal(*series, n + 1, q, grid); });
    if (options.improved) {
      detail::add_bound(report.lower, report.warnings, "truncated_witness", [&] {
        const ImprovedBound b =
            improved_lower_bound(*series, n + 1, p, default_truncation(n + 1), grid, options.max_truncation, options.solver);
        if (!b.converged) report.warnings.push_back("truncated_witness: completion did not converge");
        return b.value;
      });
    }
  }

  try {
    const InnerPart ip = inner_part(fn);
    if (!ip.trivial()) {
      detail::add_bound(report.lower, report.warnings, "inner_part", [&] { return lower_bound_inner(ip.inner, q, grid); });
      detail::add_bound(report.lower, report.warnings, "blaschke_zeros",
                        [&] { return lower_bound_blaschke_zeros(ip.inner.zeros); });
      if (p >= 2.0) {
        detail::add_bound(report.lower, report.warnings, "h2_inner", [&] { return lower_bound_h2_inner(ip.inner); });
      }
    }
  } catch (const std::exception& e) {
    report.warnings.push_back(std::string("inner part unavailable: ") + e.what());
  }

  report.upper.push_back({1.0, "zero_polynomial"});
  if (p <= 2.0) {
    detail::add_bound(report.upper, report.warnings, "h2_projection", [&] { return upper_bound_p_lt_2(f, n, grid); });
  }

  if (options.compute_error) {
    OpaResult r = solve_general(f, n, p, grid, options.solver);
    report.computed_error = r.error;
    for (const auto& w : r.warnings) report.warnings.push_back("solver: " + w);
    if (r.status == Status::nonconverged) report.warnings.push_back("solver: nonconverged");
    report.solution = std::move(r);
  }
  if (report.max_lower() > report.min_upper() + 1e-8) {
    report.warnings.push_back("inconsistent report: max lower bound exceeds min upper bound");
  }
  if (report.computed_error && !report.consistent()) {
    report.warnings.push_back("computed error lies outside the certified interval");
  }
  return report;
}

}  // namespace opa
