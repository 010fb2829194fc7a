#pragma once

// Optimal polynomial approximants: the polynomial q of degree <= n that
// minimizes ||q f - g||_p over the circle (g = 1 unless stated otherwise).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "opa/circle.hpp"
#include "opa/error.hpp"
#include "opa/functions.hpp"

namespace opa {

struct SolverOptions {
  double tol_residual = 1e-10;
  int max_iters = 500;
  /// Initial smoothing radius for 1 < p < 2, relative to the rms residual.
  double smoothing_eps_start = 1e-3;
  double continuation_factor = 0.1;
  bool warm_start = true;
  /// Relaxation for the fixed-point schemes; 1 is the plain iteration.
  double damping = 1.0;
  double aliasing_tol = kDefaultAliasingTolerance;

  void validate() const {
    if (!(tol_residual > 0.0)) throw InvalidArgument("tol_residual must be positive");
    if (max_iters <= 0) throw InvalidArgument("max_iters must be positive");
    if (!(continuation_factor > 0.0 && continuation_factor < 1.0)) {
      throw InvalidArgument("continuation_factor must lie in (0, 1)");
    }
    if (!(smoothing_eps_start > 0.0)) throw InvalidArgument("smoothing_eps_start must be positive");
    if (!(damping > 0.0 && damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
  }
};

enum class Method { gram2, convex, fixed_point0, fixed_point1 };
enum class Status { converged, nonconverged, degenerate };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::gram2: return "gram2";
    case Method::convex: return "convex";
    case Method::fixed_point0: return "fixed_point0";
    case Method::fixed_point1: return "fixed_point1";
  }
  return "?";
}

inline const char* to_string(Status s) {
  switch (s) {
    case Status::converged: return "converged";
    case Status::nonconverged: return "nonconverged";
    case Status::degenerate: return "degenerate";
  }
  return "?";
}

struct OpaResult {
  Coeffs coeffs;
  /// ||q f - g||_p on the grid.
  double error = 0.0;
  /// mean |R|^{p-2} conj(R) z^k f, R = q f - g, k = 0..n.
  std::vector<cd> residuals;
  int iterations = 0;
  Method method = Method::convex;
  Status status = Status::converged;
  /// Set when a fixed-point scheme runs outside its proven range p > 2.
  bool experimental = false;
  std::vector<std::string> warnings;

  double residual_max() const {
    double m = 0.0;
    for (const cd& r : residuals) m = std::max(m, std::abs(r));
    return m;
  }
  bool ok() const { return status != Status::nonconverged; }
};

struct OpaProblem {
  HardyFunction f;
  int degree = 0;
  double p = 2.0;
  HardyFunction target = HardyFunction::constant(1.0);
  BoundaryGrid grid = uniform_grid(kDefaultGridPoints);
  SolverOptions options{};
  /// Starting coefficients; when set, the solver starts here and nowhere else.
  std::optional<Coeffs> initial{};
  /// True when `target` is the constant 1 (enables the f(0) = 0 shortcut).
  bool unit_target = true;
};

/// Samples of z^k f, k = 0..n.
inline std::vector<BoundarySamples> shifted_basis(const BoundarySamples& f, int n) {
  std::vector<BoundarySamples> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  const BoundaryGrid& grid = f.grid();
  for (int k = 0; k <= n; ++k) {
    std::vector<cd> v(f.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::pow(grid.node(j), k) * f[j];
    out.emplace_back(grid, std::move(v));
  }
  return out;
}

/// sum_k a_k b_k - g at every node.
inline BoundarySamples fit_residual(const Coeffs& a, const std::vector<BoundarySamples>& basis,
                                    const BoundarySamples& g) {
  if (a.size() != basis.size()) throw InvalidArgument("coefficient count does not match the basis");
  std::vector<cd> r(g.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    cd acc = -g[j];
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * basis[k][j];
    r[j] = acc;
  }
  return BoundarySamples(g.grid(), std::move(r));
}

struct ObjectiveValue {
  double value = 0.0;
  /// Component k is dPhi/dx_k - i dPhi/dy_k for a_k = x_k + i y_k.
  std::vector<cd> gradient;
};

/// Phi(a) = mean (|R|^2 + eps^2)^{p/2}, R = sum a_k b_k - g, with gradient
/// p mean (|R|^2 + eps^2)^{p/2-1} conj(R) b_k. At eps = 0 the gradient
/// vanishes exactly when R is Birkhoff-James orthogonal to every b_k.
inline ObjectiveValue objective_and_gradient(const Coeffs& a, const std::vector<BoundarySamples>& basis,
                                             const BoundarySamples& g, double p, double eps = 0.0) {
  const BoundarySamples r = fit_residual(a, basis, g);
  const auto rv = r.values();
  const double e2 = eps * eps;
  std::vector<double> weight(rv.size());
  for (std::size_t j = 0; j < rv.size(); ++j) {
    const double s = std::norm(rv[j]) + e2;
    weight[j] = s > 0.0 ? std::pow(s, 0.5 * p - 1.0) : 0.0;
  }
  ObjectiveValue out;
  out.value = detail::pairwise_mean<double>(rv.size(), [&](std::size_t j) {
    const double s = std::norm(rv[j]) + e2;
    return s > 0.0 ? std::pow(s, 0.5 * p) : 0.0;
  });
  out.gradient.resize(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto bk = basis[k].values();
    out.gradient[k] =
        p * detail::pairwise_mean<cd>(rv.size(), [&](std::size_t j) { return weight[j] * std::conj(rv[j]) * bk[j]; });
  }
  return out;
}

/// Birkhoff-James residuals of R = sum a_k b_k - g against each b_k.
inline std::vector<cd> basis_residuals(const Coeffs& a, const std::vector<BoundarySamples>& basis,
                                       const BoundarySamples& g, double p) {
  const BoundarySamples r = fit_residual(a, basis, g);
  std::vector<cd> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(bj_residual(r, b, p));
  return out;
}

/// Component j = mean (q f - 1)^{<p-1>} z^j f for j = 0..deg q.
inline std::vector<cd> orthogonality_residuals(const Coeffs& q, const HardyFunction& f, double p,
                                               const BoundaryGrid& grid) {
  const BoundarySamples fs = evaluate_on_grid(f, grid);
  const auto basis = shifted_basis(fs, static_cast<int>(std::max<std::size_t>(q.size(), 1)) - 1);
  Coeffs a = q.empty() ? Coeffs{cd{0.0, 0.0}} : q;
  return basis_residuals(a, basis, BoundarySamples::constant(grid, 1.0), p);
}

namespace detail {

// Least-squares fit of g by span{b_k} in L^2 of the grid measure.
inline Coeffs least_squares_fit(const std::vector<BoundarySamples>& basis, const BoundarySamples& g) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd gram(m, m);
  Eigen::VectorXcd rhs(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      gram(j, k) = pairing(basis[static_cast<std::size_t>(k)], basis[static_cast<std::size_t>(j)]);
    }
    rhs(j) = pairing(g, basis[static_cast<std::size_t>(j)]);
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14)) {
    throw SingularSystem("Gram matrix is numerically singular");
  }
  const Eigen::VectorXcd sol = llt.solve(rhs);
  return Coeffs(sol.data(), sol.data() + m);
}

struct LpFit {
  Coeffs coeffs;
  int iterations = 0;
  bool converged = false;
};

class LpMinimizer {
 public:
  LpMinimizer(const std::vector<BoundarySamples>& basis, const BoundarySamples& g, double p,
              const SolverOptions& opts)
      : basis_(basis), g_(g), p_(p), opts_(opts) {
    const auto n = static_cast<Eigen::Index>(g.size());
    const auto m = static_cast<Eigen::Index>(basis.size());
    re_ = Eigen::MatrixXd(n, 2 * m);
    im_ = Eigen::MatrixXd(n, 2 * m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto bk = basis[static_cast<std::size_t>(k)].values();
      for (Eigen::Index j = 0; j < n; ++j) {
        const cd b = bk[static_cast<std::size_t>(j)];
        // dR/dx_k = b, dR/dy_k = i b.
        re_(j, k) = b.real();
        im_(j, k) = b.imag();
        re_(j, m + k) = -b.imag();
        im_(j, m + k) = b.real();
      }
    }
    basis_norms_.reserve(basis.size());
    for (const auto& b : basis) basis_norms_.push_back(lp_norm(b, p));
    g_norm_ = lp_norm(g, p);
  }

  double objective(const Coeffs& a, double eps) const { return objective_and_gradient(a, basis_, g_, p_, eps).value; }

  bool stationary(const Coeffs& a) const {
    const BoundarySamples r = fit_residual(a, basis_, g_);
    const double rnorm = lp_norm(r, p_);
    // An exact fit leaves R at rounding level, where |R|^{p-1} amplifies
    // the noise for p < 2; such a point is optimal.
    double magnitude = g_norm_;
    for (std::size_t k = 0; k < basis_.size(); ++k) magnitude += std::abs(a[k]) * basis_norms_[k];
    if (rnorm <= 64.0 * std::numeric_limits<double>::epsilon() * magnitude) return true;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      const double scale = std::pow(rnorm, p_ - 1.0) * basis_norms_[k];
      if (!(std::abs(bj_residual(r, basis_[k], p_)) <= opts_.tol_residual * std::max(1.0, scale))) return false;
    }
    return true;
  }

  LpFit run(Coeffs a) {
    LpFit out;
    const double rms = std::sqrt(lp_power_mean(fit_residual(a, basis_, g_), 2.0));
    if (rms == 0.0) {
      out.coeffs = std::move(a);
      out.converged = true;
      return out;
    }
    if (p_ < 2.0) {
      const double eps_floor = 1e-12 * rms;
      for (double eps = opts_.smoothing_eps_start * rms; eps > eps_floor; eps *= opts_.continuation_factor) {
        newton_stage(a, eps, /*final_stage=*/false, out.iterations);
        if (out.iterations >= opts_.max_iters) break;
      }
    }
    out.converged = newton_stage(a, 0.0, /*final_stage=*/true, out.iterations);
    out.coeffs = std::move(a);
    return out;
  }

 private:
  // Damped Newton iterations on the real coordinates with Armijo
  // backtracking. Returns whether the orthogonality residual met tolerance.
  bool newton_stage(Coeffs& a, double eps, bool final_stage, int& iterations) {
    const std::size_t m = a.size();
    const int stage_cap = final_stage ? opts_.max_iters : std::min(opts_.max_iters, 60);
    int local = 0;
    bool small_step = false;
    for (;;) {
      if (final_stage) {
        const bool ok = stationary(a);
        if (ok && small_step) return true;
        if (iterations >= opts_.max_iters || local >= stage_cap) return ok;
      } else if (iterations >= opts_.max_iters || local >= stage_cap) {
        return false;
      }
      const ObjectiveValue ov = objective_and_gradient(a, basis_, g_, p_, eps);
      Eigen::VectorXd grad(2 * static_cast<Eigen::Index>(m));
      for (std::size_t k = 0; k < m; ++k) {
        grad(static_cast<Eigen::Index>(k)) = ov.gradient[k].real();
        grad(static_cast<Eigen::Index>(m + k)) = -ov.gradient[k].imag();
      }
      Eigen::VectorXd dir = newton_direction(a, eps, grad);
      double slope = grad.dot(dir);
      if (!(slope < 0.0)) {
        dir = -grad;
        slope = -grad.squaredNorm();
      }
      if (slope == 0.0) return final_stage ? stationary(a) : false;
      // Below the resolution of the objective the Armijo test only sees
      // rounding noise; the gradient norm then serves as merit function.
      const bool resolvable = -slope > 1e-13 * std::max(ov.value, std::numeric_limits<double>::min());
      const double grad_now = gradient_norm(ov.gradient);
      double t = 1.0;
      bool accepted = false;
      Coeffs trial(m);
      for (int bt = 0; bt < 60; ++bt) {
        for (std::size_t k = 0; k < m; ++k) {
          trial[k] = a[k] + t * cd(dir(static_cast<Eigen::Index>(k)), dir(static_cast<Eigen::Index>(m + k)));
        }
        accepted = resolvable ? objective(trial, eps) <= ov.value + 1e-4 * t * slope
                              : gradient_norm(trial, eps) < grad_now;
        if (accepted) break;
        t *= 0.5;
        if (!resolvable && bt >= 30) break;
      }
      ++iterations;
      ++local;
      if (!accepted) return final_stage ? stationary(a) : false;
      double step = 0.0;
      double size = 1.0;
      for (std::size_t k = 0; k < m; ++k) {
        step = std::max(step, std::abs(trial[k] - a[k]));
        size = std::max(size, std::abs(trial[k]));
      }
      a = trial;
      small_step = step <= 1e-9 * size;
      if (!final_stage && small_step) return false;
      if (step == 0.0) return final_stage ? stationary(a) : false;
    }
  }

  static double gradient_norm(const std::vector<cd>& g) {
    double s = 0.0;
    for (const cd& v : g) s += std::norm(v);
    return std::sqrt(s);
  }
  double gradient_norm(const Coeffs& a, double eps) const {
    return gradient_norm(objective_and_gradient(a, basis_, g_, p_, eps).gradient);
  }

  Eigen::VectorXd newton_direction(const Coeffs& a, double eps, const Eigen::VectorXd& grad) const {
    const BoundarySamples r = fit_residual(a, basis_, g_);
    const auto rv = r.values();
    const auto n = static_cast<Eigen::Index>(rv.size());
    double mean_sq = 0.0;
    for (const cd& v : rv) mean_sq += std::norm(v);
    mean_sq /= static_cast<double>(n);
    const double floor_sq = std::max(1e-24 * mean_sq, std::numeric_limits<double>::min());
    Eigen::VectorXd w1(n);
    Eigen::VectorXd w2(n);
    Eigen::MatrixXd v(n, re_.cols());
    for (Eigen::Index j = 0; j < n; ++j) {
      const cd rj = rv[static_cast<std::size_t>(j)];
      const double s = std::max(std::norm(rj) + eps * eps, floor_sq);
      w1(j) = p_ * std::pow(s, 0.5 * p_ - 1.0);
      w2(j) = p_ * (p_ - 2.0) * std::pow(s, 0.5 * p_ - 2.0);
      v.row(j) = rj.real() * re_.row(j) + rj.imag() * im_.row(j);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd h = (re_.transpose() * w1.asDiagonal() * re_ + im_.transpose() * w1.asDiagonal() * im_ +
                         v.transpose() * w2.asDiagonal() * v) *
                        inv_n;
    const double diag_scale = std::max(h.diagonal().cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    for (double mu = 0.0; mu < 1e6 * diag_scale; mu = (mu == 0.0 ? 1e-14 * diag_scale : mu * 100.0)) {
      Eigen::MatrixXd hm = h;
      hm.diagonal().array() += mu;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hm);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.rcond() > 1e-15) {
        Eigen::VectorXd d = ldlt.solve(-grad);
        if (d.allFinite()) return d;
      }
    }
    return -grad;
  }

  const std::vector<BoundarySamples>& basis_;
  const BoundarySamples& g_;
  double p_;
  SolverOptions opts_;
  Eigen::MatrixXd re_;
  Eigen::MatrixXd im_;
  std::vector<double> basis_norms_;
  double g_norm_ = 0.0;
};

// Minimizes ||sum a_k b_k - g||_p starting from the best of the candidates.
inline LpFit minimize_lp(const std::vector<BoundarySamples>& basis, const BoundarySamples& g, double p,
                         const SolverOptions& opts, const std::vector<Coeffs>& starts) {
  LpMinimizer minimizer(basis, g, p, opts);
  const Coeffs* best = nullptr;
  double best_value = std::numeric_limits<double>::infinity();
  for (const Coeffs& s : starts) {
    const double v = minimizer.objective(s, 0.0);
    if (v < best_value) {
      best_value = v;
      best = &s;
    }
  }
  if (!best) throw InvalidArgument("no starting point supplied");
  return minimizer.run(*best);
}

inline void check_quadrature(OpaResult& r, const HardyFunction& f, const HardyFunction& g, double p,
                             const BoundaryGrid& grid, double tol) {
  const BoundaryGrid fine = grid.refined();
  const BoundarySamples fs = evaluate_on_grid(f, fine);
  const BoundarySamples gs = evaluate_on_grid(g, fine);
  const BoundarySamples res = BoundarySamples::from(fine, [&](cd z) { return poly::eval(r.coeffs, z); }) * fs - gs;
  const double fine_err = lp_norm(res, p);
  if (!quadrature_agrees(r.error, fine_err, tol)) {
    r.warnings.push_back("quadrature: error " + std::to_string(r.error) + " on " + std::to_string(grid.size()) +
                         " points vs " + std::to_string(fine_err) + " on " + std::to_string(fine.size()));
  }
}

inline void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("p must lie in (1, inf), got " + std::to_string(p));
}

}  // namespace detail

/// p = 2 OPA from the Gram system sum_k <z^k f, z^j f> a_k = conj(f(0)) delta_j0.
inline OpaResult gram_solve_p2(const HardyFunction& f, int n, const BoundaryGrid& grid) {
  if (n < 0) throw InvalidArgument("degree must be nonnegative");
  const BoundarySamples fs = evaluate_on_grid(f, grid);
  const auto basis = shifted_basis(fs, n);
  const BoundarySamples one = BoundarySamples::constant(grid, 1.0);
  OpaResult out;
  out.method = Method::gram2;
  out.coeffs = detail::least_squares_fit(basis, one);
  out.error = lp_norm(fit_residual(out.coeffs, basis, one), 2.0);
  out.residuals = basis_residuals(out.coeffs, basis, one, 2.0);
  return out;
}

/// Minimizes ||q f - g||_p over polynomials of degree <= n by damped Newton
/// descent; success means every orthogonality residual is below tolerance.
inline OpaResult solve_general(const OpaProblem& problem) {
  detail::require_exponent(problem.p);
  if (problem.degree < 0) throw InvalidArgument("degree must be nonnegative");
  problem.options.validate();
  const BoundaryGrid& grid = problem.grid;
  const BoundarySamples fs = evaluate_on_grid(problem.f, grid);
  const BoundarySamples gs = evaluate_on_grid(problem.target, grid);
  const auto basis = shifted_basis(fs, problem.degree);
  const auto m = static_cast<std::size_t>(problem.degree) + 1;

  OpaResult out;
  out.method = Method::convex;
  if (problem.unit_target && std::abs(problem.f.at_zero()) == 0.0) {
    // 1 is orthogonal to f P_n, so the best approximant is 0.
    out.coeffs = Coeffs(m, cd{0.0, 0.0});
    out.error = lp_norm(gs, problem.p);
    out.residuals = basis_residuals(out.coeffs, basis, gs, problem.p);
    out.status = Status::degenerate;
    out.warnings.push_back("f(0) = 0: the optimal approximant is identically zero");
    return out;
  }

  std::vector<Coeffs> starts;
  if (problem.initial) {
    if (problem.initial->size() != m) throw InvalidArgument("initial guess has the wrong degree");
    starts.push_back(*problem.initial);
  } else {
    starts.emplace_back(m, cd{0.0, 0.0});
    if (problem.options.warm_start) {
      try {
        starts.push_back(detail::least_squares_fit(basis, gs));
      } catch (const SingularSystem&) {
        out.warnings.push_back("warm start skipped: singular Gram matrix");
      }
    }
  }
  const detail::LpFit fit = detail::minimize_lp(basis, gs, problem.p, problem.options, starts);
  out.coeffs = fit.coeffs;
  out.iterations = fit.iterations;
  out.error = lp_norm(fit_residual(out.coeffs, basis, gs), problem.p);
  out.residuals = basis_residuals(out.coeffs, basis, gs, problem.p);
  out.status = fit.converged ? Status::converged : Status::nonconverged;
  detail::check_quadrature(out, problem.f, problem.target, problem.p, grid, problem.options.aliasing_tol);
  return out;
}

/// Convenience overload for the unit target.
inline OpaResult solve_general(const HardyFunction& f, int n, double p, const BoundaryGrid& grid,
                               const SolverOptions& options = {}) {
  OpaProblem problem{f, n, p};
  problem.grid = grid;
  problem.options = options;
  return solve_general(problem);
}

/// Relaxation that makes the fixed-point maps locally contractive: near the
/// solution the plain step has spectrum in [2 - p, 0], which leaves the unit
/// disk once p > 3. Scaling by 2/p maps it into [-(p-2)/p, (p-2)/p].
inline double stable_damping(double p) { return p > 2.0 ? 2.0 / p : 1.0; }

struct FixedPointTrace {
  std::vector<Coeffs> iterates;
  /// Per-step weighted integrals (degree-one scheme only).
  std::vector<std::array<cd, 4>> abcd;
};

struct FixedPointResult {
  OpaResult result;
  FixedPointTrace trace;
};

namespace detail {

inline std::vector<double> fixed_point_weights(const BoundarySamples& fs, const BoundaryGrid& grid,
                                               const Coeffs& q, double p) {
  std::vector<double> w(fs.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double r = std::abs(1.0 - poly::eval(q, grid.node(j)) * fs[j]);
    // |0|^{p-2} is 0 for p > 2 and taken as 0 for p < 2.
    w[j] = r > 0.0 ? std::pow(r, p - 2.0) : 0.0;
  }
  return w;
}

inline void finish_fixed_point(OpaResult& r, const HardyFunction& f, double p, const BoundaryGrid& grid) {
  const BoundarySamples fs = evaluate_on_grid(f, grid);
  const auto basis = shifted_basis(fs, static_cast<int>(r.coeffs.size()) - 1);
  const BoundarySamples one = BoundarySamples::constant(grid, 1.0);
  r.error = lp_norm(fit_residual(r.coeffs, basis, one), p);
  r.residuals = basis_residuals(r.coeffs, basis, one, p);
  if (!(p > 2.0)) {
    r.experimental = true;
    r.warnings.push_back("fixed-point convergence is only established for p > 2");
  }
}

}  // namespace detail

/// Iterates lambda <- Phi(lambda) with
/// Phi(z) = mean |1 - z f|^{p-2} conj(f) / mean |1 - z f|^{p-2} |f|^2
/// until successive iterates differ by at most tol.
inline FixedPointResult fixed_point_degree0(const HardyFunction& f, double p, cd lambda_init, double tol,
                                            int max_iters, const BoundaryGrid& grid, double damping = 1.0) {
  detail::require_exponent(p);
  if (!(tol > 0.0) || max_iters <= 0) throw InvalidArgument("tolerance and iteration cap must be positive");
  const BoundarySamples fs = evaluate_on_grid(f, grid);
  const auto fv = fs.values();
  FixedPointResult out;
  out.result.method = Method::fixed_point0;
  out.result.status = Status::nonconverged;
  cd lambda = lambda_init;
  out.trace.iterates.push_back({lambda});
  for (int it = 0; it < max_iters; ++it) {
    const auto w = detail::fixed_point_weights(fs, grid, {lambda}, p);
    const cd num = detail::pairwise_mean<cd>(fv.size(), [&](std::size_t j) { return w[j] * std::conj(fv[j]); });
    const double den = detail::pairwise_mean<double>(fv.size(), [&](std::size_t j) { return w[j] * std::norm(fv[j]); });
    if (!(den > 0.0)) {
      // All weight vanished: lambda f == 1 on the grid, an exact solution.
      out.result.status = Status::converged;
      break;
    }
    const cd next = lambda + damping * (num / den - lambda);
    const double change = std::abs(next - lambda);
    lambda = next;
    out.trace.iterates.push_back({lambda});
    out.result.iterations = it + 1;
    if (change <= tol) {
      out.result.status = Status::converged;
      break;
    }
  }
  out.result.coeffs = {lambda};
  detail::finish_fixed_point(out.result, f, p, grid);
  return out;
}

/// Degree-one scheme: with weights w = |1 - Q_k f|^{p-2},
/// A = mean w conj(f), B = mean w conj(z f), C = mean w |f|^2,
/// D = mean w conj(z) |f|^2, the next iterate solves
/// [C conj(D); D C] (a, b)^T = (A, B)^T.
inline FixedPointResult fixed_point_degree1(const HardyFunction& f, double p, std::pair<cd, cd> q_init, double tol,
                                            int max_iters, const BoundaryGrid& grid, double damping = 1.0) {
  detail::require_exponent(p);
  if (!(tol > 0.0) || max_iters <= 0) throw InvalidArgument("tolerance and iteration cap must be positive");
  const BoundarySamples fs = evaluate_on_grid(f, grid);
  const auto fv = fs.values();
  const auto nodes = grid.nodes();
  FixedPointResult out;
  out.result.method = Method::fixed_point1;
  out.result.status = Status::nonconverged;
  cd a = q_init.first;
  cd b = q_init.second;
  out.trace.iterates.push_back({a, b});
  for (int it = 0; it < max_iters; ++it) {
    const auto w = detail::fixed_point_weights(fs, grid, {a, b}, p);
    const std::size_t n = fv.size();
    const cd big_a = detail::pairwise_mean<cd>(n, [&](std::size_t j) { return w[j] * std::conj(fv[j]); });
    const cd big_b = detail::pairwise_mean<cd>(n, [&](std::size_t j) { return w[j] * std::conj(nodes[j] * fv[j]); });
    const double big_c = detail::pairwise_mean<double>(n, [&](std::size_t j) { return w[j] * std::norm(fv[j]); });
    const cd big_d =
        detail::pairwise_mean<cd>(n, [&](std::size_t j) { return w[j] * std::conj(nodes[j]) * std::norm(fv[j]); });
    out.trace.abcd.push_back({big_a, big_b, cd{big_c, 0.0}, big_d});
    const double det = big_c * big_c - std::norm(big_d);
    if (!(det > 1e-14 * std::max(big_c * big_c, std::numeric_limits<double>::min())) || !(big_c > 0.0)) {
      if (it > 0 && big_c == 0.0) {
        out.result.status = Status::converged;
        break;
      }
      throw SingularSystem("degree-one fixed-point system is degenerate (C^2 - |D|^2 = " + std::to_string(det) + ")");
    }
    const cd a_new = (big_a * big_c - big_b * std::conj(big_d)) / det;
    const cd b_new = (big_b * big_c - big_a * big_d) / det;
    const cd a_next = a + damping * (a_new - a);
    const cd b_next = b + damping * (b_new - b);
    const double change = std::max(std::abs(a_next - a), std::abs(b_next - b));
    a = a_next;
    b = b_next;
    out.trace.iterates.push_back({a, b});
    out.result.iterations = it + 1;
    if (change <= tol) {
      out.result.status = Status::converged;
      break;
    }
  }
  out.result.coeffs = {a, b};
  detail::finish_fixed_point(out.result, f, p, grid);
  return out;
}

/// ||q f - 1||_p on the grid.
inline double opa_error(const Coeffs& q, const HardyFunction& f, double p, const BoundaryGrid& grid) {
  const BoundarySamples fs = evaluate_on_grid(f, grid);
  return lp_norm(BoundarySamples::from(grid, [&](cd z) { return poly::eval(q, z); }) * fs -
                     BoundarySamples::constant(grid, 1.0),
                 p);
}

}  // namespace opa
