#pragma once

// Seeded invariant suites: Pythagorean inequalities, orthogonality of
// computed OPAs, the bound sandwich and rotation symmetry. Each case yields
// one JSON record.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "opa/bounds.hpp"
#include "opa/experiments.hpp"
#include "opa/report.hpp"
#include "opa/solvers.hpp"

namespace opa::checks {

using nlohmann::json;

/// Polynomial with coefficients uniform in the unit square and |c_0| >= min_c0.
inline Coeffs random_polynomial(std::mt19937_64& rng, int max_degree, double min_c0 = 0.2) {
  std::uniform_int_distribution<int> deg(1, std::max(1, max_degree));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Coeffs c(static_cast<std::size_t>(deg(rng)) + 1);
  for (cd& v : c) v = {u(rng), u(rng)};
  if (std::abs(c[0]) < min_c0) c[0] = c[0] == cd{} ? cd{min_c0, 0.0} : c[0] * (min_c0 / std::abs(c[0]));
  return c;
}

struct SuiteConfig {
  std::uint64_t seed = 1;
  BoundaryGrid grid = uniform_grid(kDefaultGridPoints);
  /// Exponents to exercise; empty selects each suite's defaults.
  std::vector<double> p_list;
  SolverOptions solver{};
};

using Sink = std::function<void(const json&)>;

namespace detail {

inline std::vector<double> exponents(const SuiteConfig& cfg, std::vector<double> defaults) {
  return cfg.p_list.empty() ? defaults : cfg.p_list;
}

inline json record(const std::string& suite, int id, double p, bool pass) {
  return json{{"suite", suite}, {"case", id}, {"p", p}, {"pass", pass}};
}

}  // namespace detail

/// Orthogonal pairs from OPA residuals and characters, plus the Fourier
/// coefficient inequality for random analytic polynomials.
inline bool pythagorean_suite(const SuiteConfig& cfg, const Sink& emit, int solve_cases = 8, int coeff_cases = 5) {
  std::mt19937_64 rng(cfg.seed);
  bool all = true;
  int id = 0;
  const double slack_tol = 1e-9;
  for (double p : detail::exponents(cfg, {1.5, 3.0, 4.0})) {
    for (int i = 0; i < solve_cases; ++i) {
      const Coeffs c = random_polynomial(rng, 4);
      const int n = static_cast<int>(rng() % 3);
      const HardyFunction f = HardyFunction::polynomial(c);
      const OpaResult r = solve_general(f, n, p, cfg.grid, cfg.solver);
      const BoundarySamples fs = evaluate_on_grid(f, cfg.grid);
      const BoundarySamples x = BoundarySamples::constant(cfg.grid, 1.0) -
                                BoundarySamples::from(cfg.grid, [&](cd z) { return poly::eval(r.coeffs, z); }) * fs;
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      Coeffs dir(static_cast<std::size_t>(n) + 1);
      for (cd& v : dir) v = {u(rng), u(rng)};
      const BoundarySamples y = BoundarySamples::from(cfg.grid, [&](cd z) { return poly::eval(dir, z); }) * fs;
      json rec = detail::record("pythagorean", id++, p, false);
      rec["kind"] = "opa_residual";
      try {
        const PythagoreanSlack s = pythagorean_check(x, y, p);
        rec["lower_slack"] = s.lower;
        rec["upper_slack"] = s.upper;
        rec["pass"] = s.lower >= -slack_tol && s.upper >= -slack_tol;
      } catch (const std::exception& e) {
        rec["error"] = e.what();
      }
      all = all && rec["pass"].get<bool>();
      emit(rec);
    }
    for (int k = 1; k <= 3; ++k) {
      const cd beta = {0.5 * k, -0.25 * k};
      const BoundarySamples x = BoundarySamples::constant(cfg.grid, 1.0);
      const BoundarySamples y = BoundarySamples::from(cfg.grid, [&](cd z) { return beta * std::pow(z, k); });
      const PythagoreanSlack s = pythagorean_check(x, y, p);
      json rec = detail::record("pythagorean", id++, p, s.lower >= -slack_tol && s.upper >= -slack_tol);
      rec["kind"] = "character";
      rec["lower_slack"] = s.lower;
      rec["upper_slack"] = s.upper;
      all = all && rec["pass"].get<bool>();
      emit(rec);
    }
    const PythagoreanParams lo = pythagorean_params(p, Direction::lower);
    for (int i = 0; i < coeff_cases; ++i) {
      const Coeffs c = random_polynomial(rng, 6, 0.0);
      const BoundarySamples s = BoundarySamples::from(cfg.grid, [&](cd z) { return poly::eval(c, z); });
      double rhs = 0.0;
      double weight = 1.0;
      for (const cd& v : c) {
        rhs += weight * std::pow(std::abs(v), lo.r);
        weight *= lo.K;
      }
      const double slack = std::pow(lp_norm(s, p), lo.r) - rhs;
      json rec = detail::record("pythagorean", id++, p, slack >= -slack_tol);
      rec["kind"] = "coefficients";
      rec["slack"] = slack;
      all = all && rec["pass"].get<bool>();
      emit(rec);
    }
  }
  return all;
}

/// Computed OPAs satisfy the orthogonality certificate and error <= 1.
inline bool orthogonality_suite(const SuiteConfig& cfg, const Sink& emit, int cases = 6) {
  std::mt19937_64 rng(cfg.seed);
  bool all = true;
  int id = 0;
  for (double p : detail::exponents(cfg, {1.5, 2.0, 3.0, 4.0})) {
    for (int i = 0; i < cases; ++i) {
      const HardyFunction f = HardyFunction::polynomial(random_polynomial(rng, 5));
      const int n = static_cast<int>(rng() % 4);
      const OpaResult r = solve_general(f, n, p, cfg.grid, cfg.solver);
      const auto res = orthogonality_residuals(r.coeffs, f, p, cfg.grid);
      double worst = 0.0;
      for (const cd& v : res) worst = std::max(worst, std::abs(v));
      const bool pass = r.status == Status::converged && worst <= 1e-9 && r.error <= 1.0 + 1e-10;
      json rec = detail::record("orthogonality", id++, p, pass);
      rec["n"] = n;
      rec["residual_max"] = worst;
      rec["error"] = r.error;
      all = all && pass;
      emit(rec);
    }
  }
  return all;
}

/// max(lower) <= computed error + 1e-7 <= min(upper) + 2e-7.
inline bool sandwich_suite(const SuiteConfig& cfg, const Sink& emit, int cases = 4) {
  std::mt19937_64 rng(cfg.seed);
  bool all = true;
  int id = 0;
  CertifyOptions opts;
  opts.solver = cfg.solver;
  for (double p : detail::exponents(cfg, {1.5, 3.0, 4.0})) {
    for (int i = 0; i < cases; ++i) {
      const HardyFunction f = HardyFunction::polynomial(random_polynomial(rng, 5));
      const int n = static_cast<int>(rng() % 3);
      const BoundReport b = certify(f, n, p, cfg.grid, opts);
      const double err = b.computed_error.value_or(0.0);
      const bool pass = b.max_lower() <= err + 1e-7 && err + 1e-7 <= b.min_upper() + 2e-7;
      json rec = detail::record("sandwich", id++, p, pass);
      rec["n"] = n;
      rec["max_lower"] = b.max_lower();
      rec["computed_error"] = err;
      rec["min_upper"] = b.min_upper();
      all = all && pass;
      emit(rec);
    }
  }
  return all;
}

/// q_{1,p}[f(gamma z)] against the rotated q_{1,p}[f] for eight rotations.
inline bool rotation_suite(const SuiteConfig& cfg, const Sink& emit, int functions = 2) {
  std::mt19937_64 rng(cfg.seed);
  bool all = true;
  int id = 0;
  for (double p : detail::exponents(cfg, {2.0, 3.0, 4.0})) {
    for (int i = 0; i < functions; ++i) {
      const HardyFunction f = HardyFunction::polynomial(random_polynomial(rng, 4));
      for (int k = 0; k < 8; ++k) {
        const cd gamma = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / 8.0);
        const double d = rotation_symmetry_check(f, p, gamma, cfg.grid, cfg.solver);
        json rec = detail::record("rotation", id++, p, d <= 1e-6);
        rec["gamma"] = report::complex_json(gamma);
        rec["discrepancy"] = d;
        all = all && d <= 1e-6;
        emit(rec);
      }
    }
  }
  return all;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"pythagorean", "orthogonality", "sandwich", "rotation"};
  return names;
}

/// Runs the named suite, or every suite for "all".
inline bool run_suite(const std::string& name, const SuiteConfig& cfg, const Sink& emit) {
  if (name == "pythagorean") return pythagorean_suite(cfg, emit);
  if (name == "orthogonality") return orthogonality_suite(cfg, emit);
  if (name == "sandwich") return sandwich_suite(cfg, emit);
  if (name == "rotation") return rotation_suite(cfg, emit);
  if (name == "all") {
    bool ok = true;
    for (const auto& s : suite_names()) ok = run_suite(s, cfg, emit) && ok;
    return ok;
  }
  throw InvalidArgument("unknown suite '" + name + "'");
}

}  // namespace opa::checks
