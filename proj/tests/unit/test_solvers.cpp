#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "opa/parse.hpp"
#include "opa/solvers.hpp"
#include "support.hpp"

namespace opa {
namespace {

using test::grid;

HardyFunction poly(Coeffs c) { return HardyFunction::polynomial(std::move(c)); }

double max_abs(const std::vector<cd>& v) {
  double m = 0.0;
  for (const cd& x : v) m = std::max(m, std::abs(x));
  return m;
}

TEST(Gram, DegreeZeroClosedForm) {
  // a = conj(f(0)) / ||f||_2^2 and error^2 = 1 - |f(0)|^2 / ||f||_2^2.
  const OpaResult r = gram_solve_p2(poly({1.0, 0.5}), 0, grid());
  EXPECT_NEAR(std::abs(r.coeffs[0] - 0.8), 0.0, 1e-14);
  EXPECT_NEAR(r.error * r.error, 0.2, 1e-14);
  const cd c0{0.3, -0.4};
  const OpaResult rc = gram_solve_p2(poly({c0, {0.0, 1.0}}), 0, grid());
  EXPECT_NEAR(std::abs(rc.coeffs[0] - std::conj(c0) / 1.25), 0.0, 1e-14);
  EXPECT_EQ(rc.method, Method::gram2);
}

TEST(Gram, ComplexNormalEquations) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = test::random_coeffs(rng, 4);
    c[0] += 0.5;
    const OpaResult r = gram_solve_p2(poly(c), 3, grid());
    EXPECT_LE(r.residual_max(), 1e-12);
    // Perturbing any coefficient must not decrease the L2 error.
    for (std::size_t k = 0; k < r.coeffs.size(); ++k) {
      for (cd d : {cd{1e-3, 0.0}, cd{0.0, 1e-3}}) {
        Coeffs q = r.coeffs;
        q[k] += d;
        EXPECT_GE(opa_error(q, poly(c), 2.0, grid()), r.error);
      }
    }
  }
}

TEST(Gram, SingularBasisThrows) {
  // More basis functions than grid nodes.
  EXPECT_THROW(gram_solve_p2(poly({1.0, 0.5}), 20, uniform_grid(16)), SingularSystem);
}

TEST(Objective, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  for (double p : {1.5, 3.0, 4.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto fc = test::random_coeffs(rng, 4);
      const auto basis = shifted_basis(evaluate_on_grid(poly(fc), grid()), 2);
      const BoundarySamples one = BoundarySamples::constant(grid(), 1.0);
      const Coeffs a = test::random_coeffs(rng, 3);
      const ObjectiveValue v = objective_and_gradient(a, basis, one, p);
      const double h = 1e-6;
      for (std::size_t k = 0; k < a.size(); ++k) {
        auto shifted = [&](cd d) {
          Coeffs b = a;
          b[k] += d;
          return objective_and_gradient(b, basis, one, p).value;
        };
        const double dx = (shifted({h, 0.0}) - shifted({-h, 0.0})) / (2.0 * h);
        const double dy = (shifted({0.0, h}) - shifted({0.0, -h})) / (2.0 * h);
        const cd fd{dx, -dy};
        EXPECT_NEAR(std::abs(v.gradient[k] - fd), 0.0, 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST(Objective, ValueIsPowerMean) {
  const auto basis = shifted_basis(evaluate_on_grid(poly({1.0, 2.0}), grid()), 0);
  const BoundarySamples one = BoundarySamples::constant(grid(), 1.0);
  // a = 0 gives R = -1 and Phi = 1 for every p.
  for (double p : {1.5, 3.0}) EXPECT_NEAR(objective_and_gradient({0.0}, basis, one, p).value, 1.0, 1e-15);
  EXPECT_THROW(objective_and_gradient({0.0, 0.0}, basis, one, 3.0), InvalidArgument);
}

TEST(Orthogonality, ZeroApproximant) {
  // R = -1, so component 0 is -mean f = -f(0).
  const auto r = orthogonality_residuals({0.0}, poly({1.0, 2.0}), 3.0, grid());
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(std::abs(r[0] + 1.0), 0.0, 1e-14);
}

TEST(Solve, DegreeOneAtFourMatchesPublishedDigits) {
  const OpaResult r = solve_general(poly({1.0, 0.5}), 1, 4.0, grid());
  ASSERT_EQ(r.status, Status::converged);
  EXPECT_NEAR(r.coeffs[0].real(), 0.9771018, 1e-6);
  EXPECT_NEAR(r.coeffs[1].real(), -0.4339644, 1e-6);
  EXPECT_NEAR(r.coeffs[0].imag(), 0.0, 1e-12);
  EXPECT_LE(r.residual_max(), 1e-10);
}

TEST(Solve, HalfForOneMinusZ) {
  for (double p : {1.5, 2.0, 3.0, 4.0, 6.0}) {
    const OpaResult r = solve_general(poly({1.0, -1.0}), 0, p, grid());
    EXPECT_NE(r.status, Status::nonconverged) << p;
    EXPECT_NEAR(std::abs(r.coeffs[0] - 0.5), 0.0, 1e-7) << p;
  }
}

TEST(Solve, MatchesGramAtTwo) {
  std::mt19937_64 rng(7);
  for (int n = 0; n <= 6; ++n) {
    auto c = test::random_coeffs(rng, 5);
    c[0] += 0.6;
    const OpaResult a = solve_general(poly(c), n, 2.0, grid());
    const OpaResult b = gram_solve_p2(poly(c), n, grid());
    for (std::size_t k = 0; k < a.coeffs.size(); ++k) EXPECT_NEAR(std::abs(a.coeffs[k] - b.coeffs[k]), 0.0, 1e-7);
  }
}

TEST(Solve, ExactRepresentationHasZeroError) {
  // 1/(z - w) times z - w is exactly 1.
  for (double p : {2.0, 3.0, 4.0}) {
    const OpaResult r = solve_general(HardyFunction::rational({1.0}, {-2.0, 1.0}), 1, p, grid());
    EXPECT_NEAR(std::abs(r.coeffs[0] + 2.0), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(r.coeffs[1] - 1.0), 0.0, 1e-8);
    EXPECT_LE(r.error, 1e-8);
  }
}

TEST(Solve, GeneralTarget) {
  OpaProblem problem{poly({1.0, 1.0}), 1, 3.0};
  problem.target = poly({2.0, 1.0, -1.0});
  problem.unit_target = false;
  problem.grid = grid();
  const OpaResult r = solve_general(problem);
  EXPECT_NEAR(std::abs(r.coeffs[0] - 2.0), 0.0, 1e-7);
  EXPECT_NEAR(std::abs(r.coeffs[1] + 1.0), 0.0, 1e-7);
}

TEST(Solve, VanishingAtOriginIsDegenerate) {
  const OpaResult r = solve_general(poly({0.0, 1.0, 0.3}), 2, 3.0, grid());
  EXPECT_EQ(r.status, Status::degenerate);
  for (const cd& c : r.coeffs) EXPECT_EQ(c, cd(0.0, 0.0));
  EXPECT_NEAR(r.error, 1.0, 1e-15);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Solve, RandomProblemsSatisfyOrthogonality) {
  std::mt19937_64 rng(11);
  for (double p : {1.5, 3.0, 4.0}) {
    for (int trial = 0; trial < 6; ++trial) {
      auto c = test::random_coeffs(rng, 5);
      if (std::abs(c[0]) < 0.2) c[0] = 0.2;
      const int n = trial % 4;
      const OpaResult r = solve_general(poly(c), n, p, grid());
      ASSERT_EQ(r.status, Status::converged) << p << ' ' << trial;
      EXPECT_LE(max_abs(orthogonality_residuals(r.coeffs, poly(c), p, grid())), 1e-9);
      EXPECT_LE(r.error, 1.0 + 1e-12);
      // Optimality against coordinate perturbations.
      for (std::size_t k = 0; k < r.coeffs.size(); ++k) {
        Coeffs q = r.coeffs;
        q[k] += cd{1e-4, 1e-4};
        EXPECT_GE(opa_error(q, poly(c), p, grid()), r.error - 1e-12);
      }
    }
  }
}

TEST(Solve, ExplicitInitialIsHonoured) {
  OpaProblem problem{poly({1.0, 0.5}), 1, 4.0};
  problem.grid = grid();
  problem.initial = Coeffs{0.9, -0.4};
  const OpaResult r = solve_general(problem);
  EXPECT_EQ(r.status, Status::converged);
  EXPECT_NEAR(r.coeffs[0].real(), 0.9771018, 1e-6);
  problem.initial = Coeffs{1.0};
  EXPECT_THROW(solve_general(problem), InvalidArgument);
}

TEST(Solve, RejectsBadArguments) {
  EXPECT_THROW(solve_general(poly({1.0}), 0, 1.0, grid()), InvalidArgument);
  EXPECT_THROW(solve_general(poly({1.0}), 0, std::nan(""), grid()), InvalidArgument);
  EXPECT_THROW(solve_general(poly({1.0}), -1, 2.0, grid()), InvalidArgument);
  SolverOptions bad;
  bad.tol_residual = 0.0;
  EXPECT_THROW(solve_general(poly({1.0}), 0, 3.0, grid(), bad), InvalidArgument);
  bad = {};
  bad.damping = 1.5;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Solve, CoarseGridWarnsAboutQuadrature) {
  const OpaResult r = solve_general(parse_function("1 + 1/(1 - 0.95*z)"), 1, 3.0, uniform_grid(16));
  bool warned = false;
  for (const auto& w : r.warnings) warned = warned || w.rfind("quadrature", 0) == 0;
  EXPECT_TRUE(warned);
}

TEST(FixedPoint, DegreeZeroAgreesWithDirectSolver) {
  const auto f = poly({1, 2, 0, 0, 0, 0, 0, 0, 1});
  for (double p : {3.0, 4.0, 6.0}) {
    const FixedPointResult fp = fixed_point_degree0(f, p, 0.0, 1e-13, 2000, grid(), stable_damping(p));
    ASSERT_EQ(fp.result.status, Status::converged) << p;
    const OpaResult direct = solve_general(f, 0, p, grid());
    EXPECT_NEAR(std::abs(fp.result.coeffs[0] - direct.coeffs[0]), 0.0, 1e-9);
    EXPECT_FALSE(fp.result.experimental);
    EXPECT_EQ(fp.trace.iterates.size(), static_cast<std::size_t>(fp.result.iterations) + 1);
  }
}

TEST(FixedPoint, PlainIterationConvergesAtThree) {
  const auto f = poly({1.0, 0.5});
  const FixedPointResult fp = fixed_point_degree0(f, 3.0, 0.0, 1e-12, 2000, grid());
  EXPECT_EQ(fp.result.status, Status::converged);
  const FixedPointResult fp1 = fixed_point_degree1(f, 3.0, {0.0, 0.0}, 1e-12, 2000, grid());
  EXPECT_EQ(fp1.result.status, Status::converged);
  const OpaResult direct = solve_general(f, 1, 3.0, grid());
  EXPECT_NEAR(std::abs(fp1.result.coeffs[1] - direct.coeffs[1]), 0.0, 1e-8);
}

TEST(FixedPoint, PlainIterationCyclesAtFour) {
  // The undamped map has a Jacobian eigenvalue below -1 here.
  const auto f = poly({1, 2, 0, 0, 0, 0, 0, 0, 1});
  const FixedPointResult fp = fixed_point_degree0(f, 4.0, 0.0, 1e-12, 400, grid());
  EXPECT_EQ(fp.result.status, Status::nonconverged);
  const auto& it = fp.trace.iterates;
  ASSERT_GE(it.size(), 4u);
  const cd last = it.back()[0];
  const cd two_back = it[it.size() - 3][0];
  EXPECT_LT(std::abs(last - two_back), 1e-6);
  EXPECT_GT(std::abs(last - it[it.size() - 2][0]), 1e-3);
}

TEST(FixedPoint, DegreeOneAgreesWithDirectSolver) {
  std::mt19937_64 rng(13);
  for (double p : {3.0, 4.0}) {
    for (int trial = 0; trial < 4; ++trial) {
      auto c = test::random_coeffs(rng, 4);
      if (std::abs(c[0]) < 0.2) c[0] = 0.2;
      const FixedPointResult fp = fixed_point_degree1(poly(c), p, {0.0, 0.0}, 1e-13, 5000, grid(), stable_damping(p));
      ASSERT_EQ(fp.result.status, Status::converged);
      const OpaResult direct = solve_general(poly(c), 1, p, grid());
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_NEAR(std::abs(fp.result.coeffs[k] - direct.coeffs[k]), 0.0, 1e-8);
      }
      EXPECT_EQ(fp.trace.abcd.size(), static_cast<std::size_t>(fp.result.iterations));
      const auto& abcd = fp.trace.abcd.back();
      EXPECT_EQ(abcd[2].imag(), 0.0);
      EXPECT_GT(abcd[2].real() * abcd[2].real(), std::norm(abcd[3]));
    }
  }
}

TEST(FixedPoint, SmallExponentIsExperimental) {
  const FixedPointResult fp = fixed_point_degree0(poly({1.0, 0.5}), 1.8, 0.0, 1e-12, 500, grid());
  EXPECT_TRUE(fp.result.experimental);
  EXPECT_FALSE(fp.result.warnings.empty());
  EXPECT_THROW(fixed_point_degree0(poly({1.0}), 3.0, 0.0, 0.0, 10, grid()), InvalidArgument);
}

TEST(Damping, ContractionWindow) {
  EXPECT_EQ(stable_damping(1.5), 1.0);
  EXPECT_EQ(stable_damping(2.0), 1.0);
  EXPECT_DOUBLE_EQ(stable_damping(4.0), 0.5);
  EXPECT_DOUBLE_EQ(stable_damping(8.0), 0.25);
}

}  // namespace
}  // namespace opa
