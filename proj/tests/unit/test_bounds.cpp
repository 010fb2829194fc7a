#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "opa/bounds.hpp"
#include "opa/parse.hpp"
#include "support.hpp"

namespace opa {
namespace {

using test::grid;

HardyFunction poly(Coeffs c) { return HardyFunction::polynomial(std::move(c)); }

BoundarySamples on_grid(const Coeffs& c) {
  return BoundarySamples::from(grid(), [&](cd z) { return poly::eval(c, z); });
}

const BoundEntry* find(const std::vector<BoundEntry>& list, const std::string& tag) {
  for (const auto& e : list) {
    if (e.provenance == tag) return &e;
  }
  return nullptr;
}

TEST(Pythagorean, Parameters) {
  const auto lo15 = pythagorean_params(1.5, Direction::lower);
  EXPECT_EQ(lo15.r, 2.0);
  EXPECT_DOUBLE_EQ(lo15.K, 0.5);
  const auto up15 = pythagorean_params(1.5, Direction::upper);
  EXPECT_EQ(up15.r, 1.5);
  EXPECT_DOUBLE_EQ(up15.K, 1.0 / (std::sqrt(2.0) - 1.0));
  const auto lo4 = pythagorean_params(4.0, Direction::lower);
  EXPECT_EQ(lo4.r, 4.0);
  EXPECT_DOUBLE_EQ(lo4.K, 1.0 / 7.0);
  const auto up4 = pythagorean_params(4.0, Direction::upper);
  EXPECT_EQ(up4.r, 2.0);
  EXPECT_DOUBLE_EQ(up4.K, 3.0);
  const auto two = pythagorean_params(2.0, Direction::upper);
  EXPECT_EQ(two.r, 2.0);
  EXPECT_EQ(two.K, 1.0);
  EXPECT_THROW(pythagorean_params(1.0, Direction::lower), InvalidArgument);
}

TEST(Pythagorean, CharactersAtTwoAreExact) {
  const auto x = BoundarySamples::constant(grid(), 1.0);
  const auto y = on_grid({0.0, cd{0.3, 0.4}});
  const PythagoreanSlack s = pythagorean_check(x, y, 2.0);
  EXPECT_NEAR(s.lower, 0.0, 1e-14);
  EXPECT_NEAR(s.upper, 0.0, 1e-14);
}

TEST(Pythagorean, CharacterPairsHaveNonnegativeSlack) {
  for (double p : {1.2, 1.5, 3.0, 4.0, 7.0}) {
    for (double beta : {0.1, 0.5, 1.0, 3.0}) {
      const auto x = BoundarySamples::constant(grid(), 1.0);
      const auto y = on_grid({0.0, 0.0, beta});
      const PythagoreanSlack s = pythagorean_check(x, y, p);
      EXPECT_GE(s.lower, -1e-12) << p << ' ' << beta;
      EXPECT_GE(s.upper, -1e-12) << p << ' ' << beta;
    }
  }
}

TEST(Pythagorean, RequiresOrthogonality) {
  const auto x = BoundarySamples::constant(grid(), 1.0);
  EXPECT_THROW(pythagorean_check(x, x, 3.0), InvalidArgument);
}

TEST(Pythagorean, CoefficientInequality) {
  std::mt19937_64 rng(17);
  for (double p : {1.5, 3.0, 4.0}) {
    const auto lo = pythagorean_params(p, Direction::lower);
    for (int trial = 0; trial < 10; ++trial) {
      const auto c = test::random_coeffs(rng, 6);
      double rhs = 0.0;
      double weight = 1.0;
      for (const cd& v : c) {
        rhs += weight * std::pow(std::abs(v), lo.r);
        weight *= lo.K;
      }
      EXPECT_GE(std::pow(lp_norm(on_grid(c), p), lo.r) - rhs, -1e-12);
    }
  }
}

TEST(Witness, FeasibilityAndValue) {
  // psi = 1 annihilates z f when f(0) = 0, and the bound is 1.
  const auto f = on_grid({0.0, 1.0});
  const DualWitness w = make_witness(BoundarySamples::constant(grid(), 1.0), f, 0);
  EXPECT_TRUE(w.valid());
  EXPECT_NEAR(dual_feasible_value(w, 2.0), 1.0, 1e-15);
  const DualWitness bad = make_witness(BoundarySamples::constant(grid(), 1.0), on_grid({1.0}), 0);
  EXPECT_FALSE(bad.valid());
  EXPECT_THROW(dual_feasible_value(bad, 2.0), InvalidArgument);
}

TEST(Witness, ToeplitzForOneMinusZ) {
  // <1 - z, 1 + psi_1 z> = 1 - conj(psi_1) = 0 gives psi = 1 + z.
  const TaylorSeries f{{1.0, -1.0}};
  const DualWitness w = psi_toeplitz_system(f, 1, grid());
  EXPECT_TRUE(w.valid());
  const auto c = fourier_coefficients(w.psi, 0, 2).values;
  EXPECT_NEAR(std::abs(c[0] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[1] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[2]), 0.0, 1e-14);
  // At p = 2 the witness is optimal: both sides equal 1/sqrt(2).
  EXPECT_NEAR(dual_feasible_value(w, 2.0), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(gram_solve_p2(poly({1.0, -1.0}), 0, grid()).error, 1.0 / std::sqrt(2.0), 1e-14);
}

TEST(Witness, ToeplitzComplexCoefficients) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = test::random_coeffs(rng, 5);
    c[0] = 1.0;
    const int n = 1 + trial % 4;
    const DualWitness w = psi_toeplitz_system(TaylorSeries{c}, n, on_grid(c));
    EXPECT_TRUE(w.valid()) << trial;
    EXPECT_EQ(w.degree, n - 1);
    for (double p : {1.5, 3.0}) {
      const double bound = dual_feasible_value(w, conjugate_exponent(p));
      EXPECT_LE(bound, solve_general(poly(c), n - 1, p, grid()).error + 1e-9);
    }
  }
  EXPECT_THROW(psi_toeplitz_system(TaylorSeries{{2.0, 1.0}}, 1, grid()), InvalidArgument);
  EXPECT_THROW(psi_toeplitz_system(TaylorSeries{{1.0, 1.0}}, 0, grid()), InvalidArgument);
}

TEST(Reciprocal, OneMinusZ) {
  const TaylorSeries f{{1.0, -1.0}};
  EXPECT_NEAR(lower_bound_reciprocal(f, 1, 2.0, grid()), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(lower_bound_reciprocal(f, 2, 2.0, grid()), 1.0 / std::sqrt(3.0), 1e-14);
  // g_1 = 0 for 1 + z^2.
  EXPECT_EQ(lower_bound_reciprocal(TaylorSeries{{1.0, 0.0, 1.0}}, 1, 2.0, grid()), 0.0);
}

TEST(Reciprocal, SnailWitnessIsFeasible) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = test::random_coeffs(rng, 4);
    c[0] = 1.0;
    const int n = 1 + trial % 3;
    const auto psi = snail_witness(TaylorSeries{c}, n, grid());
    const DualWitness w = make_witness(psi, on_grid(c), n - 1);
    // The snail is normalized so its constant term is 1.
    EXPECT_TRUE(w.valid()) << trial;
  }
}

TEST(Completion, RemovesAntiAnalyticPartAtTwo) {
  const auto F = BoundarySamples::from(grid(), [](cd z) { return 1.0 + 0.5 * std::conj(z) + 0.25 * z; });
  const Completion c = anti_analytic_completion(F, 2.0, 4);
  EXPECT_TRUE(c.converged);
  EXPECT_NEAR(c.min_norm, std::sqrt(1.0 + 0.0625), 1e-10);
  EXPECT_NEAR(std::abs(c.g_coeffs[0] + 0.5), 0.0, 1e-10);
  EXPECT_THROW(anti_analytic_completion(F, 2.0, 0), InvalidArgument);
}

TEST(Improved, DominatesReciprocalAndStaysBelowError) {
  std::mt19937_64 rng(43);
  for (double p : {1.5, 3.0, 4.0}) {
    for (int trial = 0; trial < 3; ++trial) {
      auto c = test::random_coeffs(rng, 4);
      c[0] = 1.0;
      const int n = 1 + trial % 2;
      const TaylorSeries f{c};
      const double q = conjugate_exponent(p);
      const ImprovedBound b = improved_lower_bound(f, n, p, default_truncation(n), grid());
      EXPECT_GE(b.value, lower_bound_reciprocal(f, n, q, grid()) - 1e-12);
      EXPECT_LE(b.value, solve_general(poly(c), n - 1, p, grid()).error + 1e-7);
      EXPECT_LE(b.truncation, 64);
    }
  }
}

TEST(InnerBounds, ClosedForms) {
  const FiniteBlaschke J({0.5}, 1.0);
  EXPECT_NEAR(lower_bound_h2_inner(J), std::sqrt(0.75), 1e-15);
  // At q = 2, ||1 - conj(J(0)) J||_2^2 = 1 - |J(0)|^2.
  EXPECT_NEAR(lower_bound_inner(J, 2.0, grid()), std::sqrt(0.75), 1e-13);
  EXPECT_EQ(lower_bound_inner(FiniteBlaschke({}, 1.0), 2.0, grid()), 0.0);
  EXPECT_NEAR(lower_bound_blaschke_zeros({0.9, cd{0.0, 0.9}}), 0.19, 1e-15);
  EXPECT_NEAR(lower_bound_blaschke_zeros({0.5}), 0.5, 0.0);
  EXPECT_THROW(lower_bound_blaschke_zeros({1.0}), InvalidArgument);
}

TEST(UpperBound, DegreeZeroClosedForm) {
  const auto f = poly({1.0, 0.5});
  EXPECT_NEAR(upper_bound_p_lt_2(f, 0, grid()), std::sqrt(0.2), 1e-12);
  const auto g = poly({cd{0.2, 0.1}, 1.0, cd{0.0, -0.3}});
  const double norm2 = 0.05 + 1.0 + 0.09;
  EXPECT_NEAR(upper_bound_p_lt_2(g, 0, grid()), std::sqrt(1.0 - 0.05 / norm2), 1e-12);
  EXPECT_THROW(upper_bound_p_lt_2(poly({0.0, 1.0}), 0, grid()), InvalidArgument);
}

TEST(Certify, OuterTimesZeroInDisk) {
  // f = (z - 0.5)(1 + 0.3 z).
  const auto f = poly(poly::mul({-0.5, 1.0}, {1.0, 0.3}));
  for (double p : {1.5, 3.0, 4.0}) {
    for (int n = 0; n <= 2; ++n) {
      const BoundReport b = certify(f, n, p, grid());
      ASSERT_TRUE(b.computed_error.has_value());
      const double err = *b.computed_error;
      const BoundEntry* bl = find(b.lower, "blaschke_zeros");
      ASSERT_NE(bl, nullptr);
      EXPECT_NEAR(bl->value, 0.5, 1e-10);
      EXPECT_LE(bl->value, err);
      EXPECT_NE(find(b.lower, "inner_part"), nullptr);
      const BoundEntry* h2 = find(b.lower, "h2_inner");
      if (p > 2.0) {
        ASSERT_NE(h2, nullptr);
        EXPECT_NEAR(h2->value, std::sqrt(0.75), 1e-10);
        EXPECT_LE(h2->value, err);
      } else {
        EXPECT_EQ(h2, nullptr);
        EXPECT_NE(find(b.upper, "h2_projection"), nullptr);
      }
      EXPECT_TRUE(b.consistent(1e-7)) << p << ' ' << n;
    }
  }
}

TEST(Certify, RandomSandwich) {
  std::mt19937_64 rng(47);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 3; ++trial) {
      auto c = test::random_coeffs(rng, 4);
      if (std::abs(c[0]) < 0.2) c[0] = 0.2;
      const BoundReport b = certify(poly(c), trial, p, grid());
      EXPECT_LE(b.max_lower(), *b.computed_error + 1e-7);
      EXPECT_LE(*b.computed_error + 1e-7, b.min_upper() + 2e-7);
      EXPECT_NE(find(b.upper, "zero_polynomial"), nullptr);
    }
  }
}

TEST(Certify, BoundaryZeroLeavesInnerBoundsOut) {
  const BoundReport b = certify(poly({1.0, -1.0}), 0, 3.0, grid());
  EXPECT_EQ(find(b.lower, "inner_part"), nullptr);
  bool warned = false;
  for (const auto& w : b.warnings) warned = warned || w.find("inner part unavailable") != std::string::npos;
  EXPECT_TRUE(warned);
  EXPECT_THROW(certify(poly({0.0, 1.0}), 0, 3.0, grid()), InvalidArgument);
}

}  // namespace
}  // namespace opa
