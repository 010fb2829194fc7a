#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "opa/experiments.hpp"
#include "opa/parse.hpp"
#include "support.hpp"

namespace opa {
namespace {

using test::grid;

SweepOptions options() {
  SweepOptions o;
  o.grid = grid();
  return o;
}

TEST(CoeffDistance, PadsShorterVector) {
  EXPECT_EQ(coeff_distance({1.0}, {1.0, 0.0}), 0.0);
  EXPECT_EQ(coeff_distance({1.0}, {1.0, cd{0.0, -2.0}}), 2.0);
  EXPECT_EQ(coeff_distance({}, {}), 0.0);
}

TEST(RootsOf, Examples) {
  const RootsResult r = roots_of({-2.0, 1.0, 1e-17});
  EXPECT_FALSE(r.degenerate);
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_NEAR(std::abs(r.roots[0] - 2.0), 0.0, 1e-14);
  EXPECT_TRUE(roots_of({0.0, 0.0}).degenerate);
  EXPECT_TRUE(roots_of({0.7}).roots.empty());
}

TEST(OpaRoots, ReciprocalOfLinearFactor) {
  for (cd w : {cd{1.5, 0.0}, cd{2.0, 0.0}, cd{-3.0, 0.0}, cd{0.0, 2.0}}) {
    const auto f = HardyFunction::rational({1.0}, {-w, 1.0});
    for (int n : {1, 2}) {
      const RootsResult r = opa_roots(f, n, 3.0, grid());
      ASSERT_EQ(r.roots.size(), 1u) << w << ' ' << n;
      EXPECT_NEAR(std::abs(r.roots[0] - w), 0.0, 1e-8);
    }
  }
}

TEST(OpaRoots, LinearRootsLieOutsideDisk) {
  std::mt19937_64 rng(53);
  for (double p : {1.5, 3.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      auto c = test::random_coeffs(rng, 4);
      if (std::abs(c[0]) < 0.2) c[0] = 0.2;
      const RootsResult r = opa_roots(HardyFunction::polynomial(c), 1, p, grid());
      for (const cd& w : r.roots) EXPECT_GT(std::abs(w), 1.0 - 1e-9);
    }
  }
}

TEST(SweepP, SortedChainedRows) {
  const auto f = parse_function("1 + 0.5*z");
  const SweepResult s = sweep_p(f, 1, {4.0, 2.0, 3.0}, options());
  EXPECT_EQ(s.key_name, "p");
  ASSERT_EQ(s.rows.size(), 3u);
  EXPECT_EQ(s.rows[0].key, 2.0);
  EXPECT_EQ(s.rows[2].key, 4.0);
  for (const auto& row : s.rows) EXPECT_EQ(row.status, Status::converged);
  EXPECT_NEAR(s.rows[2].coeffs[0].real(), 0.9771018, 1e-6);
  // 2x2 normal equations [1.25 0.5; 0.5 1.25] a = (1, 0).
  EXPECT_NEAR(std::abs(s.rows[0].coeffs[0] - 20.0 / 21.0), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(s.rows[0].coeffs[1] + 8.0 / 21.0), 0.0, 1e-9);
  EXPECT_TRUE(s.warnings.empty());
  EXPECT_THROW(sweep_p(f, 1, {}, options()), InvalidArgument);
  EXPECT_THROW(sweep_p(f, 1, {0.5}, options()), InvalidArgument);
}

TEST(SweepP, LipschitzWarningOnTightBudget) {
  SweepOptions o = options();
  o.lipschitz_budget = 1e-6;
  const SweepResult s = sweep_p(parse_function("1 + 2*z + z^8"), 0, {4.0, 4.01}, o);
  EXPECT_FALSE(s.warnings.empty());
}

TEST(SweepDegree, ErrorsDoNotIncrease) {
  const SweepResult s = sweep_degree(parse_function("1 + 2*z + z^8"), 3.0, 6, options());
  EXPECT_EQ(s.key_name, "n");
  ASSERT_EQ(s.rows.size(), 7u);
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    EXPECT_LE(s.rows[i].error, s.rows[i - 1].error + 1e-10);
    EXPECT_EQ(s.rows[i].coeffs.size(), i + 1);
  }
  EXPECT_TRUE(s.warnings.empty());
  EXPECT_THROW(sweep_degree(parse_function("1"), 3.0, -1, options()), InvalidArgument);
}

TEST(SweepFunctions, DistanceToLast) {
  std::vector<HardyFunction> fs;
  for (double t : {0.5, 0.9, 0.99, 1.0}) fs.push_back(HardyFunction::polynomial({1.0, -t}));
  const SweepResult s = sweep_function_sequence(fs, 0, 3.0, options());
  EXPECT_EQ(s.key_name, "index");
  ASSERT_EQ(s.rows.size(), 4u);
  EXPECT_EQ(s.rows.back().distance_to_last, 0.0);
  EXPECT_GT(*s.rows.front().distance_to_last, *s.rows[2].distance_to_last);
  EXPECT_NEAR(std::abs(s.rows.back().coeffs[0] - 0.5), 0.0, 1e-7);
}

TEST(SweepRows, ZeroAtOriginIsDegenerateNotFatal) {
  const SweepResult s = sweep_degree(parse_function("z + 0.5*z^2"), 3.0, 2, options());
  for (const auto& row : s.rows) EXPECT_EQ(row.status, Status::degenerate);
}

TEST(Rotation, SymmetryHolds) {
  std::mt19937_64 rng(59);
  for (double p : {2.0, 3.0, 4.0}) {
    auto c = test::random_coeffs(rng, 4);
    if (std::abs(c[0]) < 0.2) c[0] = 0.2;
    for (int k = 0; k < 4; ++k) {
      const cd gamma = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.25) / 4.0);
      EXPECT_LE(rotation_symmetry_check(HardyFunction::polynomial(c), p, gamma, grid()), 1e-6);
    }
  }
  EXPECT_THROW(rotation_symmetry_check(HardyFunction::constant(1.0), 3.0, 2.0, grid()), InvalidArgument);
}

TEST(Collapse, LinearFactorIsItsOwnOpa) {
  std::mt19937_64 rng(61);
  for (double p : {2.0, 3.0, 4.0}) {
    auto c = test::random_coeffs(rng, 4);
    if (std::abs(c[0]) < 0.3) c[0] = 0.3;
    const CollapseReport r = degree_collapse_check(HardyFunction::polynomial(c), 2, p, grid());
    ASSERT_TRUE(r.applicable) << r.note;
    EXPECT_LE(r.discrepancy, 1e-6);
    EXPECT_EQ(r.cofactor.size(), 2u);
  }
  const CollapseReport none = degree_collapse_check(HardyFunction::polynomial({1.0, 0.5}), 0, 3.0, grid());
  EXPECT_FALSE(none.applicable);
}

}  // namespace
}  // namespace opa
