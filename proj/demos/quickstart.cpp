// Linear OPA of f(z) = 1 + z/2 in H^4, its dual bounds, and the
// fixed-point iteration for the same problem.

#include <cstdio>

#include "opa/bounds.hpp"
#include "opa/parse.hpp"
#include "opa/solvers.hpp"

int main() {
  using namespace opa;
  const BoundaryGrid grid = uniform_grid(4096);
  const HardyFunction f = parse_function("1 + 0.5*z");

  const OpaResult q = solve_general(f, 1, 4.0, grid);
  std::printf("q(z) = %.7f %+.7f z   error %.7f   (%s, %d iterations)\n", q.coeffs[0].real(), q.coeffs[1].real(),
              q.error, to_string(q.status), q.iterations);

  const BoundReport b = certify(f, 1, 4.0, grid);
  for (const auto& e : b.lower) std::printf("  lower %-18s %.7f\n", e.provenance.c_str(), e.value);
  for (const auto& e : b.upper) std::printf("  upper %-18s %.7f\n", e.provenance.c_str(), e.value);

  const FixedPointResult fp = fixed_point_degree1(f, 4.0, {0.0, 0.0}, 1e-12, 500, grid, stable_damping(4.0));
  std::printf("fixed point: %.7f %+.7f z after %d steps\n", fp.result.coeffs[0].real(), fp.result.coeffs[1].real(),
              fp.result.iterations);
}
