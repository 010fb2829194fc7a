// Roots of the linear OPA of 1 + 2z + z^8 as p varies, and the error as the
// degree grows at p = 4.

#include <cstdio>

#include "opa/experiments.hpp"
#include "opa/parse.hpp"

int main() {
  using namespace opa;
  const HardyFunction f = parse_function("1 + 2*z + z^8");

  const SweepResult by_p = sweep_p(f, 1, {1.25, 1.5, 2.0, 3.0, 4.0, 6.0});
  for (const auto& row : by_p.rows) {
    if (row.roots.empty()) continue;
    std::printf("p = %-5g root %+.6f %+.6fi  |root| %.6f\n", row.key, row.roots[0].real(), row.roots[0].imag(),
                std::abs(row.roots[0]));
  }

  const SweepResult by_n = sweep_degree(f, 4.0, 8);
  for (const auto& row : by_n.rows) std::printf("n = %g  error %.7f\n", row.key, row.error);
}
