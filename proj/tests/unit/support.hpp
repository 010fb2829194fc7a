#pragma once

#include <complex>
#include <random>
#include <vector>

#include "opa/circle.hpp"
#include "opa/polynomial.hpp"

namespace opa::test {

inline const BoundaryGrid& grid() {
  static const BoundaryGrid g = uniform_grid(4096);
  return g;
}

inline std::vector<cd> random_coeffs(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cd> c(count);
  for (cd& v : c) v = {u(rng), u(rng)};
  return c;
}

}  // namespace opa::test
