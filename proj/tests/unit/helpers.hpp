#pragma once

#include <cstdint>

#include "modelspace/linalg.hpp"
#include "modelspace/random.hpp"

namespace modelspace::testing {

inline ComplexMatrix random_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (auto& z : m.entries()) z = rng.complex_normal();
  return m;
}

inline std::vector<Complex> random_vector(SplitMix64& rng, std::size_t n) {
  std::vector<Complex> v(n);
  for (auto& z : v) z = rng.complex_normal();
  return v;
}

}  // namespace modelspace::testing
