#pragma once

#include <cmath>
#include <random>

#include "paralab/field.hpp"
#include "paralab/rng.hpp"
#include "paralab/synthetic.hpp"

namespace paralab::test {

// Random Hermitian field with O(1) coefficients on every mode, Nyquist included.
inline FourierField random_field(const Lattice& lat, std::uint64_t seed) {
  auto eng = make_stream(seed, "unit-test");
  return sample_hermitian(lat, eng, [](std::size_t) { return 1.0; });
}

inline double max_diff(const FourierField& a, const FourierField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace paralab::test
