#pragma once

#include <cstdint>
#include <functional>

#include "paralab/field.hpp"
#include "paralab/rng.hpp"

namespace paralab {

// Hermitian Gaussian coefficients: for each conjugate pair (k, -k) with k != -k
// the real and imaginary parts are N(0, 1/2); self-conjugate modes are real
// N(0, 1). Each coefficient is then multiplied by weight(k-index).
FourierField sample_hermitian(const Lattice& lat, Engine& eng,
                              const std::function<double(std::size_t)>& weight);

// sum_{k != 0} |k|^{-alpha - d/2} g_k e_k with unit Gaussians g_k; Nyquist modes
// are left out so the field is closed under dealiased products.
FourierField synthetic_field(const Lattice& lat, double alpha, std::uint64_t seed);

}  // namespace paralab
