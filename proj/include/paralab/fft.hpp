#pragma once

#include "paralab/lattice.hpp"

namespace paralab::fft {

// out(x_j) = sum_k in(k) e^{i k x_j} on the n^d collocation grid x_j = 2 pi j / n.
void inverse(int d, int n, const cplx* in, cplx* out);
// out(k) = n^{-d} sum_j in(x_j) e^{-i k x_j}; exact inverse of `inverse`.
void forward(int d, int n, const cplx* in, cplx* out);

// Copy coefficients of lattice `lat` into the larger lattice of size m per
// axis (m >= n). Nyquist modes of `lat` are dropped.
void pad(const Lattice& lat, const cplx* in, int m, cplx* out);
// Inverse of pad: keep modes of the m-lattice with |k_a| < n/2, zero Nyquist.
void truncate(int m, const Lattice& lat, const cplx* in, cplx* out);

// Size of the 3/2-rule grid for lattice size n.
inline int dealias_size(int n) { return 3 * n / 2; }

}  // namespace paralab::fft
