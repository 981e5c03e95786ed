#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace paralab {

using cplx = std::complex<double>;
using Wave = std::array<int, 3>;

// Frequency lattice on [0, 2pi)^d: k_a in [-n/2, n/2). Storage is row-major
// over FFT index order (k_a mod n), axis 0 slowest.
struct Lattice {
  int d = 1;
  int n = 8;

  std::size_t size() const;
  std::size_t index(const Wave& k) const;
  Wave wave(std::size_t idx) const;
  bool operator==(const Lattice& o) const { return d == o.d && n == o.n; }
  bool operator!=(const Lattice& o) const { return !(*this == o); }
};

// Throws InvalidArgument unless d in {1,2,3} and n even, n >= 2.
void validate(const Lattice& lat);
// Stricter check used by the dyadic machinery: n >= 8.
void validate_dyadic(const Lattice& lat);

struct LatticeTables {
  std::vector<Wave> k;
  std::vector<double> k2;         // |k|^2
  std::vector<std::size_t> neg;   // index of -k (mod n)
  std::vector<bool> nyquist;      // some |k_a| == n/2
  std::vector<std::array<double, 3>> dk;  // derivative wavenumbers, Nyquist zeroed
};

// Cached per lattice; safe to call from several threads.
std::shared_ptr<const LatticeTables> tables(const Lattice& lat);

inline int wrap_index(int k, int n) { return ((k % n) + n) % n; }
inline int signed_wave(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace paralab
