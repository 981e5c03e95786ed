#include "paralab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace paralab::fft {
namespace {

std::mutex plan_mutex;

fftw_plan get_plan(int d, int n, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(d, n, sign);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  int dims[3] = {n, n, n};
  std::size_t s = 1;
  for (int a = 0; a < d; ++a) s *= n;
  auto* a = fftw_alloc_complex(s);
  auto* b = fftw_alloc_complex(s);
  fftw_plan p = fftw_plan_dft(d, dims, a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  fftw_free(b);
  plans.emplace(key, p);
  return p;
}

inline fftw_complex* as_fftw(const cplx* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

}  // namespace

void inverse(int d, int n, const cplx* in, cplx* out) {
  fftw_execute_dft(get_plan(d, n, FFTW_BACKWARD), as_fftw(in), as_fftw(out));
}

void forward(int d, int n, const cplx* in, cplx* out) {
  fftw_execute_dft(get_plan(d, n, FFTW_FORWARD), as_fftw(in), as_fftw(out));
  std::size_t s = 1;
  for (int a = 0; a < d; ++a) s *= n;
  const double scale = 1.0 / double(s);
  for (std::size_t i = 0; i < s; ++i) out[i] *= scale;
}

void pad(const Lattice& lat, const cplx* in, int m, cplx* out) {
  const int n = lat.n, d = lat.d;
  std::size_t sm = 1;
  for (int a = 0; a < d; ++a) sm *= m;
  std::fill(out, out + sm, cplx(0.0));
  // walk the interior modes |k_a| < n/2 axis by axis
  const int h = n / 2;
  if (d == 1) {
    for (int k = -h + 1; k < h; ++k) out[wrap_index(k, m)] = in[wrap_index(k, n)];
  } else if (d == 2) {
    for (int k0 = -h + 1; k0 < h; ++k0) {
      const cplx* src = in + std::size_t(wrap_index(k0, n)) * n;
      cplx* dst = out + std::size_t(wrap_index(k0, m)) * m;
      for (int k1 = -h + 1; k1 < h; ++k1) dst[wrap_index(k1, m)] = src[wrap_index(k1, n)];
    }
  } else {
    for (int k0 = -h + 1; k0 < h; ++k0)
      for (int k1 = -h + 1; k1 < h; ++k1) {
        const cplx* src = in + (std::size_t(wrap_index(k0, n)) * n + wrap_index(k1, n)) * n;
        cplx* dst = out + (std::size_t(wrap_index(k0, m)) * m + wrap_index(k1, m)) * m;
        for (int k2 = -h + 1; k2 < h; ++k2) dst[wrap_index(k2, m)] = src[wrap_index(k2, n)];
      }
  }
}

void truncate(int m, const Lattice& lat, const cplx* in, cplx* out) {
  const int n = lat.n, d = lat.d;
  std::fill(out, out + lat.size(), cplx(0.0));
  const int h = n / 2;
  if (d == 1) {
    for (int k = -h + 1; k < h; ++k) out[wrap_index(k, n)] = in[wrap_index(k, m)];
  } else if (d == 2) {
    for (int k0 = -h + 1; k0 < h; ++k0) {
      const cplx* src = in + std::size_t(wrap_index(k0, m)) * m;
      cplx* dst = out + std::size_t(wrap_index(k0, n)) * n;
      for (int k1 = -h + 1; k1 < h; ++k1) dst[wrap_index(k1, n)] = src[wrap_index(k1, m)];
    }
  } else {
    for (int k0 = -h + 1; k0 < h; ++k0)
      for (int k1 = -h + 1; k1 < h; ++k1) {
        const cplx* src = in + (std::size_t(wrap_index(k0, m)) * m + wrap_index(k1, m)) * m;
        cplx* dst = out + (std::size_t(wrap_index(k0, n)) * n + wrap_index(k1, n)) * n;
        for (int k2 = -h + 1; k2 < h; ++k2) dst[wrap_index(k2, n)] = src[wrap_index(k2, m)];
      }
  }
}

}  // namespace paralab::fft
