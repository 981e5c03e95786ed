#include "paralab/synthetic.hpp"

#include <cmath>

namespace paralab {

FourierField sample_hermitian(const Lattice& lat, Engine& eng,
                              const std::function<double(std::size_t)>& weight) {
  auto tb = tables(lat);
  FourierField u(lat);
  auto c = u.comp(0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double h = std::sqrt(0.5);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t j = tb->neg[i];
    if (j < i) continue;
    if (j == i) {
      c[i] = gauss(eng) * weight(i);
    } else {
      const double re = gauss(eng) * h, im = gauss(eng) * h;
      c[i] = cplx(re, im) * weight(i);
      c[j] = cplx(re, -im) * weight(j);
    }
  }
  return u;
}

FourierField synthetic_field(const Lattice& lat, double alpha, std::uint64_t seed) {
  auto tb = tables(lat);
  auto eng = make_stream(seed, "synthetic");
  const double e = -alpha - 0.5 * lat.d;
  return sample_hermitian(lat, eng, [&](std::size_t i) {
    if (tb->k2[i] == 0.0 || tb->nyquist[i]) return 0.0;
    return std::pow(tb->k2[i], 0.5 * e);
  });
}

}  // namespace paralab
