#include "paralab/evaluate.hpp"

#include <cmath>

#include "paralab/errors.hpp"
#include "paralab/fft.hpp"

namespace paralab {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Keys cubic convolution weights for offset s in [0, 1).
inline void keys_weights(double s, double w[4]) {
  const double a = -0.5;
  auto near = [a](double t) { return ((a + 2) * t - (a + 3)) * t * t + 1; };
  auto far = [a](double t) { return ((a * t - 5 * a) * t + 8 * a) * t - 4 * a; };
  w[0] = far(1 + s);
  w[1] = near(s);
  w[2] = near(1 - s);
  w[3] = far(2 - s);
}

inline double wrap_pos(double x) {
  x = std::fmod(x, kTwoPi);
  return x < 0 ? x + kTwoPi : x;
}

}  // namespace

std::vector<double> refined_grid_values(const FourierField& f, int r, int comp) {
  const auto& lat = f.lattice();
  if (r < 1) throw InvalidArgument("refined_grid_values: refine factor must be >= 1");
  if (r == 1) {
    std::vector<double> v = grid_values(f, comp);
    return v;
  }
  const int m = r * lat.n;
  Lattice big{lat.d, m};
  std::vector<cplx> coef(big.size()), phys(big.size());
  // keep Nyquist modes of f as well; split them symmetrically to stay real
  auto tb = tables(lat);
  auto src = f.comp(comp);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (src[i] == cplx(0.0)) continue;
    const Wave& k = tb->k[i];
    if (!tb->nyquist[i]) {
      coef[big.index(k)] += src[i];
      continue;
    }
    // a Nyquist component k_a = -n/2 stands for cos; spread over +-n/2
    int nny = 0;
    for (int a = 0; a < lat.d; ++a) nny += (std::abs(k[a]) == lat.n / 2);
    const int combos = 1 << nny;
    for (int mask = 0; mask < combos; ++mask) {
      Wave q = k;
      int bit = 0;
      for (int a = 0; a < lat.d; ++a)
        if (std::abs(k[a]) == lat.n / 2) {
          if (mask & (1 << bit)) q[a] = lat.n / 2;
          ++bit;
        }
      coef[big.index(q)] += src[i] / double(combos);
    }
  }
  fft::inverse(lat.d, m, coef.data(), phys.data());
  std::vector<double> out(big.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = phys[i].real();
  return out;
}

PointEvaluator::PointEvaluator(const FourierField& f, Mode mode, int refine, int comp) {
  const auto& lat = f.lattice();
  d_ = lat.d;
  if (mode == Mode::Auto) mode = lat.n <= 32 ? Mode::Direct : Mode::Tabulated;
  mode_ = mode;
  if (mode_ == Mode::Direct) {
    auto tb = tables(lat);
    auto src = f.comp(comp);
    mean_ = src[0].real();
    for (std::size_t i = 1; i < lat.size(); ++i) {
      if (src[i] == cplx(0.0)) continue;
      k_.push_back(tb->k[i]);
      c_.push_back(src[i]);
    }
    return;
  }
  g_ = refine * lat.n;
  tab_ = refined_grid_values(f, refine, comp);
}

double PointEvaluator::operator()(const double* x) const {
  return mode_ == Mode::Direct ? direct(x) : tabulated(x);
}

double PointEvaluator::direct(const double* x) const {
  double s = mean_;
  for (std::size_t i = 0; i < k_.size(); ++i) {
    double ph = 0;
    for (int a = 0; a < d_; ++a) ph += k_[i][a] * x[a];
    s += c_[i].real() * std::cos(ph) - c_[i].imag() * std::sin(ph);
  }
  return s;
}

double PointEvaluator::tabulated(const double* x) const {
  const double h = kTwoPi / g_;
  int base[3] = {0, 0, 0};
  double w[3][4];
  for (int a = 0; a < d_; ++a) {
    const double u = wrap_pos(x[a]) / h;
    const int i = int(std::floor(u));
    base[a] = i - 1;
    keys_weights(u - i, w[a]);
  }
  auto at = [&](int a, int o) { return ((base[a] + o) % g_ + g_) % g_; };
  double s = 0;
  if (d_ == 1) {
    for (int o = 0; o < 4; ++o) s += w[0][o] * tab_[at(0, o)];
  } else if (d_ == 2) {
    for (int o0 = 0; o0 < 4; ++o0) {
      const std::size_t row = std::size_t(at(0, o0)) * g_;
      double r = 0;
      for (int o1 = 0; o1 < 4; ++o1) r += w[1][o1] * tab_[row + at(1, o1)];
      s += w[0][o0] * r;
    }
  } else {
    for (int o0 = 0; o0 < 4; ++o0)
      for (int o1 = 0; o1 < 4; ++o1) {
        const std::size_t row = (std::size_t(at(0, o0)) * g_ + at(1, o1)) * g_;
        double r = 0;
        for (int o2 = 0; o2 < 4; ++o2) r += w[2][o2] * tab_[row + at(2, o2)];
        s += w[0][o0] * w[1][o1] * r;
      }
  }
  return s;
}

double multilinear(const std::vector<double>& vals, int d, int g, const double* x) {
  const double h = kTwoPi / g;
  int i0[3] = {0, 0, 0};
  double fr[3] = {0, 0, 0};
  for (int a = 0; a < d; ++a) {
    const double u = wrap_pos(x[a]) / h;
    const int i = int(std::floor(u));
    i0[a] = i % g;
    fr[a] = u - i;
  }
  double s = 0;
  for (int mask = 0; mask < (1 << d); ++mask) {
    double w = 1;
    std::size_t idx = 0;
    for (int a = 0; a < d; ++a) {
      const int bit = (mask >> a) & 1;
      w *= bit ? fr[a] : 1 - fr[a];
      idx = idx * g + (i0[a] + bit) % g;
    }
    s += w * vals[idx];
  }
  return s;
}

}  // namespace paralab
