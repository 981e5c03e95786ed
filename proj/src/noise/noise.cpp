#include "paralab/noise.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "paralab/errors.hpp"
#include "paralab/fft.hpp"
#include "paralab/rng.hpp"
#include "paralab/synthetic.hpp"

namespace paralab {

WhiteNoise sample_white_noise(std::uint64_t seed, const Lattice& lat, std::string_view stream) {
  validate(lat);
  auto eng = make_stream(seed, stream, (std::uint64_t(lat.d) << 32) | std::uint64_t(lat.n));
  auto tb = tables(lat);
  WhiteNoise w{lat, seed, sample_hermitian(lat, eng, [&](std::size_t i) { return tb->k2[i] == 0 ? 0.0 : 1.0; })};
  return w;
}

namespace {

double psi(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double Mollifier::operator()(double r) const {
  r = std::abs(r);
  if (profile == Profile::Bump) return r < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
  if (r <= a) return 1.0;
  if (r >= b) return 0.0;
  const double s = (r - a) / (b - a);
  const double p = psi(1.0 - s), q = psi(s);
  return p / (p + q);
}

std::string Mollifier::id() const {
  if (profile == Profile::Bump) return "bump";
  std::ostringstream os;
  os.precision(17);
  os << "plateau:" << a << ":" << b;
  return os.str();
}

Mollifier Mollifier::parse(std::string_view id) {
  if (id == "bump") return bump();
  if (id == "plateau") return plateau(0.5, 1.0);
  if (id.rfind("plateau:", 0) == 0) {
    std::string rest(id.substr(8));
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw InvalidArgument("mollifier id plateau:a:b expected");
    double a = 0, b = 0;
    try {
      a = std::stod(rest.substr(0, colon));
      b = std::stod(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("bad plateau mollifier parameters: " + std::string(id));
    }
    if (!(a > 0 && b > a)) throw InvalidArgument("plateau mollifier needs 0 < a < b");
    return plateau(a, b);
  }
  throw InvalidArgument("unknown mollifier profile: " + std::string(id));
}

FourierField mollify(const FourierField& xi, const Mollifier& m, double eps) {
  if (!(eps > 0)) throw InvalidArgument("mollify: eps must be positive");
  auto tb = tables(xi.lattice());
  FourierField out = xi;
  for (int c = 0; c < out.comps(); ++c) {
    auto v = out.comp(c);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m(eps * std::sqrt(tb->k2[i]));
  }
  return out;
}

double renorm_c12(const Mollifier& m, double eps, const Lattice& lat) {
  if (!(eps > 0)) throw InvalidArgument("renorm_c12: eps must be positive");
  auto tb = tables(lat);
  double s = 0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (tb->k2[i] == 0) continue;
    const double w = m(eps * std::sqrt(tb->k2[i]));
    s += w * w / tb->k2[i];
  }
  return s;
}

double renorm_c124(const Mollifier& m, double eps, const Lattice& lat) {
  if (!(eps > 0)) throw InvalidArgument("renorm_c124: eps must be positive");
  validate(lat);
  const int d = lat.d;
  auto tb = tables(lat);
  // Only modes inside the mollifier support matter; size the padded grid so
  // the linear convolution of the support with itself does not wrap.
  int kmax = 0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (tb->k2[i] == 0) continue;
    if (m(eps * std::sqrt(tb->k2[i])) == 0.0) continue;
    for (int a = 0; a < d; ++a) kmax = std::max(kmax, std::abs(tb->k[i][a]));
  }
  if (kmax == 0) return 0.0;
  int L = 2;
  while (L < 4 * kmax + 2) L *= 2;
  Lattice big{d, L};
  const std::size_t s = big.size();

  std::vector<double> amp(lat.size(), 0.0);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (tb->k2[i] == 0) continue;
    const double w = m(eps * std::sqrt(tb->k2[i]));
    amp[i] = w * w / (tb->k2[i] * tb->k2[i]);
  }
  auto btb = tables(big);
  std::vector<double> conv(s, 0.0);
  std::vector<cplx> buf(s), phys(s);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      std::fill(buf.begin(), buf.end(), cplx(0.0));
      for (std::size_t q = 0; q < lat.size(); ++q) {
        if (amp[q] == 0) continue;
        const Wave& k = tb->k[q];
        buf[big.index(k)] = amp[q] * double(k[i]) * double(k[j]);
      }
      fft::inverse(d, L, buf.data(), phys.data());
      for (auto& z : phys) z = z * z;
      fft::forward(d, L, phys.data(), buf.data());
      const double mult = (i == j) ? 1.0 : 2.0;
      for (std::size_t q = 0; q < s; ++q) conv[q] += mult * buf[q].real();
    }
  double total = 0;
  for (std::size_t q = 0; q < s; ++q) {
    if (btb->k2[q] == 0) continue;
    total += conv[q] / btb->k2[q];
  }
  return 2.0 * total;
}

KpzConstants kpz_constants_from(double c12, double c124, double lambda) {
  KpzConstants k;
  k.c12 = c12;
  k.c124 = c124;
  k.lambda = lambda;
  k.a = 4.0 * lambda * lambda * c12;
  k.b = 64.0 * std::pow(lambda, 4) * c124;
  k.c = (k.a + k.b) / lambda;
  return k;
}

KpzConstants kpz_constants(const Mollifier& m, double eps, const Lattice& lat, double lambda) {
  if (!(lambda > 0)) throw InvalidArgument("kpz_constants: coupling must be positive");
  return kpz_constants_from(renorm_c12(m, eps, lat), renorm_c124(m, eps, lat), lambda);
}

}  // namespace paralab
