#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "paralab/field.hpp"

namespace paralab {

struct WhiteNoise {
  Lattice lat;
  std::uint64_t seed = 0;
  FourierField xi;  // xi(0) = 0, E|xi(k)|^2 = 1, Hermitian
};

WhiteNoise sample_white_noise(std::uint64_t seed, const Lattice& lat,
                              std::string_view stream = "white-noise");

// Radial Fourier multiplier with m(0) = 1 and compact support.
//   bump:         exp(1 - 1/(1 - r^2)) on r < 1
//   plateau:a:b   1 on r <= a, smooth decay to 0 at r = b
struct Mollifier {
  enum class Profile { Bump, Plateau };
  Profile profile = Profile::Bump;
  double a = 0.5, b = 1.0;

  double operator()(double r) const;
  double cutoff() const { return profile == Profile::Bump ? 1.0 : b; }
  std::string id() const;
  static Mollifier parse(std::string_view id);
  static Mollifier bump() { return {}; }
  static Mollifier plateau(double a, double b) { return {Profile::Plateau, a, b}; }
};

FourierField mollify(const FourierField& xi, const Mollifier& m, double eps);

// sum_{k != 0} m(eps k)^2 / |k|^2
double renorm_c12(const Mollifier& m, double eps, const Lattice& lat);
// 2 sum m(eps k1)^2 m(eps k2)^2 (k1.k2)^2 / (|k12|^2 |k1|^4 |k2|^4) over
// k1, k2, k12 != 0, evaluated as a zero-padded FFT convolution.
double renorm_c124(const Mollifier& m, double eps, const Lattice& lat);

// Constants actually subtracted when the KPZ-type equation
//   dH = 1/2 Delta H + |grad H|^2 + lambda xi_eps - (a + b)
// is expanded with the semigroup exp(t Delta / 2). The lattice sums above are
// written for the kernel exp(-|k|^2 t); rescaling time gives
//   a = 4 lambda^2 c12,   b = 64 lambda^4 c124.
// h = H / lambda then solves dh = 1/2 Delta h + lambda |grad h|^2 + xi - c
// with c = (a + b) / lambda; lambda = 1/2 is the Cole-Hopf case.
struct KpzConstants {
  double c12 = 0, c124 = 0;
  double lambda = 1.0;
  double a = 0, b = 0;
  double c = 0;
};
KpzConstants kpz_constants(const Mollifier& m, double eps, const Lattice& lat, double lambda);
KpzConstants kpz_constants_from(double c12, double c124, double lambda);

}  // namespace paralab
