#include "paralab/besov.hpp"

#include <algorithm>
#include <cmath>

#include "paralab/errors.hpp"
#include "paralab/fft.hpp"
#include "paralab/partition.hpp"

namespace paralab {

void validate(const BesovSpec& s) {
  if (!(s.p >= 1.0) || !(s.q >= 1.0) || std::isnan(s.alpha))
    throw InvalidArgument("Besov spec needs p, q in [1, inf] and finite alpha");
}

namespace {

double grid_norm(const std::vector<double>& sq, double p) {
  // sq holds |u(x)|^2 per grid point
  if (std::isinf(p)) {
    double m = 0;
    for (double v : sq) m = std::max(m, v);
    return std::sqrt(m);
  }
  double acc = 0;
  for (double v : sq) acc += std::pow(v, 0.5 * p);
  return std::pow(acc / double(sq.size()), 1.0 / p);
}

}  // namespace

double lp_norm(const FourierField& u, double p) {
  const auto& lat = u.lattice();
  std::vector<double> sq(lat.size(), 0.0);
  for (int c = 0; c < u.comps(); ++c) {
    auto z = dft_inverse(u, c);
    for (std::size_t i = 0; i < z.size(); ++i) sq[i] += std::norm(z[i]);
  }
  return grid_norm(sq, p);
}

std::vector<double> block_norms(const FourierField& u, double p) {
  const auto& lat = u.lattice();
  auto part = build_partition(lat);
  std::vector<double> out;
  std::vector<cplx> tmp(lat.size()), phys(lat.size());
  std::vector<double> sq(lat.size());
  for (int j = -1; j <= part->jmax; ++j) {
    std::fill(sq.begin(), sq.end(), 0.0);
    const auto& m = part->block(j);
    bool any = false;
    for (int c = 0; c < u.comps(); ++c) {
      auto src = u.comp(c);
      std::fill(tmp.begin(), tmp.end(), cplx(0.0));
      for (std::size_t i : part->support(j)) {
        tmp[i] = m[i] * src[i];
        any = any || tmp[i] != cplx(0.0);
      }
      if (!any) continue;
      fft::inverse(lat.d, lat.n, tmp.data(), phys.data());
      for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += std::norm(phys[i]);
    }
    out.push_back(any ? grid_norm(sq, p) : 0.0);
  }
  return out;
}

double besov_from_blocks(const std::vector<double>& blocks, double alpha, double q) {
  double acc = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int j = int(b) - 1;
    const double w = std::exp2(j * alpha) * blocks[b];
    if (std::isinf(q)) acc = std::max(acc, w);
    else acc += std::pow(w, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double besov_norm(const FourierField& u, const BesovSpec& spec) {
  validate(spec);
  return besov_from_blocks(block_norms(u, spec.p), spec.alpha, spec.q);
}

}  // namespace paralab
