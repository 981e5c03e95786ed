#include "paralab/partition.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "paralab/errors.hpp"

namespace paralab {
namespace {

double psi(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double lp_theta(double r) {
  constexpr double a = 0.75, b = 4.0 / 3.0;
  if (r <= a) return 1.0;
  if (r >= b) return 0.0;
  const double s = (r - a) / (b - a);
  const double p = psi(1.0 - s), q = psi(s);
  return p / (p + q);
}

std::shared_ptr<const DyadicPartition> build_partition(const Lattice& lat) {
  validate_dyadic(lat);
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const DyadicPartition>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(lat.d, lat.n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto p = std::make_shared<DyadicPartition>();
  p->lat = lat;
  p->jmax = static_cast<int>(std::floor(std::log2(lat.n / 2.0) + 1e-12));
  auto tb = tables(lat);
  const std::size_t s = lat.size();
  p->chi.resize(s);
  p->rho.assign(p->jmax + 1, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i) {
    const double r = std::sqrt(tb->k2[i]);
    p->chi[i] = lp_theta(r);
    for (int j = 0; j < p->jmax; ++j)
      p->rho[j][i] = lp_theta(std::ldexp(r, -j - 1)) - lp_theta(std::ldexp(r, -j));
    p->rho[p->jmax][i] = 1.0 - lp_theta(std::ldexp(r, -p->jmax));
  }
  p->support_.resize(p->nblocks());
  for (int j = -1; j <= p->jmax; ++j) {
    const auto& b = p->block(j);
    for (std::size_t i = 0; i < s; ++i)
      if (b[i] != 0.0) p->support_[j + 1].push_back(i);
  }
  cache.emplace(key, p);
  return p;
}

FourierField lp_block(const FourierField& u, int j) {
  auto p = build_partition(u.lattice());
  if (j < -1 || j > p->jmax)
    throw InvalidArgument("lp_block: block index " + std::to_string(j) + " outside [-1, " +
                          std::to_string(p->jmax) + "]");
  FourierField out(u.lattice(), u.comps());
  const auto& m = p->block(j);
  for (int c = 0; c < u.comps(); ++c) {
    auto src = u.comp(c);
    auto dst = out.comp(c);
    for (std::size_t i : p->support(j)) dst[i] = m[i] * src[i];
  }
  return out;
}

FourierField lp_low(const FourierField& u, int j) {
  FourierField out(u.lattice(), u.comps());
  auto p = build_partition(u.lattice());
  for (int i = -1; i <= std::min(j, p->jmax); ++i) out += lp_block(u, i);
  return out;
}

}  // namespace paralab
