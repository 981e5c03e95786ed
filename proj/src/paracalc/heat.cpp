#include "paralab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "paralab/bony.hpp"
#include "paralab/errors.hpp"
#include "paralab/fft.hpp"
#include "paralab/partition.hpp"

namespace paralab {

FourierField heat_flow(const FourierField& u, double t) {
  if (t < 0) throw InvalidArgument("heat_flow: negative time");
  FourierField out = u;
  if (t == 0) return out;
  auto tb = tables(u.lattice());
  for (int c = 0; c < u.comps(); ++c) {
    auto v = out.comp(c);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= std::exp(-0.5 * t * tb->k2[i]);
  }
  return out;
}

namespace {

// (1 - e^{-z}(1 + z)) / z^2, series near 0
double g0(double z) {
  if (z < 1e-2) {
    double term = 1.0, sum = 0.0;
    // sum_{n>=2} (-1)^n (n-1)/n! z^{n-2}
    double fact = 2.0;
    for (int n = 2; n < 12; ++n) {
      if (n > 2) fact *= n;
      sum += ((n % 2 == 0) ? 1.0 : -1.0) * (n - 1) / fact * term;
      term *= z;
    }
    return sum;
  }
  return (-std::expm1(-z) - z * std::exp(-z)) / (z * z);
}

// (1 - e^{-z}) / z
double g1(double z) { return z < 1e-12 ? 1.0 - 0.5 * z : -std::expm1(-z) / z; }

}  // namespace

EtdStepper::EtdStepper(const Lattice& lat, double dt) : lat_(lat), dt_(dt) {
  if (!(dt > 0)) throw InvalidArgument("EtdStepper: dt must be positive");
  auto tb = tables(lat);
  const std::size_t s = lat.size();
  e_.resize(s);
  w0_.resize(s);
  w1_.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    const double z = 0.5 * tb->k2[i] * dt;
    e_[i] = std::exp(-z);
    w0_[i] = dt * g0(z);
    w1_[i] = dt * g1(z) - w0_[i];
  }
}

void EtdStepper::forward(const FourierField& prev, const FourierField& f0, const FourierField& f1,
                         FourierField& out) const {
  const std::size_t s = lat_.size();
  for (int c = 0; c < prev.comps(); ++c) {
    auto p = prev.comp(c);
    auto a = f0.comp(c);
    auto b = f1.comp(c);
    auto o = out.comp(c);
    for (std::size_t i = 0; i < s; ++i) o[i] = e_[i] * p[i] + w0_[i] * a[i] + w1_[i] * b[i];
  }
}

void EtdStepper::backward(const FourierField& next, const FourierField& f0, const FourierField& f1,
                          FourierField& out) const {
  const std::size_t s = lat_.size();
  for (int c = 0; c < next.comps(); ++c) {
    auto p = next.comp(c);
    auto a = f0.comp(c);
    auto b = f1.comp(c);
    auto o = out.comp(c);
    for (std::size_t i = 0; i < s; ++i) o[i] = e_[i] * p[i] + w1_[i] * a[i] + w0_[i] * b[i];
  }
}

void EtdStepper::decay(FourierField& u) const {
  for (int c = 0; c < u.comps(); ++c) {
    auto v = u.comp(c);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= e_[i];
  }
}

std::shared_ptr<const EtdStepper> etd_stepper(const Lattice& lat, double dt) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const EtdStepper>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(lat.d, lat.n, dt);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto s = std::make_shared<const EtdStepper>(lat, dt);
  if (cache.size() > 64) cache.clear();
  cache.emplace(key, s);
  return s;
}

SpaceTimeField duhamel_forward_all(const SpaceTimeField& f) {
  SpaceTimeField out(f.grid, f.lattice(), f.comps());
  auto st = etd_stepper(f.lattice(), f.grid.dt());
  for (int m = 0; m < f.grid.M; ++m) st->forward(out[m], f[m], f[m + 1], out[m + 1]);
  return out;
}

FourierField duhamel_forward(const SpaceTimeField& f, double t) {
  const int mt = f.grid.index_of(t);
  auto st = etd_stepper(f.lattice(), f.grid.dt());
  FourierField acc(f.lattice(), f.comps()), next(f.lattice(), f.comps());
  for (int m = 0; m < mt; ++m) {
    st->forward(acc, f[m], f[m + 1], next);
    std::swap(acc, next);
  }
  return acc;
}

SpaceTimeField duhamel_backward_all(const SpaceTimeField& f) {
  SpaceTimeField out(f.grid, f.lattice(), f.comps());
  auto st = etd_stepper(f.lattice(), f.grid.dt());
  for (int m = f.grid.M - 1; m >= 0; --m) st->backward(out[m + 1], f[m], f[m + 1], out[m]);
  return out;
}

FourierField duhamel_backward(const SpaceTimeField& f, double t, double T) {
  const int mt = f.grid.index_of(t);
  const int mT = f.grid.index_of(T);
  if (mT < mt) throw InvalidArgument("duhamel_backward: horizon before t");
  auto st = etd_stepper(f.lattice(), f.grid.dt());
  FourierField acc(f.lattice(), f.comps()), next(f.lattice(), f.comps());
  for (int m = mT - 1; m >= mt; --m) {
    st->backward(acc, f[m], f[m + 1], next);
    std::swap(acc, next);
  }
  return acc;
}

double hoelder_time_norm(const SpaceTimeField& u, double rho, const BesovSpec& target) {
  validate(target);
  const int M = u.grid.M;
  if (M < 2) throw InvalidArgument("hoelder_time_norm: need M >= 2");
  const auto& lat = u.lattice();
  auto part = build_partition(lat);
  const int nb = part->nblocks();
  const std::size_t s = lat.size();
  // physical blocks per node: [node][block][comp * s + x]
  std::vector<std::vector<std::vector<cplx>>> phys(M + 1, std::vector<std::vector<cplx>>(nb));
  std::vector<cplx> tmp(s);
  for (int m = 0; m <= M; ++m)
    for (int j = -1; j <= part->jmax; ++j) {
      auto& dst = phys[m][j + 1];
      dst.assign(std::size_t(u.comps()) * s, cplx(0.0));
      for (int c = 0; c < u.comps(); ++c) {
        std::fill(tmp.begin(), tmp.end(), cplx(0.0));
        auto src = u[m].comp(c);
        const auto& mult = part->block(j);
        for (std::size_t i : part->support(j)) tmp[i] = mult[i] * src[i];
        fft::inverse(lat.d, lat.n, tmp.data(), dst.data() + c * s);
      }
    }
  auto block_norm = [&](int a, int b, int blk) {
    const auto& x = phys[a][blk];
    const auto& y = phys[b][blk];
    double acc = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      double sq = 0;
      for (int c = 0; c < u.comps(); ++c) sq += std::norm(x[c * s + i] - y[c * s + i]);
      if (std::isinf(target.p)) mx = std::max(mx, sq);
      else acc += std::pow(sq, 0.5 * target.p);
    }
    return std::isinf(target.p) ? std::sqrt(mx) : std::pow(acc / double(s), 1.0 / target.p);
  };
  double best = 0.0;
  std::vector<double> norms(nb);
  for (int a = 0; a <= M; ++a)
    for (int b = a + 1; b <= M; ++b) {
      for (int blk = 0; blk < nb; ++blk) norms[blk] = block_norm(a, b, blk);
      const double v = besov_from_blocks(norms, target.alpha, target.q);
      best = std::max(best, v / std::pow(u.grid.t(b) - u.grid.t(a), rho));
    }
  return best;
}

SchauderCommutatorReport schauder_commutator_check(const FourierField& f, const FourierField& g,
                                                   const std::vector<double>& times, double alpha,
                                                   double beta, double theta) {
  SchauderCommutatorReport rep;
  const double nf = holder_norm(f, alpha), ng = holder_norm(g, beta);
  const FourierField flg = para_lt(f, g);
  for (double t : times) {
    if (!(t > 0)) throw InvalidArgument("schauder_commutator_check: t must be positive");
    FourierField diff = heat_flow(flg, t) - para_lt(f, heat_flow(g, t));
    const double num = holder_norm(diff, alpha + beta + 2 * theta) * std::pow(t, theta);
    const double r = (nf * ng > 0) ? num / (nf * ng) : 0.0;
    rep.times.push_back(t);
    rep.ratios.push_back(r);
    rep.max_ratio = std::max(rep.max_ratio, r);
  }
  return rep;
}

}  // namespace paralab
