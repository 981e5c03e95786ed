#include "paralab/lattice.hpp"

#include <map>
#include <mutex>
#include <string>

#include "paralab/errors.hpp"

namespace paralab {

std::size_t Lattice::size() const {
  std::size_t s = 1;
  for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
  return s;
}

std::size_t Lattice::index(const Wave& k) const {
  std::size_t idx = 0;
  for (int a = 0; a < d; ++a) idx = idx * n + wrap_index(k[a], n);
  return idx;
}

Wave Lattice::wave(std::size_t idx) const {
  Wave k{0, 0, 0};
  for (int a = d - 1; a >= 0; --a) {
    k[a] = signed_wave(static_cast<int>(idx % n), n);
    idx /= n;
  }
  return k;
}

void validate(const Lattice& lat) {
  if (lat.d < 1 || lat.d > 3)
    throw InvalidArgument("lattice dimension must be 1, 2 or 3, got " + std::to_string(lat.d));
  if (lat.n < 2 || lat.n % 2 != 0)
    throw InvalidArgument("lattice size must be even and >= 2, got " + std::to_string(lat.n));
}

void validate_dyadic(const Lattice& lat) {
  validate(lat);
  if (lat.n < 8) throw InvalidArgument("dyadic partition needs N >= 8, got " + std::to_string(lat.n));
}

std::shared_ptr<const LatticeTables> tables(const Lattice& lat) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const LatticeTables>> cache;
  validate(lat);
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(lat.d, lat.n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto t = std::make_shared<LatticeTables>();
  const std::size_t s = lat.size();
  t->k.resize(s);
  t->k2.resize(s);
  t->neg.resize(s);
  t->nyquist.resize(s);
  t->dk.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    Wave k = lat.wave(i);
    Wave mk{-k[0], -k[1], -k[2]};
    double k2 = 0;
    bool nyq = false;
    std::array<double, 3> dk{0, 0, 0};
    for (int a = 0; a < lat.d; ++a) {
      k2 += double(k[a]) * k[a];
      if (k[a] == -lat.n / 2) nyq = true;
      else dk[a] = k[a];
    }
    t->k[i] = k;
    t->k2[i] = k2;
    t->neg[i] = lat.index(mk);
    t->nyquist[i] = nyq;
    t->dk[i] = dk;
  }
  cache.emplace(key, t);
  return t;
}

}  // namespace paralab
