#include "paralab/spacetime.hpp"

#include <algorithm>
#include <cmath>

#include "paralab/errors.hpp"

namespace paralab {

int TimeGrid::index_of(double t) const {
  const double x = t / T * M;
  const double r = std::round(x);
  if (r < 0 || r > M || std::abs(x - r) > 1e-9) throw InvalidArgument("time is not a grid node");
  return int(r);
}

void validate(const TimeGrid& g) {
  if (!(g.T > 0) || g.M < 2) throw InvalidArgument("time grid needs T > 0 and M >= 2");
}

SpaceTimeField::SpaceTimeField(const TimeGrid& g, const Lattice& lat, int comps) : grid(g) {
  validate(g);
  frames.assign(g.nodes(), FourierField(lat, comps));
}

SpaceTimeField SpaceTimeField::component(int c) const {
  SpaceTimeField out;
  out.grid = grid;
  for (const auto& f : frames) out.frames.push_back(f.component(c));
  return out;
}

static void require_compatible(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (!(a.grid == b.grid) || a.frames.size() != b.frames.size())
    throw InvalidArgument("space-time fields on different time grids");
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& o) {
  require_compatible(*this, o);
  for (std::size_t m = 0; m < frames.size(); ++m) frames[m] += o.frames[m];
  return *this;
}

SpaceTimeField& SpaceTimeField::operator-=(const SpaceTimeField& o) {
  require_compatible(*this, o);
  for (std::size_t m = 0; m < frames.size(); ++m) frames[m] -= o.frames[m];
  return *this;
}

SpaceTimeField& SpaceTimeField::operator*=(double s) {
  for (auto& f : frames) f *= s;
  return *this;
}

SpaceTimeField& SpaceTimeField::axpy(double s, const SpaceTimeField& o) {
  require_compatible(*this, o);
  for (std::size_t m = 0; m < frames.size(); ++m) frames[m].axpy(s, o.frames[m]);
  return *this;
}

SpaceTimeField time_reversed(const SpaceTimeField& u) {
  SpaceTimeField out = u;
  std::reverse(out.frames.begin(), out.frames.end());
  return out;
}

SpaceTimeField gradient(const SpaceTimeField& u) {
  SpaceTimeField out;
  out.grid = u.grid;
  for (const auto& f : u.frames) out.frames.push_back(gradient(f));
  return out;
}

SpaceTimeField constant_in_time(const FourierField& f, const TimeGrid& g) {
  validate(g);
  SpaceTimeField out;
  out.grid = g;
  out.frames.assign(g.nodes(), f);
  return out;
}

double max_abs(const SpaceTimeField& u) {
  double m = 0;
  for (const auto& f : u.frames) m = std::max(m, f.max_abs());
  return m;
}

double sup_norm(const SpaceTimeField& u) {
  double m = 0;
  for (const auto& f : u.frames) m = std::max(m, sup_norm(f));
  return m;
}

}  // namespace paralab
