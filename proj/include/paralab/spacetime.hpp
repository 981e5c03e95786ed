#pragma once

#include <vector>

#include "paralab/field.hpp"

namespace paralab {

// Uniform nodes t_m = m T / M, m = 0..M.
struct TimeGrid {
  double T = 1.0;
  int M = 2;

  double t(int m) const { return T * double(m) / double(M); }
  double dt() const { return T / double(M); }
  int nodes() const { return M + 1; }
  // Node index of t; throws InvalidArgument when t is not a node.
  int index_of(double t) const;
  bool operator==(const TimeGrid& o) const { return T == o.T && M == o.M; }
};

void validate(const TimeGrid& g);

struct SpaceTimeField {
  TimeGrid grid;
  std::vector<FourierField> frames;

  SpaceTimeField() = default;
  SpaceTimeField(const TimeGrid& g, const Lattice& lat, int comps = 1);

  const Lattice& lattice() const { return frames.front().lattice(); }
  int comps() const { return frames.front().comps(); }
  FourierField& operator[](int m) { return frames[m]; }
  const FourierField& operator[](int m) const { return frames[m]; }
  SpaceTimeField component(int c) const;

  SpaceTimeField& operator+=(const SpaceTimeField& o);
  SpaceTimeField& operator-=(const SpaceTimeField& o);
  SpaceTimeField& operator*=(double s);
  SpaceTimeField& axpy(double s, const SpaceTimeField& o);
};

// Frames m -> u(T - t_m); the grid is symmetric so this is a reindexing.
SpaceTimeField time_reversed(const SpaceTimeField& u);
// Gradient of a scalar space-time field, frame by frame.
SpaceTimeField gradient(const SpaceTimeField& u);
// Same field at every node.
SpaceTimeField constant_in_time(const FourierField& f, const TimeGrid& g);
// Max over nodes of the max coefficient modulus.
double max_abs(const SpaceTimeField& u);
// Max over nodes of the collocation sup norm.
double sup_norm(const SpaceTimeField& u);

}  // namespace paralab
