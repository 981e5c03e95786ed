#pragma once

#include <cstdint>
#include <string>

#include "paralab/spacetime.hpp"

namespace paralab {

// X = I(xi) for time-constant xi, exact per mode.
SpaceTimeField build_X(const FourierField& xi, const TimeGrid& grid);
// X = I(eta) for a space-time forcing (ETD quadrature).
SpaceTimeField build_X(const SpaceTimeField& eta);

// I(|grad X|^2) - c t
SpaceTimeField build_tree12(const SpaceTimeField& X, double c);
// I(grad X12 . grad X)
SpaceTimeField build_tree122(const SpaceTimeField& X12, const SpaceTimeField& X);
// I(grad X122 . grad X), never renormalized
SpaceTimeField build_tree1222(const SpaceTimeField& X122, const SpaceTimeField& X);
// I(|grad X12|^2) - c t
SpaceTimeField build_tree124(const SpaceTimeField& X12, double c);
// Q = I(grad X), vector valued.
SpaceTimeField build_Q(const SpaceTimeField& X);
// Component i*d + j holds d_i Q^j o d_i X.
SpaceTimeField build_QgradX(const SpaceTimeField& Q, const SpaceTimeField& X);

// Xi(eta, a, b) plus the derived Q used by the KPZ solver.
struct KpzEnhancement {
  SpaceTimeField X, X12, X122, X1222, X124, QgradX, Q;
  double a = 0.0, b = 0.0;
  // regularity tags of the rough-distribution space
  double rho = 0.45, r = 0.45;
  // provenance, filled by the noise-driven builder
  std::uint64_t seed = 0;
  std::string mollifier;
  double eps = 0.0, c12 = 0.0, c124 = 0.0, lambda = 1.0;

  const TimeGrid& grid() const { return X.grid; }
  const Lattice& lattice() const { return X.lattice(); }
};

KpzEnhancement build_kpz_enhancement(const SpaceTimeField& eta, double a, double b);
KpzEnhancement build_kpz_enhancement(const FourierField& xi, const TimeGrid& grid, double a, double b);
KpzEnhancement zero_enhancement(const Lattice& lat, const TimeGrid& grid);

// K(V) = (V, J^T(d_j V^i) o V^j); component i*d + j of V2.
struct GeneratorLift {
  SpaceTimeField V1;
  SpaceTimeField V2;
};
GeneratorLift lift_generator(const SpaceTimeField& V);
GeneratorLift zero_lift(const Lattice& lat, const TimeGrid& grid);

}  // namespace paralab
