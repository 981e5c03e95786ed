#pragma once

// Independent reference computations for the tests and verification checks.

#include <functional>

#include "paralab/noise.hpp"
#include "paralab/spacetime.hpp"

namespace paralab::oracle {

// Direct double sum over (k1, k2) of the tree-124 lattice constant.
double c124_direct(const Mollifier& m, double eps, const Lattice& lat);

// du/dt + 1/2 Delta u + V . grad u = f on [0, T], u(T) = uT, by
// integrating-factor RK4 in reversed time with `substeps` steps per grid
// interval. V and f are linearly interpolated between nodes.
SpaceTimeField generator_ifrk4(const SpaceTimeField& V, const SpaceTimeField& f, const FourierField& uT,
                               int substeps);

// dh/dt = 1/2 Delta h + lambda |grad h|^2 + eta - c, h(0) = h0, IF-RK4
// forward; eta is linearly interpolated between nodes.
SpaceTimeField kpz_ifrk4(const SpaceTimeField& eta, const FourierField& h0, double lambda, double c,
                         int substeps);

// dv/dt = 1/2 Delta v + (xi - b) v on the 2d collocation grid: eighth-order
// finite differences in space, Crank-Nicolson in time, conjugate gradients
// for the implicit solve. Returns grid values at the final time.
std::vector<double> pam_fd_cn(const FourierField& xi, double b, const FourierField& v0, double T, int steps);

}  // namespace paralab::oracle
