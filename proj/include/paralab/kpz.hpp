#pragma once

#include <cstdint>
#include <vector>

#include "paralab/enhancement.hpp"
#include "paralab/noise.hpp"

namespace paralab {

struct KpzExponents {
  double alpha = 0.45, varrho = 0.48, beta = 0.3, gamma = 0.92, delta = 0.42;
};
void validate(const KpzExponents& e);

// dh = 1/2 Delta h + lambda |grad h|^2 + xi - c, h(0) = h0.
// The enhancement is built from lambda xi (see kpz_enhancement) and the
// solver works with H = lambda h, which carries the coupling-one expansion
//   H = X + X12 + 2 X122 + v.
struct KpzProblem {
  KpzEnhancement enhancement;
  FourierField h0;
  double T = 0;  // requested horizon, <= enhancement grid horizon; 0 means the full grid
  KpzExponents exponents;
  double lambda = 1.0;
  double tol = 1e-9;
  int max_iter = 200;
};

// Enhancement of lambda xi with a = 4 lambda^2 c12, b = 64 lambda^4 c124.
KpzEnhancement kpz_enhancement(const FourierField& xi, const TimeGrid& grid, const KpzConstants& k);

struct KpzNorms {
  double v1 = 0, v2 = 0, v3 = 0;  // ||v||_1, ||v'||_2, ||v#||_3
};

struct KpzSolution {
  SpaceTimeField v, vprime, vsharp;
  SpaceTimeField h;  // (X + X12 + 2 X122 + v) / lambda
  double T_star = 0;
  int halvings = 0;
  std::vector<int> iterations;  // Picard sweeps per node
  double max_node_residual = 0;
  double final_residual = 0;  // one full application of the fixed-point map
  KpzNorms norms;
};

KpzSolution solve_kpz_rough(const KpzProblem& p);
KpzNorms kpz_norms(const SpaceTimeField& v, const SpaceTimeField& vprime, const SpaceTimeField& vsharp,
                   const KpzExponents& e);

struct PamOptions {
  int substeps = 1;       // splitting steps per grid interval
  int max_halvings = 12;  // positivity step control
};
// dv = 1/2 Delta v + (xi - b) v, v(0) = v0, by Strang splitting: half heat
// step, multiplication by exp(dt (xi - b)) on the 3/2-rule grid, half heat
// step. A step producing a nonpositive grid value is redone with half the size.
SpaceTimeField solve_pam(const FourierField& xi, double b, const TimeGrid& grid, const FourierField& v0,
                         const PamOptions& opt = {});

// h = log v pointwise on the collocation grid.
FourierField log_field(const FourierField& v);
SpaceTimeField global_extend_2d(const SpaceTimeField& v);

struct ColeHopfReport {
  double sup_error = 0;            // sup_t ||e^h - v||_inf
  std::vector<double> per_node;
};
ColeHopfReport cole_hopf_check(const SpaceTimeField& h, const SpaceTimeField& v);

struct ColeHopfStudy {
  std::vector<int> M;
  std::vector<double> errors;
  std::vector<double> slopes;  // log2(e_i / e_{i+1})
};
// Solve KPZ (lambda = 1/2) and PAM on the same xi with b = c for every grid
// size in `Ms` and record the Cole-Hopf defect at the common horizon T.
ColeHopfStudy cole_hopf_refinement(const FourierField& xi, const KpzConstants& k, double T,
                                   const std::vector<int>& Ms, const FourierField& h0);

struct McEstimate {
  double value = 0, se = 0;
  int n = 0;
};
struct FeynmanKacOptions {
  int paths = 10000;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  const FourierField* v0 = nullptr;  // initial condition, 1 when null
};
// v(t, x) = E_x[exp(int_0^t (xi(B_s) - c) ds) v0(B_t)] with Euler Brownian
// paths and trapezoid quadrature, one RNG stream per path.
std::vector<McEstimate> feynman_kac_mc(const FourierField& xi, double c, double t,
                                       const std::vector<std::array<double, 3>>& xs,
                                       const FeynmanKacOptions& opt);

}  // namespace paralab
