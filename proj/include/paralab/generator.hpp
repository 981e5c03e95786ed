#pragma once

#include <optional>
#include <string>
#include <vector>

#include "paralab/enhancement.hpp"

namespace paralab {

struct GeneratorExponents {
  double alpha = 1.5, theta = 1.5, rho = 0.25, gamma = 1.5, beta = -0.2;
};
enum class Regime { Young, Rough };

GeneratorExponents default_young_exponents();
GeneratorExponents default_rough_exponents();
// Throws InvalidArgument when the exponent chain of the regime is violated.
void validate_exponents(Regime regime, const GeneratorExponents& e);

// Right-hand side f: either a scalar space-time field or the drift component V^k.
struct Forcing {
  SpaceTimeField field;
  int drift_component = -1;  // 0-based k for f = V^k

  static Forcing zero(const TimeGrid& g, const Lattice& lat);
  static Forcing from_field(SpaceTimeField f);
  static Forcing drift(int k);
  bool is_drift() const { return drift_component >= 0; }
};

struct FixedPointOptions {
  double tol = 1e-9;
  int max_iter = 200;
  int window_nodes = 0;  // 0: choose from the a-priori bound
};

struct WindowLog {
  int m0 = 0, m1 = 0;
  bool converged = false;
  std::vector<double> residuals;
};
struct IterationLog {
  std::vector<WindowLog> windows;
  int halvings = 0;
  int initial_window_nodes = 0;
  double max_residual() const;
};

struct GeneratorProblem {
  SpaceTimeField V;                   // vector drift on the solution grid
  std::optional<GeneratorLift> lift;  // rough regime: (V, V2)
  Forcing f;
  FourierField uT;
  GeneratorExponents exponents = default_young_exponents();
  Regime regime = Regime::Young;
  FixedPointOptions options;
};

struct NormReport {
  double u_theta = 0;     // sup_t ||u(t)||_theta
  double grad_u_rho = 0;  // Holder-rho in time of grad u with values in L^inf
  double uprime = 0;      // sup_t ||u'(t)||_{alpha-1}
  double usharp = 0;      // sup_{t<T} (T-t)^{(alpha-1)/2} ||u#(t)||_{2 alpha-1}
};

struct ParacontrolledSolution {
  SpaceTimeField u, uprime, usharp;
  NormReport norms;
  IterationLog log;
};

// Fixed point of Gamma(u) = P_{T-t} u^T + J^T(f + grad u . V), windowed backward.
SpaceTimeField solve_young(const GeneratorProblem& p, IterationLog* log = nullptr);
// Fixed point of M(u, u') = (J^T f + J^T(grad u . V) + P_{T-t} u^T, grad u) with
// grad u . V = grad u < V + grad u > V + resonant_reconstruct.
ParacontrolledSolution solve_rough(const GeneratorProblem& p);

// sum_j H^j + sum u'^i V2^{ij} + sum R(u'^i, J^T(d_j V^i), V^j) + sum U#^j o V^j
SpaceTimeField resonant_reconstruct(const SpaceTimeField& uprime, const SpaceTimeField& usharp,
                                    const GeneratorLift& lift, const Forcing& f);
// u# = u - u' < J^T(V) - J^T(f)
SpaceTimeField sharp_part(const SpaceTimeField& u, const SpaceTimeField& uprime, const SpaceTimeField& V,
                          const Forcing& f);

NormReport norm_report(const ParacontrolledSolution& s, const GeneratorExponents& e, double T);
// ||V||_{C C^{gamma-2}} + ||V2||_{C C^{2 gamma - 3}}
double lift_norm(const GeneratorLift& L, double gamma);
// sup over node pairs of ||u(t) - u(s)||_{L^inf} / |t - s|^rho
double hoelder_time_sup(const SpaceTimeField& u, double rho);

}  // namespace paralab
