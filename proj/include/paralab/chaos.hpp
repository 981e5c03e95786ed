#pragma once

#include <string_view>

#include "paralab/noise.hpp"

namespace paralab {

enum class ChaosTerm {
  X,            // E || Delta_q (X_t - X_s) ||^2
  Tree12,       // E || Delta_q (X12_t - X12_s) ||^2, second chaos
  Tree12Mean,   // E [zero mode of X12_t - X12_s] before renormalization
  QgradXMean,   // max_{i,j} | E [ (d_i Q^j o d_i X)(x) ] | at time t
};
ChaosTerm parse_chaos_term(std::string_view tag);

// Exact kernels for the semigroup exp(t Delta / 2):
//   F_t(k) = m(eps k) 2 (1 - e^{-|k|^2 t/2}) / |k|^2
//   F12_t(k; k1, k2) = int_0^t e^{-|k|^2 (t-s)/2} F_s(k1) F_s(k2) ds
double kernel_F(double k2, double mk, double t);
double kernel_F12(double k2, double k1sq, double k2sq, double m1, double m2, double t);
// int_0^t e^{-lambda (t-s)} e^{-mu s} ds
double exp_conv(double lambda, double mu, double t);

// Second moments use the normalized L^2 norm (mean square over the torus).
// Restricted to d = 3 and N <= 16; sums run over the whole mollifier support.
double chaos_variance_oracle(ChaosTerm term, int q, double s, double t, const Mollifier& m, double eps,
                             const Lattice& lat);

}  // namespace paralab
