#pragma once

#include <limits>
#include <vector>

#include "paralab/field.hpp"

namespace paralab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct BesovSpec {
  double alpha = 0.0;
  double p = kInf;
  double q = kInf;
};

void validate(const BesovSpec& s);

// L^p norm w.r.t. the normalized measure on the torus, evaluated on the
// collocation grid; vector fields use the pointwise Euclidean norm.
double lp_norm(const FourierField& u, double p);

// Per-block L^p norms ||Delta_j u||_p for j = -1..jmax.
std::vector<double> block_norms(const FourierField& u, double p);

double besov_norm(const FourierField& u, const BesovSpec& spec);
// Holder-Zygmund norm C^alpha = B^alpha_{inf,inf}.
inline double holder_norm(const FourierField& u, double alpha) {
  return besov_norm(u, {alpha, kInf, kInf});
}

// Combine precomputed block norms.
double besov_from_blocks(const std::vector<double>& blocks, double alpha, double q);

}  // namespace paralab
