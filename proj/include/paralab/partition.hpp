#pragma once

#include <memory>
#include <vector>

#include "paralab/field.hpp"

namespace paralab {

// Smooth radial cutoff: 1 on [0, 3/4], 0 on [4/3, inf), C^inf in between.
double lp_theta(double r);
inline double lp_chi(double r) { return lp_theta(r); }
// rho(r) = theta(r/2) - theta(r), supported in [3/4, 8/3].
inline double lp_rho(double r) { return lp_theta(0.5 * r) - lp_theta(r); }

// Sampled Littlewood-Paley multipliers. Blocks run j = -1..jmax; block -1 is
// chi, blocks 0..jmax-1 are rho(2^{-j} k) and the top block jmax collects the
// remainder 1 - theta(2^{-jmax} |k|) so the partition is exact on the lattice.
struct DyadicPartition {
  Lattice lat;
  int jmax = 0;
  std::vector<double> chi;
  std::vector<std::vector<double>> rho;  // rho[j], j = 0..jmax

  int nblocks() const { return jmax + 2; }
  const std::vector<double>& block(int j) const { return j < 0 ? chi : rho[j]; }
  // Index range of lattice modes with nonzero multiplier for block j.
  const std::vector<std::size_t>& support(int j) const { return support_[j + 1]; }

  std::vector<std::vector<std::size_t>> support_;
};

// Cached; throws InvalidArgument for odd N or N < 8.
std::shared_ptr<const DyadicPartition> build_partition(const Lattice& lat);

FourierField lp_block(const FourierField& u, int j);
// S_j u = sum_{i <= j} Delta_i u.
FourierField lp_low(const FourierField& u, int j);

}  // namespace paralab
