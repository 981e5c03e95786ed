#pragma once

#include <array>
#include <vector>

#include "paralab/field.hpp"

namespace paralab {

// Point evaluation of a real scalar field at arbitrary torus positions.
//   Direct:    sum over the nonzero coefficients, exact
//   Tabulated: values on a grid refined by `refine` per axis, cubic
//              convolution (Keys, a = -1/2) with periodic wrap
// Auto picks Direct for N <= 32.
class PointEvaluator {
 public:
  enum class Mode { Auto, Direct, Tabulated };

  PointEvaluator() = default;
  explicit PointEvaluator(const FourierField& f, Mode mode = Mode::Auto, int refine = 4, int comp = 0);

  Mode mode() const { return mode_; }
  int dim() const { return d_; }
  double operator()(const double* x) const;

 private:
  double direct(const double* x) const;
  double tabulated(const double* x) const;

  Mode mode_ = Mode::Direct;
  int d_ = 1;
  std::vector<std::array<int, 3>> k_;
  std::vector<cplx> c_;
  double mean_ = 0.0;
  int g_ = 0;  // tabulation grid size per axis
  std::vector<double> tab_;
};

// Multilinear interpolation of grid values (collocation grid of size g per
// axis, row-major, axis 0 slowest) at a torus position.
double multilinear(const std::vector<double>& vals, int d, int g, const double* x);

// Values of a scalar field on a grid refined by r per axis.
std::vector<double> refined_grid_values(const FourierField& f, int r, int comp = 0);

}  // namespace paralab
