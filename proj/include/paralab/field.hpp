#pragma once

#include <span>
#include <vector>

#include "paralab/lattice.hpp"

namespace paralab {

// Fourier coefficients u(x) = sum_k c_k e^{i k.x}, one block of lattice.size()
// coefficients per component.
class FourierField {
 public:
  FourierField() = default;
  explicit FourierField(const Lattice& lat, int comps = 1);

  const Lattice& lattice() const { return lat_; }
  int comps() const { return comps_; }
  std::size_t modes() const { return lat_.size(); }
  bool empty() const { return comps_ == 0; }

  std::span<cplx> comp(int c);
  std::span<const cplx> comp(int c) const;
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }
  cplx& at(int c, std::size_t idx) { return data_[c * modes() + idx]; }
  cplx at(int c, std::size_t idx) const { return data_[c * modes() + idx]; }

  FourierField component(int c) const;
  void set_component(int c, const FourierField& scalar);

  FourierField& operator+=(const FourierField& o);
  FourierField& operator-=(const FourierField& o);
  FourierField& operator*=(double s);
  // this += s * o
  FourierField& axpy(double s, const FourierField& o);

  double max_abs() const;

 private:
  Lattice lat_{};
  int comps_ = 0;
  std::vector<cplx> data_;
};

FourierField operator+(FourierField a, const FourierField& b);
FourierField operator-(FourierField a, const FourierField& b);
FourierField operator*(double s, FourierField a);

void require_same_lattice(const FourierField& a, const FourierField& b, const char* where);

FourierField unit_mode(const Lattice& lat, const Wave& k);
FourierField constant_field(const Lattice& lat, double c);
// e_k + e_{-k} (real cosine mode of amplitude 2).
FourierField cosine_mode(const Lattice& lat, const Wave& k, double amplitude = 1.0);

FourierField partial(const FourierField& scalar, int axis);
FourierField gradient(const FourierField& scalar);
// Stack scalars into a vector field.
FourierField stack(const std::vector<FourierField>& parts);

// max_k |c(-k) - conj c(k)| over all components.
double hermitian_defect(const FourierField& u);
// Project onto the Hermitian subspace: c(k) <- (c(k) + conj c(-k)) / 2.
void symmetrize(FourierField& u);

// Point values on the n^d collocation grid.
std::vector<cplx> dft_inverse(const FourierField& u, int comp = 0);
std::vector<double> grid_values(const FourierField& u, int comp = 0);
FourierField dft_forward(const Lattice& lat, std::span<const cplx> values);
FourierField dft_forward_real(const Lattice& lat, std::span<const double> values);

// sup over the collocation grid of the pointwise Euclidean norm of the components.
double sup_norm(const FourierField& u);

}  // namespace paralab
