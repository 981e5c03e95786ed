#pragma once

#include <vector>

#include "paralab/field.hpp"

namespace paralab {

// f < g = sum_j (S_{j-1} f)(Delta_j g) with S_{j-1} = sum_{i < j-1} Delta_i.
FourierField para_lt(const FourierField& f, const FourierField& g);
// f > g = g < f.
FourierField para_gt(const FourierField& f, const FourierField& g);
// f o g = sum_{|i-j| <= 1} Delta_i f Delta_j g.
FourierField resonant(const FourierField& f, const FourierField& g);
// Dealiased product (3/2-rule padding, truncation back onto the lattice).
FourierField product(const FourierField& f, const FourierField& g);
// R(f, g, h) = (f < g) o h - f (g o h).
FourierField commutator_R(const FourierField& f, const FourierField& g, const FourierField& h);

struct BonyParts {
  FourierField lt, res, gt;
};
BonyParts bony(const FourierField& f, const FourierField& g);

// A scalar field held on the padded 3/2-rule grid, optionally split into its
// Littlewood-Paley blocks. Building one costs one inverse FFT per nonzero
// block, after which any number of bilinear terms can be accumulated cheaply.
class Decomposed {
 public:
  Decomposed() = default;
  Decomposed(const FourierField& scalar, bool with_blocks);

  const Lattice& lattice() const { return lat_; }
  int grid() const { return m_; }
  bool has_blocks() const { return !blocks_.empty(); }
  const std::vector<cplx>& full() const { return full_; }
  // Physical values of Delta_j, j = -1..jmax; empty vector when the block vanishes.
  const std::vector<cplx>& block(int j) const { return blocks_[j + 1]; }
  int jmax() const { return int(blocks_.size()) - 2; }

 private:
  Lattice lat_{};
  int m_ = 0;
  std::vector<cplx> full_;
  std::vector<std::vector<cplx>> blocks_;
};

// Sums weighted bilinear terms on the padded grid; finish() transforms once.
class ProductAccumulator {
 public:
  explicit ProductAccumulator(const Lattice& lat);

  void add_product(const Decomposed& f, const Decomposed& g, double w = 1.0);
  void add_para_lt(const Decomposed& f, const Decomposed& g, double w = 1.0);
  void add_resonant(const Decomposed& f, const Decomposed& g, double w = 1.0);
  // Both paraproducts: f < g + f > g.
  void add_paras(const Decomposed& f, const Decomposed& g, double w = 1.0);
  FourierField finish() const;
  void clear();

 private:
  Lattice lat_;
  int m_;
  std::vector<cplx> acc_;
  std::vector<cplx> tmp_;
};

}  // namespace paralab
