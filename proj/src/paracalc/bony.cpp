#include "paralab/bony.hpp"

#include <algorithm>

#include "paralab/errors.hpp"
#include "paralab/fft.hpp"
#include "paralab/partition.hpp"

namespace paralab {
namespace {

std::size_t grid_size(int d, int m) {
  std::size_t s = 1;
  for (int a = 0; a < d; ++a) s *= m;
  return s;
}

void require_scalar(const FourierField& f, const char* where) {
  if (f.comps() != 1) throw InvalidArgument(std::string(where) + ": expects scalar fields");
}

void require_pair(const Decomposed& f, const Decomposed& g) {
  if (f.lattice() != g.lattice()) throw LatticeMismatch("bilinear term: lattices differ");
}

void require_blocks(const Decomposed& f) {
  if (!f.has_blocks()) throw InvalidArgument("paraproduct needs a block decomposition");
}

}  // namespace

Decomposed::Decomposed(const FourierField& scalar, bool with_blocks) : lat_(scalar.lattice()) {
  require_scalar(scalar, "Decomposed");
  m_ = fft::dealias_size(lat_.n);
  const std::size_t s = grid_size(lat_.d, m_);
  std::vector<cplx> padded(s);
  full_.resize(s);
  auto src = scalar.comp(0);
  fft::pad(lat_, src.data(), m_, padded.data());
  fft::inverse(lat_.d, m_, padded.data(), full_.data());
  if (!with_blocks) return;

  auto part = build_partition(lat_);
  blocks_.resize(part->nblocks());
  std::vector<cplx> tmp(lat_.size());
  for (int j = -1; j <= part->jmax; ++j) {
    std::fill(tmp.begin(), tmp.end(), cplx(0.0));
    const auto& mult = part->block(j);
    bool any = false;
    for (std::size_t i : part->support(j)) {
      tmp[i] = mult[i] * src[i];
      any = any || tmp[i] != cplx(0.0);
    }
    if (!any) continue;
    fft::pad(lat_, tmp.data(), m_, padded.data());
    auto& b = blocks_[j + 1];
    b.resize(s);
    fft::inverse(lat_.d, m_, padded.data(), b.data());
  }
}

ProductAccumulator::ProductAccumulator(const Lattice& lat)
    : lat_(lat), m_(fft::dealias_size(lat.n)), acc_(grid_size(lat.d, m_)), tmp_(acc_.size()) {}

void ProductAccumulator::clear() { std::fill(acc_.begin(), acc_.end(), cplx(0.0)); }

void ProductAccumulator::add_product(const Decomposed& f, const Decomposed& g, double w) {
  require_pair(f, g);
  const auto& a = f.full();
  const auto& b = g.full();
  for (std::size_t i = 0; i < acc_.size(); ++i) acc_[i] += w * a[i] * b[i];
}

void ProductAccumulator::add_para_lt(const Decomposed& f, const Decomposed& g, double w) {
  require_pair(f, g);
  require_blocks(f);
  require_blocks(g);
  // running low-frequency sum S = sum_{i <= j-2} Delta_i f
  std::fill(tmp_.begin(), tmp_.end(), cplx(0.0));
  bool s_nonzero = false;
  for (int j = 1; j <= g.jmax(); ++j) {
    const auto& fb = f.block(j - 2);
    if (!fb.empty()) {
      for (std::size_t i = 0; i < tmp_.size(); ++i) tmp_[i] += fb[i];
      s_nonzero = true;
    }
    const auto& gb = g.block(j);
    if (!s_nonzero || gb.empty()) continue;
    for (std::size_t i = 0; i < acc_.size(); ++i) acc_[i] += w * tmp_[i] * gb[i];
  }
}

void ProductAccumulator::add_paras(const Decomposed& f, const Decomposed& g, double w) {
  add_para_lt(f, g, w);
  add_para_lt(g, f, w);
}

void ProductAccumulator::add_resonant(const Decomposed& f, const Decomposed& g, double w) {
  require_pair(f, g);
  require_blocks(f);
  require_blocks(g);
  const int jmax = f.jmax();
  for (int i = -1; i <= jmax; ++i) {
    const auto& fb = f.block(i);
    if (fb.empty()) continue;
    bool any = false;
    for (int j = std::max(-1, i - 1); j <= std::min(jmax, i + 1); ++j) {
      const auto& gb = g.block(j);
      if (gb.empty()) continue;
      if (!any) std::copy(gb.begin(), gb.end(), tmp_.begin());
      else
        for (std::size_t k = 0; k < tmp_.size(); ++k) tmp_[k] += gb[k];
      any = true;
    }
    if (!any) continue;
    for (std::size_t k = 0; k < acc_.size(); ++k) acc_[k] += w * fb[k] * tmp_[k];
  }
}

FourierField ProductAccumulator::finish() const {
  std::vector<cplx> coef(acc_.size());
  fft::forward(lat_.d, m_, acc_.data(), coef.data());
  FourierField out(lat_);
  fft::truncate(m_, lat_, coef.data(), out.comp(0).data());
  return out;
}

FourierField para_lt(const FourierField& f, const FourierField& g) {
  require_same_lattice(f, g, "para_lt");
  ProductAccumulator acc(f.lattice());
  acc.add_para_lt(Decomposed(f, true), Decomposed(g, true));
  return acc.finish();
}

FourierField para_gt(const FourierField& f, const FourierField& g) { return para_lt(g, f); }

FourierField resonant(const FourierField& f, const FourierField& g) {
  require_same_lattice(f, g, "resonant");
  ProductAccumulator acc(f.lattice());
  acc.add_resonant(Decomposed(f, true), Decomposed(g, true));
  return acc.finish();
}

FourierField product(const FourierField& f, const FourierField& g) {
  require_same_lattice(f, g, "product");
  ProductAccumulator acc(f.lattice());
  acc.add_product(Decomposed(f, false), Decomposed(g, false));
  return acc.finish();
}

BonyParts bony(const FourierField& f, const FourierField& g) {
  require_same_lattice(f, g, "bony");
  Decomposed df(f, true), dg(g, true);
  ProductAccumulator a(f.lattice()), b(f.lattice()), c(f.lattice());
  a.add_para_lt(df, dg);
  b.add_resonant(df, dg);
  c.add_para_lt(dg, df);
  return {a.finish(), b.finish(), c.finish()};
}

FourierField commutator_R(const FourierField& f, const FourierField& g, const FourierField& h) {
  require_same_lattice(f, g, "commutator_R");
  require_same_lattice(f, h, "commutator_R");
  Decomposed dh(h, true);
  ProductAccumulator acc(f.lattice());
  acc.add_resonant(Decomposed(para_lt(f, g), true), dh);
  acc.add_product(Decomposed(f, false), Decomposed(resonant(g, h), false), -1.0);
  return acc.finish();
}

}  // namespace paralab
