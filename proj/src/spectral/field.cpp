#include "paralab/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paralab/errors.hpp"
#include "paralab/fft.hpp"

namespace paralab {

FourierField::FourierField(const Lattice& lat, int comps) : lat_(lat), comps_(comps) {
  validate(lat);
  if (comps < 1) throw InvalidArgument("field needs at least one component");
  data_.assign(std::size_t(comps) * lat.size(), cplx(0.0));
}

std::span<cplx> FourierField::comp(int c) {
  return {data_.data() + std::size_t(c) * modes(), modes()};
}

std::span<const cplx> FourierField::comp(int c) const {
  return {data_.data() + std::size_t(c) * modes(), modes()};
}

FourierField FourierField::component(int c) const {
  if (c < 0 || c >= comps_) throw InvalidArgument("component index out of range");
  FourierField out(lat_, 1);
  auto src = comp(c);
  std::copy(src.begin(), src.end(), out.data_.begin());
  return out;
}

void FourierField::set_component(int c, const FourierField& scalar) {
  if (c < 0 || c >= comps_) throw InvalidArgument("component index out of range");
  require_same_lattice(*this, scalar, "set_component");
  auto src = scalar.comp(0);
  std::copy(src.begin(), src.end(), comp(c).begin());
}

void require_same_lattice(const FourierField& a, const FourierField& b, const char* where) {
  if (a.lattice() != b.lattice())
    throw LatticeMismatch(std::string(where) + ": fields live on different lattices");
}

static void require_same_shape(const FourierField& a, const FourierField& b) {
  require_same_lattice(a, b, "field arithmetic");
  if (a.comps() != b.comps()) throw InvalidArgument("field arithmetic: component counts differ");
}

FourierField& FourierField::operator+=(const FourierField& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

FourierField& FourierField::operator*=(double s) {
  for (auto& c : data_) c *= s;
  return *this;
}

FourierField& FourierField::axpy(double s, const FourierField& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
  return *this;
}

double FourierField::max_abs() const {
  double m = 0;
  for (const auto& c : data_) m = std::max(m, std::abs(c));
  return m;
}

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
FourierField operator*(double s, FourierField a) { return a *= s; }

FourierField unit_mode(const Lattice& lat, const Wave& k) {
  FourierField u(lat);
  u.at(0, lat.index(k)) = 1.0;
  return u;
}

FourierField constant_field(const Lattice& lat, double c) {
  FourierField u(lat);
  u.at(0, 0) = c;
  return u;
}

FourierField cosine_mode(const Lattice& lat, const Wave& k, double amplitude) {
  FourierField u(lat);
  Wave mk{-k[0], -k[1], -k[2]};
  u.at(0, lat.index(k)) += amplitude;
  u.at(0, lat.index(mk)) += amplitude;
  return u;
}

FourierField partial(const FourierField& scalar, int axis) {
  const auto& lat = scalar.lattice();
  if (axis < 0 || axis >= lat.d) throw InvalidArgument("partial: axis out of range");
  auto tb = tables(lat);
  FourierField out(lat, scalar.comps());
  for (int c = 0; c < scalar.comps(); ++c) {
    auto src = scalar.comp(c);
    auto dst = out.comp(c);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = cplx(0.0, tb->dk[i][axis]) * src[i];
  }
  return out;
}

FourierField gradient(const FourierField& scalar) {
  const auto& lat = scalar.lattice();
  if (scalar.comps() != 1) throw InvalidArgument("gradient expects a scalar field");
  FourierField out(lat, lat.d);
  auto tb = tables(lat);
  auto src = scalar.comp(0);
  for (int a = 0; a < lat.d; ++a) {
    auto dst = out.comp(a);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = cplx(0.0, tb->dk[i][a]) * src[i];
  }
  return out;
}

FourierField stack(const std::vector<FourierField>& parts) {
  if (parts.empty()) throw InvalidArgument("stack: no parts");
  FourierField out(parts[0].lattice(), int(parts.size()));
  for (std::size_t c = 0; c < parts.size(); ++c) out.set_component(int(c), parts[c]);
  return out;
}

double hermitian_defect(const FourierField& u) {
  auto tb = tables(u.lattice());
  double m = 0;
  for (int c = 0; c < u.comps(); ++c) {
    auto v = u.comp(c);
    for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[tb->neg[i]] - std::conj(v[i])));
  }
  return m;
}

void symmetrize(FourierField& u) {
  auto tb = tables(u.lattice());
  for (int c = 0; c < u.comps(); ++c) {
    auto v = u.comp(c);
    std::vector<cplx> w(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (w[i] + std::conj(w[tb->neg[i]]));
  }
}

std::vector<cplx> dft_inverse(const FourierField& u, int comp) {
  const auto& lat = u.lattice();
  std::vector<cplx> out(lat.size());
  fft::inverse(lat.d, lat.n, u.comp(comp).data(), out.data());
  return out;
}

std::vector<double> grid_values(const FourierField& u, int comp) {
  auto z = dft_inverse(u, comp);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

FourierField dft_forward(const Lattice& lat, std::span<const cplx> values) {
  if (values.size() != lat.size()) throw InvalidArgument("dft_forward: grid size mismatch");
  FourierField u(lat);
  fft::forward(lat.d, lat.n, values.data(), u.comp(0).data());
  return u;
}

FourierField dft_forward_real(const Lattice& lat, std::span<const double> values) {
  std::vector<cplx> z(values.begin(), values.end());
  return dft_forward(lat, z);
}

double sup_norm(const FourierField& u) {
  const auto& lat = u.lattice();
  std::vector<double> acc(lat.size(), 0.0);
  for (int c = 0; c < u.comps(); ++c) {
    auto z = dft_inverse(u, c);
    for (std::size_t i = 0; i < z.size(); ++i) acc[i] += std::norm(z[i]);
  }
  double m = 0;
  for (double a : acc) m = std::max(m, a);
  return std::sqrt(m);
}

}  // namespace paralab
