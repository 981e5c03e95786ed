#include "paralab/enhancement.hpp"

#include <cmath>

#include "paralab/bony.hpp"
#include "paralab/errors.hpp"
#include "paralab/heat.hpp"

namespace paralab {
namespace {

// sum_a d_a A . d_a B per node, as a scalar space-time field.
SpaceTimeField grad_dot(const SpaceTimeField& A, const SpaceTimeField& B) {
  if (!(A.grid == B.grid)) throw InvalidArgument("tree builder: predecessors on different grids");
  require_same_lattice(A[0], B[0], "tree builder");
  const auto& lat = A.lattice();
  SpaceTimeField out(A.grid, lat, 1);
  ProductAccumulator acc(lat);
  for (int m = 0; m <= A.grid.M; ++m) {
    acc.clear();
    for (int a = 0; a < lat.d; ++a) {
      Decomposed da(partial(A[m], a), false);
      if (&A == &B) acc.add_product(da, da);
      else acc.add_product(da, Decomposed(partial(B[m], a), false));
    }
    out[m] = acc.finish();
  }
  return out;
}

void subtract_linear(SpaceTimeField& u, double c) {
  if (c == 0.0) return;
  for (int m = 0; m <= u.grid.M; ++m) u[m].at(0, 0) -= c * u.grid.t(m);
}

void require_scalar(const SpaceTimeField& u, const char* what) {
  if (u.frames.empty()) throw InvalidArgument(std::string("missing predecessor: ") + what);
  if (u.comps() != 1) throw InvalidArgument(std::string(what) + " must be scalar");
}

}  // namespace

SpaceTimeField build_X(const FourierField& xi, const TimeGrid& grid) {
  SpaceTimeField X(grid, xi.lattice(), 1);
  auto tb = tables(xi.lattice());
  auto src = xi.comp(0);
  for (int m = 0; m <= grid.M; ++m) {
    const double t = grid.t(m);
    auto dst = X[m].comp(0);
    for (std::size_t i = 0; i < src.size(); ++i) {
      const double k2 = tb->k2[i];
      const double f = k2 == 0 ? t : -2.0 * std::expm1(-0.5 * k2 * t) / k2;
      dst[i] = f * src[i];
    }
  }
  return X;
}

SpaceTimeField build_X(const SpaceTimeField& eta) { return duhamel_forward_all(eta); }

SpaceTimeField build_tree12(const SpaceTimeField& X, double c) {
  require_scalar(X, "X");
  auto out = duhamel_forward_all(grad_dot(X, X));
  subtract_linear(out, c);
  return out;
}

SpaceTimeField build_tree122(const SpaceTimeField& X12, const SpaceTimeField& X) {
  require_scalar(X12, "X12");
  require_scalar(X, "X");
  return duhamel_forward_all(grad_dot(X12, X));
}

SpaceTimeField build_tree1222(const SpaceTimeField& X122, const SpaceTimeField& X) {
  require_scalar(X122, "X122");
  require_scalar(X, "X");
  return duhamel_forward_all(grad_dot(X122, X));
}

SpaceTimeField build_tree124(const SpaceTimeField& X12, double c) {
  require_scalar(X12, "X12");
  auto out = duhamel_forward_all(grad_dot(X12, X12));
  subtract_linear(out, c);
  return out;
}

SpaceTimeField build_Q(const SpaceTimeField& X) {
  require_scalar(X, "X");
  return duhamel_forward_all(gradient(X));
}

SpaceTimeField build_QgradX(const SpaceTimeField& Q, const SpaceTimeField& X) {
  require_scalar(X, "X");
  const auto& lat = X.lattice();
  const int d = lat.d;
  if (Q.frames.empty() || Q.comps() != d) throw InvalidArgument("QgradX: Q must be a d-vector field");
  SpaceTimeField out(X.grid, lat, d * d);
  ProductAccumulator acc(lat);
  for (int m = 0; m <= X.grid.M; ++m) {
    for (int i = 0; i < d; ++i) {
      Decomposed dx(partial(X[m], i), true);
      for (int j = 0; j < d; ++j) {
        acc.clear();
        acc.add_resonant(Decomposed(partial(Q[m].component(j), i), true), dx);
        out[m].set_component(i * d + j, acc.finish());
      }
    }
  }
  return out;
}

KpzEnhancement build_kpz_enhancement(const SpaceTimeField& eta, double a, double b) {
  KpzEnhancement e;
  e.a = a;
  e.b = b;
  e.X = build_X(eta);
  e.X12 = build_tree12(e.X, a);
  e.X122 = build_tree122(e.X12, e.X);
  e.X1222 = build_tree1222(e.X122, e.X);
  e.X124 = build_tree124(e.X12, b);
  e.Q = build_Q(e.X);
  e.QgradX = build_QgradX(e.Q, e.X);
  return e;
}

KpzEnhancement build_kpz_enhancement(const FourierField& xi, const TimeGrid& grid, double a, double b) {
  KpzEnhancement e;
  e.a = a;
  e.b = b;
  e.X = build_X(xi, grid);
  e.X12 = build_tree12(e.X, a);
  e.X122 = build_tree122(e.X12, e.X);
  e.X1222 = build_tree1222(e.X122, e.X);
  e.X124 = build_tree124(e.X12, b);
  e.Q = build_Q(e.X);
  e.QgradX = build_QgradX(e.Q, e.X);
  return e;
}

KpzEnhancement zero_enhancement(const Lattice& lat, const TimeGrid& grid) {
  KpzEnhancement e;
  SpaceTimeField z(grid, lat, 1);
  e.X = e.X12 = e.X122 = e.X1222 = e.X124 = z;
  e.Q = SpaceTimeField(grid, lat, lat.d);
  e.QgradX = SpaceTimeField(grid, lat, lat.d * lat.d);
  return e;
}

GeneratorLift lift_generator(const SpaceTimeField& V) {
  const auto& lat = V.lattice();
  const int d = lat.d;
  if (V.comps() != d) throw InvalidArgument("lift_generator: V must be a d-vector field");
  GeneratorLift L{V, SpaceTimeField(V.grid, lat, d * d)};
  const SpaceTimeField JV = duhamel_backward_all(V);
  ProductAccumulator acc(lat);
  for (int m = 0; m <= V.grid.M; ++m) {
    std::vector<Decomposed> vj;
    for (int j = 0; j < d; ++j) vj.emplace_back(V[m].component(j), true);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        acc.clear();
        acc.add_resonant(Decomposed(partial(JV[m].component(i), j), true), vj[j]);
        L.V2[m].set_component(i * d + j, acc.finish());
      }
  }
  return L;
}

GeneratorLift zero_lift(const Lattice& lat, const TimeGrid& grid) {
  return {SpaceTimeField(grid, lat, lat.d), SpaceTimeField(grid, lat, lat.d * lat.d)};
}

}  // namespace paralab
