#include "paralab/kpz.hpp"

#include <algorithm>
#include <cmath>

#include "paralab/besov.hpp"
#include "paralab/bony.hpp"
#include "paralab/errors.hpp"
#include "paralab/evaluate.hpp"
#include "paralab/fft.hpp"
#include "paralab/heat.hpp"
#include "paralab/parallel.hpp"
#include "paralab/rng.hpp"

namespace paralab {

void validate(const KpzExponents& e) {
  auto fail = [](const char* w) { throw InvalidArgument(std::string("KPZ exponents: ") + w); };
  if (!(0.4 < e.alpha && e.alpha < e.varrho && e.varrho < 0.5)) fail("need 2/5 < alpha < varrho < 1/2");
  if (!(e.beta > 0 && e.beta < 3 * e.alpha - 1)) fail("need beta in (0, 3 alpha - 1)");
  if (!(e.gamma > 2 * e.alpha && e.gamma < e.alpha + 0.5)) fail("need gamma in (2 alpha, alpha + 1/2)");
  if (!(e.delta > 2 * e.alpha - 0.5 && e.delta < e.alpha)) fail("need delta in (2 alpha - 1/2, alpha)");
}

KpzEnhancement kpz_enhancement(const FourierField& xi, const TimeGrid& grid, const KpzConstants& k) {
  FourierField eta = xi;
  eta *= k.lambda;
  KpzEnhancement e = build_kpz_enhancement(eta, grid, k.a, k.b);
  e.c12 = k.c12;
  e.c124 = k.c124;
  e.lambda = k.lambda;
  return e;
}

namespace {

double coef_diff(const FourierField& a, const FourierField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

// Node data of the enhancement used by the right-hand side.
struct KpzNode {
  std::vector<Decomposed> dX, Q, dQ;  // d_i X; Q^j; d_i Q^j at i*d+j
  std::vector<Decomposed> dX12;       // full only
  std::vector<Decomposed> W;          // sum_i QgradX_ij - d_i Q^j o d_i X
  bool has_W = false;
  FourierField X122x2;                // 2 X122
  FourierField gradX122x4;            // 4 grad X122
  FourierField trees;                 // 4 X1222 + X124
};

KpzNode make_node(const KpzEnhancement& e, int m) {
  const auto& lat = e.lattice();
  const int d = lat.d;
  KpzNode n;
  for (int i = 0; i < d; ++i) n.dX.emplace_back(partial(e.X[m], i), true);
  for (int j = 0; j < d; ++j) n.Q.emplace_back(e.Q[m].component(j), true);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) n.dQ.emplace_back(partial(e.Q[m].component(j), i), true);
  for (int i = 0; i < d; ++i) n.dX12.emplace_back(partial(e.X12[m], i), false);
  ProductAccumulator acc(lat);
  for (int j = 0; j < d; ++j) {
    acc.clear();
    for (int i = 0; i < d; ++i) acc.add_resonant(n.dQ[i * d + j], n.dX[i], -1.0);
    FourierField w = acc.finish();
    for (int i = 0; i < d; ++i) w += e.QgradX[m].component(i * d + j);
    if (w.max_abs() > 0) n.has_W = true;
    n.W.emplace_back(w, false);
  }
  n.X122x2 = 2.0 * e.X122[m];
  n.gradX122x4 = 4.0 * gradient(e.X122[m]);
  n.trees = 4.0 * e.X1222[m];
  n.trees += e.X124[m];
  return n;
}

// v# = v - sum_j v'^j < Q^j
FourierField kpz_sharp(const Lattice& lat, const FourierField& v, const std::vector<Decomposed>& vp,
                       const KpzNode& n) {
  ProductAccumulator acc(lat);
  for (std::size_t j = 0; j < vp.size(); ++j) acc.add_para_lt(vp[j], n.Q[j]);
  FourierField s = v;
  s -= acc.finish();
  return s;
}

// F = 2 grad v . grad X + 2 grad X12 . grad(2 X122 + v) + |grad(2 X122 + v)|^2,
// with the resonant part of grad v . grad X reconstructed from (v', v#).
FourierField kpz_rhs(const Lattice& lat, const FourierField& v, const FourierField& vprime, const KpzNode& n) {
  const int d = lat.d;
  std::vector<Decomposed> vp;
  for (int j = 0; j < d; ++j) vp.emplace_back(vprime.component(j), true);
  const FourierField sharp = kpz_sharp(lat, v, vp, n);
  ProductAccumulator acc(lat), inner(lat);
  for (int i = 0; i < d; ++i) {
    acc.add_paras(Decomposed(partial(v, i), true), n.dX[i], 2.0);
    // d_i v recomposed from the ansatz; the resonant product is linear in its
    // first slot, so commutator and sharp contributions share one pass
    inner.clear();
    for (int j = 0; j < d; ++j) {
      inner.add_para_lt(Decomposed(partial(vprime.component(j), i), true), n.Q[j]);
      inner.add_para_lt(vp[j], n.dQ[i * d + j]);
    }
    FourierField A = inner.finish();
    A += partial(sharp, i);
    acc.add_resonant(Decomposed(A, true), n.dX[i], 2.0);
  }
  if (n.has_W)
    for (int j = 0; j < d; ++j) acc.add_product(Decomposed(vprime.component(j), false), n.W[j], 2.0);
  FourierField Y = n.X122x2;
  Y += v;
  for (int i = 0; i < d; ++i) {
    Decomposed dY(partial(Y, i), false);
    acc.add_product(n.dX12[i], dY, 2.0);
    acc.add_product(dY, dY, 1.0);
  }
  return acc.finish();
}

}  // namespace

KpzSolution solve_kpz_rough(const KpzProblem& p) {
  const auto& e = p.enhancement;
  if (e.X.frames.empty()) throw InvalidArgument("solve_kpz_rough: missing enhancement");
  const auto& g = e.grid();
  const auto& lat = e.lattice();
  validate_dyadic(lat);
  validate(p.exponents);
  if (!(p.lambda > 0)) throw InvalidArgument("solve_kpz_rough: coupling must be positive");
  for (const auto* c : {&e.X12, &e.X122, &e.X1222, &e.X124, &e.Q, &e.QgradX})
    if (c->frames.empty() || !(c->grid == g)) throw InvalidArgument("solve_kpz_rough: incomplete enhancement");
  if (p.h0.empty()) throw InvalidArgument("solve_kpz_rough: missing initial condition");
  require_same_lattice(p.h0, e.X[0], "solve_kpz_rough");
  const double Treq = p.T > 0 ? p.T : g.T;
  if (Treq > g.T * (1 + 1e-12)) throw InvalidArgument("solve_kpz_rough: horizon beyond the enhancement grid");
  int Mw = std::min(g.M, int(std::floor(Treq / g.dt() + 1e-9)));
  if (Mw < 1) throw InvalidArgument("solve_kpz_rough: horizon shorter than one step");

  const int d = lat.d;
  const auto etd = etd_stepper(lat, g.dt());
  KpzSolution s;
  std::vector<KpzNode> nodes(g.nodes());
  std::vector<FourierField> v(g.nodes()), vp(g.nodes()), Z(g.nodes()), F(g.nodes());

  nodes[0] = make_node(e, 0);
  Z[0] = p.h0;
  Z[0] *= p.lambda;
  v[0] = Z[0];
  v[0] += nodes[0].trees;
  vp[0] = 2.0 * gradient(v[0]);
  vp[0] += nodes[0].gradX122x4;
  F[0] = kpz_rhs(lat, v[0], vp[0], nodes[0]);
  s.iterations.push_back(0);

  int done = 0;  // last accepted node
  while (done < Mw) {
    const int m = done + 1;
    nodes[m] = make_node(e, m);
    const KpzNode& n = nodes[m];
    // predictor: F frozen at the previous node
    FourierField Zm(lat);
    etd->forward(Z[m - 1], F[m - 1], F[m - 1], Zm);
    FourierField vm = Zm + n.trees;
    FourierField vpm = 2.0 * gradient(vm);
    vpm += n.gradX122x4;
    bool ok = false;
    int it = 0;
    double res = 0;
    for (; it < p.max_iter; ++it) {
      FourierField Fm = kpz_rhs(lat, vm, vpm, n);
      etd->forward(Z[m - 1], F[m - 1], Fm, Zm);
      FourierField vnew = Zm + n.trees;
      FourierField vpnew = 2.0 * gradient(vm);
      vpnew += n.gradX122x4;
      const double scale = std::max(vnew.max_abs(), 1e-300);
      res = std::max(coef_diff(vnew, vm) / scale, coef_diff(vpnew, vpm) / std::max(vpnew.max_abs(), 1e-300));
      vm = std::move(vnew);
      vpm = std::move(vpnew);
      if (!std::isfinite(res)) break;
      if (res <= p.tol) {
        ok = true;
        ++it;
        break;
      }
    }
    if (!ok) {
      // shrink the window to the largest halving that ends before this node
      int w = Mw;
      while (w >= m) {
        w /= 2;
        ++s.halvings;
      }
      if (w < 1)
        throw NumericalFailure("solve_kpz_rough: no convergence at the first step (residual " + std::to_string(res) +
                               ")");
      Mw = w;
      if (done >= Mw) break;
      continue;
    }
    Z[m] = Zm;
    v[m] = vm;
    vp[m] = 2.0 * gradient(vm);  // the fixed point has v' = 2 grad v + 4 grad X122
    vp[m] += n.gradX122x4;
    F[m] = kpz_rhs(lat, v[m], vp[m], n);
    s.iterations.push_back(it);
    s.max_node_residual = std::max(s.max_node_residual, res);
    done = m;
  }
  Mw = std::min(Mw, done);

  // one full application of the map over the accepted window
  {
    std::vector<FourierField> Fall(Mw + 1);
    parallel_for(Mw + 1, [&](int m) { Fall[m] = kpz_rhs(lat, v[m], vp[m], nodes[m]); });
    FourierField Zc = Z[0];
    double r = 0, scale = 0;
    for (int m = 1; m <= Mw; ++m) {
      FourierField next(lat);
      etd->forward(Zc, Fall[m - 1], Fall[m], next);
      Zc = next;
      FourierField vc = Zc + nodes[m].trees;
      r = std::max(r, coef_diff(vc, v[m]));
      scale = std::max(scale, v[m].max_abs());
    }
    s.final_residual = scale > 0 ? r / scale : r;
  }

  const TimeGrid wg{g.t(Mw), Mw};
  s.T_star = wg.T;
  s.v = SpaceTimeField(wg, lat, 1);
  s.vprime = SpaceTimeField(wg, lat, d);
  s.vsharp = SpaceTimeField(wg, lat, 1);
  s.h = SpaceTimeField(wg, lat, 1);
  for (int m = 0; m <= Mw; ++m) {
    s.v[m] = v[m];
    s.vprime[m] = vp[m];
    std::vector<Decomposed> dvp;
    for (int j = 0; j < d; ++j) dvp.emplace_back(vp[m].component(j), true);
    s.vsharp[m] = kpz_sharp(lat, v[m], dvp, nodes[m]);
    FourierField H = e.X[m];
    H += e.X12[m];
    H += 2.0 * e.X122[m];
    H += v[m];
    H *= 1.0 / p.lambda;
    s.h[m] = H;
  }
  s.norms = kpz_norms(s.v, s.vprime, s.vsharp, p.exponents);
  return s;
}

KpzNorms kpz_norms(const SpaceTimeField& v, const SpaceTimeField& vprime, const SpaceTimeField& vsharp,
                   const KpzExponents& e) {
  const auto& g = v.grid;
  KpzNorms r;
  const int nodes = g.nodes();
  std::vector<double> a(nodes), b(nodes), c(nodes);
  std::vector<std::vector<std::vector<double>>> grad(nodes);
  parallel_for(nodes, [&](int m) {
    const double t = g.t(m);
    a[m] = std::pow(t, e.alpha / 2) * holder_norm(v[m], 3 * e.alpha);
    b[m] = std::pow(t, e.gamma / 2) * holder_norm(vprime[m], 3 * e.alpha - 1);
    c[m] = std::pow(t, (e.beta + 1) / 2) * holder_norm(vsharp[m], e.alpha + e.beta + 1);
    const FourierField gv = gradient(v[m]);
    for (int i = 0; i < gv.comps(); ++i) grad[m].push_back(grid_values(gv, i));
  });
  double timepart = 0;
  for (int s = 1; s < nodes; ++s)
    for (int t = s + 1; t < nodes; ++t) {
      double sup = 0;
      for (std::size_t x = 0; x < grad[s][0].size(); ++x) {
        double q = 0;
        for (std::size_t i = 0; i < grad[s].size(); ++i) {
          const double dd = grad[t][i][x] - grad[s][i][x];
          q += dd * dd;
        }
        sup = std::max(sup, q);
      }
      const double ts = g.t(s), tt = g.t(t);
      timepart = std::max(timepart, std::pow(ts, (1 + e.delta - e.alpha) / 2) * std::sqrt(sup) /
                                        std::pow(tt - ts, e.delta / 2));
    }
  r.v1 = *std::max_element(a.begin(), a.end()) + timepart;
  r.v2 = *std::max_element(b.begin(), b.end());
  r.v3 = *std::max_element(c.begin(), c.end());
  return r;
}

namespace {

// One Strang step of size dt: half heat, multiply by exp(dt pot), half heat.
// Returns false when a nonpositive grid value appears.
bool pam_step(const Lattice& lat, const std::vector<double>& half, const std::vector<cplx>& pot_padded, double dt,
              FourierField& v, std::vector<cplx>& pad, std::vector<cplx>& phys) {
  const int m = fft::dealias_size(lat.n);
  auto c = v.comp(0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= half[i];
  fft::pad(lat, c.data(), m, pad.data());
  fft::inverse(lat.d, m, pad.data(), phys.data());
  for (std::size_t i = 0; i < phys.size(); ++i) phys[i] *= std::exp(dt * pot_padded[i].real());
  fft::forward(lat.d, m, phys.data(), pad.data());
  fft::truncate(m, lat, pad.data(), c.data());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= half[i];
  for (double x : grid_values(v))
    if (!(x > 0)) return false;
  return true;
}

}  // namespace

SpaceTimeField solve_pam(const FourierField& xi, double b, const TimeGrid& grid, const FourierField& v0,
                         const PamOptions& opt) {
  validate(grid);
  const auto& lat = xi.lattice();
  validate(lat);
  require_same_lattice(xi, v0, "solve_pam");
  if (opt.substeps < 1) throw InvalidArgument("solve_pam: substeps must be >= 1");
  for (double x : grid_values(v0))
    if (!(x > 0)) throw InvalidArgument("solve_pam: initial condition must be positive");
  const int m = fft::dealias_size(lat.n);
  Lattice big{lat.d, m};
  std::vector<cplx> pot(big.size()), pad(big.size()), phys(big.size());
  {
    FourierField shifted = xi;
    shifted.at(0, 0) -= b;
    fft::pad(lat, shifted.comp(0).data(), m, pad.data());
    fft::inverse(lat.d, m, pad.data(), pot.data());
  }
  auto tb = tables(lat);
  auto half_factors = [&](double dt) {
    std::vector<double> h(lat.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::exp(-0.25 * dt * tb->k2[i]);
    return h;
  };

  SpaceTimeField out(grid, lat, 1);
  out[0] = v0;
  FourierField v = v0;
  for (int n = 0; n < grid.M; ++n) {
    int k = opt.substeps, halvings = 0;
    for (;;) {
      const double dt = grid.dt() / k;
      const auto half = half_factors(dt);
      FourierField trial = v;
      bool ok = true;
      for (int s = 0; s < k && ok; ++s) ok = pam_step(lat, half, pot, dt, trial, pad, phys);
      if (ok) {
        v = std::move(trial);
        break;
      }
      if (++halvings > opt.max_halvings)
        throw NumericalFailure("solve_pam: nonpositive solution at t = " + std::to_string(grid.t(n + 1)) +
                               " after step halving");
      k *= 2;
    }
    out[n + 1] = v;
  }
  return out;
}

FourierField log_field(const FourierField& v) {
  std::vector<double> vals = grid_values(v);
  for (double& x : vals) {
    if (!(x > 0)) throw InvalidArgument("log_field: nonpositive value (PAM step failure upstream)");
    x = std::log(x);
  }
  return dft_forward_real(v.lattice(), vals);
}

SpaceTimeField global_extend_2d(const SpaceTimeField& v) {
  SpaceTimeField h(v.grid, v.lattice(), 1);
  for (int m = 0; m <= v.grid.M; ++m) h[m] = log_field(v[m]);
  return h;
}

ColeHopfReport cole_hopf_check(const SpaceTimeField& h, const SpaceTimeField& v) {
  if (!(h.grid == v.grid)) throw LatticeMismatch("cole_hopf_check: different time grids");
  require_same_lattice(h[0], v[0], "cole_hopf_check");
  ColeHopfReport r;
  for (int m = 0; m <= h.grid.M; ++m) {
    const auto a = grid_values(h[m]), b = grid_values(v[m]);
    double e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(std::exp(a[i]) - b[i]));
    r.per_node.push_back(e);
    r.sup_error = std::max(r.sup_error, e);
  }
  return r;
}

ColeHopfStudy cole_hopf_refinement(const FourierField& xi, const KpzConstants& k, double T,
                                   const std::vector<int>& Ms, const FourierField& h0) {
  if (std::abs(k.lambda - 0.5) > 1e-15) throw InvalidArgument("cole_hopf_refinement: needs lambda = 1/2");
  ColeHopfStudy st;
  std::vector<double> v0vals = grid_values(h0);
  for (double& x : v0vals) x = std::exp(x);
  const FourierField v0 = dft_forward_real(h0.lattice(), v0vals);
  for (int M : Ms) {
    TimeGrid g{T, M};
    KpzProblem p;
    p.enhancement = kpz_enhancement(xi, g, k);
    p.h0 = h0;
    p.lambda = k.lambda;
    auto sol = solve_kpz_rough(p);
    if (sol.T_star < T * (1 - 1e-12))
      throw NumericalFailure("cole_hopf_refinement: KPZ window shorter than the requested horizon");
    auto v = solve_pam(xi, k.c, g, v0);
    st.M.push_back(M);
    st.errors.push_back(cole_hopf_check(sol.h, v).sup_error);
  }
  for (std::size_t i = 0; i + 1 < st.errors.size(); ++i) {
    const double ratio = double(st.M[i + 1]) / st.M[i];
    st.slopes.push_back(std::log(st.errors[i] / st.errors[i + 1]) / std::log(ratio));
  }
  return st;
}

std::vector<McEstimate> feynman_kac_mc(const FourierField& xi, double c, double t,
                                       const std::vector<std::array<double, 3>>& xs,
                                       const FeynmanKacOptions& opt) {
  const auto& lat = xi.lattice();
  if (opt.paths < 2) throw InvalidArgument("feynman_kac_mc: need at least two paths");
  if (!(t >= 0) || !(opt.dt > 0)) throw InvalidArgument("feynman_kac_mc: bad time parameters");
  const int d = lat.d;
  const int steps = std::max(1, int(std::lround(t / opt.dt)));
  const double h = t / steps, sq = std::sqrt(h);
  const PointEvaluator pot(xi);
  PointEvaluator init;
  if (opt.v0) init = PointEvaluator(*opt.v0);
  const int nx = int(xs.size());
  std::vector<double> vals(std::size_t(opt.paths) * nx);
  parallel_for(opt.paths, [&](int p) {
    auto eng = make_stream(opt.seed, "feynman-kac", std::uint64_t(p));
    std::normal_distribution<double> N01;
    for (int ix = 0; ix < nx; ++ix) {
      double x[3] = {xs[ix][0], xs[ix][1], xs[ix][2]};
      double integral = 0, prev = pot(x);
      for (int s = 0; s < steps; ++s) {
        for (int a = 0; a < d; ++a) x[a] += sq * N01(eng);
        const double cur = pot(x);
        integral += 0.5 * h * (prev + cur);
        prev = cur;
      }
      double w = std::exp(integral - c * t);
      if (opt.v0) w *= init(x);
      vals[std::size_t(p) * nx + ix] = w;
    }
  });
  std::vector<McEstimate> out(nx);
  for (int ix = 0; ix < nx; ++ix) {
    double s = 0, s2 = 0;
    for (int p = 0; p < opt.paths; ++p) {
      const double w = vals[std::size_t(p) * nx + ix];
      s += w;
      s2 += w * w;
    }
    const double n = opt.paths, mean = s / n;
    out[ix] = {mean, std::sqrt(std::max(0.0, s2 / n - mean * mean) / (n - 1)), opt.paths};
  }
  return out;
}

}  // namespace paralab
