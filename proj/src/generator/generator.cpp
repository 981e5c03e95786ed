#include "paralab/generator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "paralab/bony.hpp"
#include "paralab/errors.hpp"
#include "paralab/heat.hpp"
#include "paralab/parallel.hpp"

namespace paralab {

GeneratorExponents default_young_exponents() { return {1.5, 1.5, 0.25, 1.5, -0.2}; }
GeneratorExponents default_rough_exponents() { return {1.36, 1.4, 0.205, 1.42, -0.55}; }

void validate_exponents(Regime regime, const GeneratorExponents& e) {
  auto fail = [](const std::string& what) { throw InvalidArgument("generator exponents: " + what); };
  if (regime == Regime::Young) {
    if (!(e.beta > -0.5 && e.beta < 0)) fail("Young regime needs beta in (-1/2, 0)");
    if (!(1 - e.beta < e.alpha && e.alpha < e.beta + 2)) fail("Young regime needs 1 - beta < alpha < beta + 2");
    return;
  }
  if (!(e.beta > -2.0 / 3 && e.beta < -0.5)) fail("rough regime needs beta in (-2/3, -1/2)");
  if (!(4.0 / 3 < e.alpha && e.alpha < e.theta && e.theta < e.gamma && e.gamma < e.beta + 2))
    fail("rough regime needs 4/3 < alpha < theta < gamma < beta + 2");
  if (!((e.theta - 1) / 2 < e.rho && e.rho < (e.gamma - 1) / 2))
    fail("rough regime needs rho in ((theta-1)/2, (gamma-1)/2)");
}

Forcing Forcing::zero(const TimeGrid& g, const Lattice& lat) { return from_field(SpaceTimeField(g, lat, 1)); }

Forcing Forcing::from_field(SpaceTimeField f) {
  Forcing out;
  out.field = std::move(f);
  return out;
}

Forcing Forcing::drift(int k) {
  if (k < 0) throw InvalidArgument("Forcing::drift: negative component");
  Forcing out;
  out.drift_component = k;
  return out;
}

double IterationLog::max_residual() const {
  double r = 0;
  for (const auto& w : windows)
    if (!w.residuals.empty()) r = std::max(r, w.residuals.back());
  return r;
}

namespace {

const SpaceTimeField& drift_of(const GeneratorProblem& p) { return p.lift ? p.lift->V1 : p.V; }

// f as a scalar space-time field.
SpaceTimeField resolve_forcing(const Forcing& f, const SpaceTimeField& V) {
  if (!f.is_drift()) {
    if (f.field.frames.empty()) return SpaceTimeField(V.grid, V.lattice(), 1);
    if (f.field.comps() != 1) throw InvalidArgument("forcing must be scalar");
    if (!(f.field.grid == V.grid)) throw LatticeMismatch("forcing and drift on different time grids");
    require_same_lattice(f.field[0], V[0], "forcing");
    return f.field;
  }
  if (f.drift_component >= V.comps()) throw InvalidArgument("forcing tag V^k with k out of range");
  return V.component(f.drift_component);
}

void check_problem(const GeneratorProblem& p) {
  const auto& V = drift_of(p);
  if (V.frames.empty()) throw InvalidArgument("generator problem without drift");
  validate(V.grid);
  const auto& lat = V.lattice();
  validate_dyadic(lat);
  if (V.comps() != lat.d) throw InvalidArgument("drift must have d components");
  if (p.uT.empty()) throw InvalidArgument("generator problem without terminal condition");
  require_same_lattice(p.uT, V[0], "terminal condition");
  if (p.uT.comps() != 1) throw InvalidArgument("terminal condition must be scalar");
  if (p.lift) {
    if (!(p.lift->V2.grid == V.grid) || p.lift->V2.comps() != lat.d * lat.d)
      throw InvalidArgument("lift: V2 must be a d*d field on the drift grid");
  }
  if (p.options.max_iter < 1 || !(p.options.tol > 0)) throw InvalidArgument("fixed-point options");
}

double rel_change(const FourierField& a, const FourierField& b) {
  double diff = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) diff = std::max(diff, std::abs(a.data()[i] - b.data()[i]));
  return diff;
}

double young_drift_norm(const SpaceTimeField& V, double beta) {
  double n = 0;
  for (const auto& f : V.frames) n = std::max(n, holder_norm(f, beta));
  return n;
}

int window_nodes(const GeneratorProblem& p, double norm, double kappa) {
  const auto& g = drift_of(p).grid;
  if (p.options.window_nodes > 0) return std::min(p.options.window_nodes, g.M);
  const double Tw = std::min(g.T, 0.5 * std::pow(1.0 + norm, -2.0 / kappa));
  return std::clamp(int(std::floor(Tw / g.dt() + 1e-9)), 1, g.M);
}

std::string failure_message(const char* what, const IterationLog& log, double norm) {
  std::ostringstream os;
  os << what << ": no convergence on the smallest window (halvings " << log.halvings << ", drift norm " << norm
     << ")";
  if (!log.windows.empty()) {
    const auto& w = log.windows.back();
    os << "; window [" << w.m0 << ", " << w.m1 << "] residuals:";
    for (double r : w.residuals) os << ' ' << r;
  }
  return os.str();
}

// Backward windowed Picard driver. `step` runs one Picard sweep over nodes
// [m0, m1) given the state at m1 and returns the relative residual; `reset`
// seeds the window from the terminal node; `commit` accepts the window.
template <class Reset, class Step>
void run_windows(int M, int w0, const FixedPointOptions& opt, IterationLog& log, double norm, const char* what,
                 Reset&& reset, Step&& step) {
  log.initial_window_nodes = w0;
  int w = w0;
  int m1 = M;
  while (m1 > 0) {
    const int m0 = std::max(0, m1 - w);
    WindowLog wl;
    wl.m0 = m0;
    wl.m1 = m1;
    reset(m0, m1);
    for (int it = 0; it < opt.max_iter; ++it) {
      const double r = step(m0, m1);
      wl.residuals.push_back(r);
      if (!std::isfinite(r)) break;
      if (r <= opt.tol) {
        wl.converged = true;
        break;
      }
    }
    log.windows.push_back(wl);
    if (wl.converged) {
      m1 = m0;
      continue;
    }
    if (w == 1) throw NumericalFailure(failure_message(what, log, norm));
    w = std::max(1, w / 2);
    ++log.halvings;
  }
}

// Per-node data of the rough reconstruction that does not depend on (u, u').
struct RoughNode {
  std::vector<Decomposed> V, JV, dJV;  // V^j, J(V^i), d_j J(V^i) at index i*d+j
  std::vector<Decomposed> W;           // sum_j V2^{ij} - J(d_j V^i) o V^j
  bool has_W = false;
  FourierField Hsum;                   // sum_j H^j
  FourierField Jf;
};

struct RoughContext {
  Lattice lat;
  SpaceTimeField JV, Jf;
  const GeneratorLift* lift = nullptr;
  Forcing f;
  SpaceTimeField fscalar;

  RoughNode node(int m) const {
    const int d = lat.d;
    RoughNode n;
    ProductAccumulator acc(lat);
    const auto& V = lift->V1[m];
    for (int j = 0; j < d; ++j) n.V.emplace_back(V.component(j), true);
    for (int i = 0; i < d; ++i) n.JV.emplace_back(JV[m].component(i), true);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) n.dJV.emplace_back(partial(JV[m].component(i), j), true);
    const auto& V2 = lift->V2[m];
    for (int i = 0; i < d; ++i) {
      acc.clear();
      for (int j = 0; j < d; ++j) acc.add_resonant(n.dJV[i * d + j], n.V[j], -1.0);
      FourierField w = acc.finish();
      for (int j = 0; j < d; ++j) w += V2.component(i * d + j);
      if (w.max_abs() > 0) n.has_W = true;
      n.W.emplace_back(w, false);
    }
    if (f.is_drift()) {
      n.Hsum = FourierField(lat);
      for (int j = 0; j < d; ++j) n.Hsum += V2.component(f.drift_component * d + j);
    } else {
      acc.clear();
      for (int j = 0; j < d; ++j) acc.add_resonant(Decomposed(partial(Jf[m], j), true), n.V[j]);
      n.Hsum = acc.finish();
    }
    n.Jf = Jf[m];
    return n;
  }
};

RoughContext make_context(const GeneratorLift& L, const Forcing& f) {
  RoughContext c;
  c.lat = L.V1.lattice();
  c.lift = &L;
  c.f = f;
  c.fscalar = resolve_forcing(f, L.V1);
  c.JV = duhamel_backward_all(L.V1);
  c.Jf = f.is_drift() ? c.JV.component(f.drift_component) : duhamel_backward_all(c.fscalar);
  return c;
}

// u' < J(V), summed over i
FourierField para_sum(const Lattice& lat, const std::vector<Decomposed>& up, const RoughNode& n) {
  ProductAccumulator acc(lat);
  for (std::size_t i = 0; i < up.size(); ++i) acc.add_para_lt(up[i], n.JV[i]);
  return acc.finish();
}

// Adds the reconstructed resonant term of grad u . V to acc.
void add_reconstruction(ProductAccumulator& acc, const Lattice& lat, const FourierField& uprime,
                        const std::vector<Decomposed>& up, const FourierField& usharp, const RoughNode& n) {
  const int d = lat.d;
  ProductAccumulator inner(lat);
  for (int j = 0; j < d; ++j) {
    // U#^j + sum_i u'^i < d_j J(V^i); the resonant product is linear in its
    // first slot, so the commutator's leading term and U#^j o V^j share one pass.
    inner.clear();
    for (int i = 0; i < d; ++i) {
      inner.add_para_lt(up[i], n.dJV[i * d + j]);
      inner.add_para_lt(Decomposed(partial(uprime.component(i), j), true), n.JV[i]);
    }
    FourierField B = inner.finish();
    B += partial(usharp, j);
    acc.add_resonant(Decomposed(B, true), n.V[j]);
  }
  if (n.has_W)
    for (int i = 0; i < d; ++i) acc.add_product(Decomposed(uprime.component(i), false), n.W[i]);
}

}  // namespace

SpaceTimeField solve_young(const GeneratorProblem& p, IterationLog* log_out) {
  check_problem(p);
  if (p.regime == Regime::Young) validate_exponents(Regime::Young, p.exponents);
  const auto& V = drift_of(p);
  const auto& g = V.grid;
  const auto& lat = V.lattice();
  const int d = lat.d;
  const SpaceTimeField F = resolve_forcing(p.f, V);
  const auto etd = etd_stepper(lat, g.dt());

  SpaceTimeField u(g, lat, 1);
  u[g.M] = p.uT;
  std::vector<FourierField> rhs(g.nodes());
  auto eval_rhs = [&](int m) {
    ProductAccumulator acc(lat);
    for (int j = 0; j < d; ++j)
      acc.add_product(Decomposed(partial(u[m], j), false), Decomposed(V[m].component(j), false));
    rhs[m] = acc.finish();
    rhs[m] += F[m];
  };

  const double norm = young_drift_norm(V, p.exponents.beta);
  const double kappa = (p.exponents.beta + 2 - p.exponents.alpha) / 2;
  IterationLog log;
  run_windows(
      g.M, window_nodes(p, norm, kappa), p.options, log, norm, "solve_young",
      [&](int m0, int m1) {
        for (int m = m1 - 1; m >= m0; --m) {
          u[m] = u[m + 1];
          etd->decay(u[m]);
        }
        eval_rhs(m1);
      },
      [&](int m0, int m1) {
        parallel_for(m1 - m0, [&](int i) { eval_rhs(m0 + i); });
        double diff = 0, scale = 0;
        FourierField next(lat);
        for (int m = m1 - 1; m >= m0; --m) {
          etd->backward(u[m + 1], rhs[m], rhs[m + 1], next);
          diff = std::max(diff, rel_change(next, u[m]));
          scale = std::max(scale, next.max_abs());
          u[m] = next;
        }
        return scale > 0 ? diff / scale : diff;
      });
  if (log_out) *log_out = std::move(log);
  return u;
}

SpaceTimeField sharp_part(const SpaceTimeField& u, const SpaceTimeField& uprime, const SpaceTimeField& V,
                          const Forcing& f) {
  const auto& lat = V.lattice();
  if (!(u.grid == V.grid) || !(uprime.grid == V.grid)) throw LatticeMismatch("sharp_part: grid mismatch");
  const SpaceTimeField JV = duhamel_backward_all(V);
  const SpaceTimeField Jf =
      f.is_drift() ? JV.component(f.drift_component) : duhamel_backward_all(resolve_forcing(f, V));
  SpaceTimeField out(u.grid, lat, 1);
  parallel_for(u.grid.nodes(), [&](int m) {
    ProductAccumulator acc(lat);
    for (int i = 0; i < lat.d; ++i)
      acc.add_para_lt(Decomposed(uprime[m].component(i), true), Decomposed(JV[m].component(i), true));
    out[m] = u[m];
    out[m] -= acc.finish();
    out[m] -= Jf[m];
  });
  return out;
}

SpaceTimeField resonant_reconstruct(const SpaceTimeField& uprime, const SpaceTimeField& usharp,
                                    const GeneratorLift& lift, const Forcing& f) {
  const auto& lat = lift.V1.lattice();
  if (!(uprime.grid == lift.V1.grid) || !(usharp.grid == lift.V1.grid))
    throw LatticeMismatch("resonant_reconstruct: grid mismatch");
  if (uprime.comps() != lat.d) throw InvalidArgument("resonant_reconstruct: u' must have d components");
  if (f.is_drift() && f.drift_component >= lat.d) throw InvalidArgument("inconsistent forcing tag");
  const RoughContext ctx = make_context(lift, f);
  SpaceTimeField out(uprime.grid, lat, 1);
  parallel_for(uprime.grid.nodes(), [&](int m) {
    const RoughNode n = ctx.node(m);
    std::vector<Decomposed> up;
    for (int i = 0; i < lat.d; ++i) up.emplace_back(uprime[m].component(i), true);
    ProductAccumulator acc(lat);
    add_reconstruction(acc, lat, uprime[m], up, usharp[m], n);
    out[m] = acc.finish();
    out[m] += n.Hsum;
  });
  return out;
}

ParacontrolledSolution solve_rough(const GeneratorProblem& p) {
  check_problem(p);
  const auto& V = drift_of(p);
  const auto& g = V.grid;
  const auto& lat = V.lattice();
  const int d = lat.d;
  ParacontrolledSolution s;

  const bool degenerate = max_abs(V) == 0 && (!p.lift || max_abs(p.lift->V2) == 0);
  if (degenerate) {
    s.u = solve_young(p, &s.log);
    s.uprime = gradient(s.u);
    s.usharp = sharp_part(s.u, s.uprime, V, p.f);
    s.norms = norm_report(s, p.exponents, g.T);
    return s;
  }
  if (!p.lift) throw InvalidArgument("solve_rough needs a lift of the drift");
  validate_exponents(Regime::Rough, p.exponents);

  const RoughContext ctx = make_context(*p.lift, p.f);
  const SpaceTimeField& F = ctx.fscalar;
  const auto etd = etd_stepper(lat, g.dt());

  SpaceTimeField& u = s.u;
  SpaceTimeField& up = s.uprime;
  u = SpaceTimeField(g, lat, 1);
  up = SpaceTimeField(g, lat, d);
  u[g.M] = p.uT;
  up[g.M] = gradient(p.uT);

  std::vector<RoughNode> cache(g.nodes());
  std::vector<bool> cached(g.nodes(), false);
  std::vector<FourierField> rhs(g.nodes());
  auto eval_rhs = [&](int m) {
    const RoughNode& n = cache[m];
    std::vector<Decomposed> dup;
    for (int i = 0; i < d; ++i) dup.emplace_back(up[m].component(i), true);
    FourierField sharp = u[m];
    sharp -= para_sum(lat, dup, n);
    sharp -= n.Jf;
    ProductAccumulator acc(lat);
    for (int j = 0; j < d; ++j) acc.add_paras(Decomposed(partial(u[m], j), true), n.V[j]);
    add_reconstruction(acc, lat, up[m], dup, sharp, n);
    rhs[m] = acc.finish();
    rhs[m] += n.Hsum;
    rhs[m] += F[m];
  };
  auto ensure_cache = [&](int m0, int m1) {
    parallel_for(m1 - m0 + 1, [&](int i) {
      const int m = m0 + i;
      if (!cached[m]) cache[m] = ctx.node(m);
    });
    for (int m = m0; m <= m1; ++m) cached[m] = true;
  };

  const double norm = lift_norm(*p.lift, p.exponents.gamma);
  const double kappa = (p.exponents.gamma - p.exponents.theta) / 2;
  run_windows(
      g.M, window_nodes(p, norm, kappa), p.options, s.log, norm, "solve_rough",
      [&](int m0, int m1) {
        ensure_cache(m0, m1);
        for (int m = m1 - 1; m >= m0; --m) {
          u[m] = u[m + 1];
          etd->decay(u[m]);
          up[m] = gradient(u[m]);
        }
        eval_rhs(m1);
        // release nodes that later windows will not revisit
        for (int m = m1 + 1; m < g.nodes(); ++m)
          if (cached[m]) {
            cache[m] = RoughNode{};
            cached[m] = false;
          }
      },
      [&](int m0, int m1) {
        parallel_for(m1 - m0, [&](int i) { eval_rhs(m0 + i); });
        double diff = 0, scale = 0;
        FourierField next(lat);
        for (int m = m1 - 1; m >= m0; --m) {
          etd->backward(u[m + 1], rhs[m], rhs[m + 1], next);
          FourierField grad_old = gradient(u[m]);
          diff = std::max({diff, rel_change(next, u[m]), rel_change(grad_old, up[m])});
          scale = std::max(scale, next.max_abs());
          up[m] = std::move(grad_old);
          u[m] = next;
        }
        return scale > 0 ? diff / scale : diff;
      });

  // at the fixed point u' = grad u; store it exactly
  for (int m = 0; m < g.M; ++m) up[m] = gradient(u[m]);
  s.usharp = sharp_part(u, up, V, p.f);
  s.norms = norm_report(s, p.exponents, g.T);
  return s;
}

double lift_norm(const GeneratorLift& L, double gamma) {
  double a = 0, b = 0;
  for (const auto& f : L.V1.frames) a = std::max(a, holder_norm(f, gamma - 2));
  for (const auto& f : L.V2.frames) b = std::max(b, holder_norm(f, 2 * gamma - 3));
  return a + b;
}

double hoelder_time_sup(const SpaceTimeField& u, double rho) {
  const int nodes = u.grid.nodes();
  const int comps = u.comps();
  std::vector<std::vector<std::vector<double>>> vals(nodes);
  parallel_for(nodes, [&](int m) {
    for (int c = 0; c < comps; ++c) vals[m].push_back(grid_values(u[m], c));
  });
  double best = 0;
  for (int a = 0; a < nodes; ++a)
    for (int b = a + 1; b < nodes; ++b) {
      double sup = 0;
      const std::size_t pts = vals[a][0].size();
      for (std::size_t x = 0; x < pts; ++x) {
        double s2 = 0;
        for (int c = 0; c < comps; ++c) {
          const double dv = vals[b][c][x] - vals[a][c][x];
          s2 += dv * dv;
        }
        sup = std::max(sup, s2);
      }
      best = std::max(best, std::sqrt(sup) / std::pow(u.grid.t(b) - u.grid.t(a), rho));
    }
  return best;
}

NormReport norm_report(const ParacontrolledSolution& s, const GeneratorExponents& e, double T) {
  NormReport r;
  const auto& g = s.u.grid;
  const int nodes = g.nodes();
  std::vector<double> a(nodes), b(nodes), c(nodes, 0.0);
  parallel_for(nodes, [&](int m) {
    a[m] = holder_norm(s.u[m], e.theta);
    b[m] = holder_norm(s.uprime[m], e.alpha - 1);
    // the t = T node carries weight zero
    if (m < g.M) c[m] = std::pow(T - g.t(m), (e.alpha - 1) / 2) * holder_norm(s.usharp[m], 2 * e.alpha - 1);
  });
  r.u_theta = *std::max_element(a.begin(), a.end());
  r.uprime = *std::max_element(b.begin(), b.end());
  r.usharp = *std::max_element(c.begin(), c.end());
  r.grad_u_rho = hoelder_time_sup(gradient(s.u), e.rho);
  return r;
}

}  // namespace paralab
