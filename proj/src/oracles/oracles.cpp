#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "paralab/bony.hpp"

namespace paralab::oracle {

double c124_direct(const Mollifier& m, double eps, const Lattice& lat) {
  std::vector<Wave> ks;
  std::vector<double> w;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Wave k = lat.wave(i);
    double k2 = 0;
    for (int a = 0; a < lat.d; ++a) k2 += double(k[a]) * k[a];
    if (k2 == 0) continue;
    const double mk = m(eps * std::sqrt(k2));
    if (mk == 0) continue;
    ks.push_back(k);
    w.push_back(mk * mk / (k2 * k2));
  }
  double s = 0;
  for (std::size_t a = 0; a < ks.size(); ++a)
    for (std::size_t b = 0; b < ks.size(); ++b) {
      double dot = 0, q2 = 0;
      for (int c = 0; c < lat.d; ++c) {
        dot += double(ks[a][c]) * ks[b][c];
        const double q = ks[a][c] + ks[b][c];
        q2 += q * q;
      }
      if (q2 == 0) continue;
      s += w[a] * w[b] * dot * dot / q2;
    }
  return 2 * s;
}

namespace {

FourierField lerp(const SpaceTimeField& u, double t) {
  const auto& g = u.grid;
  double x = t / g.dt();
  int m = std::min(int(std::floor(x)), g.M - 1);
  m = std::max(m, 0);
  const double th = x - m;
  FourierField out = u[m];
  out *= (1 - th);
  out.axpy(th, u[m + 1]);
  return out;
}

std::vector<double> decay(const Lattice& lat, double h) {
  std::vector<double> e(lat.size());
  auto tb = tables(lat);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(-0.5 * tb->k2[i] * h);
  return e;
}

FourierField times(const std::vector<double>& e, FourierField u) {
  for (int c = 0; c < u.comps(); ++c) {
    auto v = u.comp(c);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= e[i];
  }
  return u;
}

// Lawson RK4 for w' = -1/2 |k|^2 w + N(s, w)
template <class NL>
FourierField lawson_step(const FourierField& w, double s, double h, const std::vector<double>& E2,
                         const std::vector<double>& E, NL&& N) {
  FourierField a = N(s, w);
  FourierField tmp = w;
  tmp.axpy(h / 2, a);
  FourierField b = N(s + h / 2, times(E2, tmp));
  tmp = times(E2, w);
  tmp.axpy(h / 2, b);
  FourierField c = N(s + h / 2, tmp);
  tmp = times(E, w);
  tmp.axpy(h, times(E2, c));
  FourierField d = N(s + h, tmp);
  FourierField out = times(E, w);
  FourierField inc = times(E, a);
  inc.axpy(2, times(E2, b + c));
  inc += d;
  out.axpy(h / 6, inc);
  return out;
}

}  // namespace

SpaceTimeField generator_ifrk4(const SpaceTimeField& V, const SpaceTimeField& f, const FourierField& uT,
                               int substeps) {
  const auto& g = V.grid;
  const auto& lat = uT.lattice();
  const double h = g.dt() / substeps;
  const auto E = decay(lat, h), E2 = decay(lat, h / 2);
  // reversed time s = T - t: dw/ds = 1/2 Delta w + V(T-s) . grad w - f(T-s)
  auto N = [&](double s, const FourierField& w) {
    const double t = g.T - s;
    FourierField Vt = lerp(V, t);
    FourierField out = lerp(f, t);
    out *= -1;
    for (int j = 0; j < lat.d; ++j) out += product(partial(w, j), Vt.component(j));
    return out;
  };
  SpaceTimeField u(g, lat, 1);
  FourierField w = uT;
  u[g.M] = w;
  for (int m = g.M; m > 0; --m) {
    for (int k = 0; k < substeps; ++k) {
      const double s = g.T - g.t(m) + k * h;
      w = lawson_step(w, s, h, E2, E, N);
    }
    u[m - 1] = w;
  }
  return u;
}

SpaceTimeField kpz_ifrk4(const SpaceTimeField& eta, const FourierField& h0, double lambda, double c,
                         int substeps) {
  const auto& g = eta.grid;
  const auto& lat = h0.lattice();
  const double h = g.dt() / substeps;
  const auto E = decay(lat, h), E2 = decay(lat, h / 2);
  auto N = [&](double t, const FourierField& w) {
    FourierField out = lerp(eta, t);
    out.at(0, 0) -= c;
    for (int j = 0; j < lat.d; ++j) {
      const FourierField dj = partial(w, j);
      out.axpy(lambda, product(dj, dj));
    }
    return out;
  };
  SpaceTimeField out(g, lat, 1);
  FourierField w = h0;
  out[0] = w;
  for (int m = 0; m < g.M; ++m) {
    for (int k = 0; k < substeps; ++k) w = lawson_step(w, g.t(m) + k * h, h, E2, E, N);
    out[m + 1] = w;
  }
  return out;
}

namespace {

// 1/2 Laplacian on the periodic n x n grid, eighth-order central differences.
void half_laplacian(int n, double dx, const std::vector<double>& u, std::vector<double>& out) {
  static const double c[5] = {-205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  const double s = 0.5 / (dx * dx);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 2 * c[0] * u[i * n + j];
      for (int r = 1; r <= 4; ++r) {
        acc += c[r] * (u[((i + r) % n) * n + j] + u[((i - r + n) % n) * n + j]);
        acc += c[r] * (u[i * n + (j + r) % n] + u[i * n + (j - r + n) % n]);
      }
      out[i * n + j] = s * acc;
    }
}

}  // namespace

std::vector<double> pam_fd_cn(const FourierField& xi, double b, const FourierField& v0, double T, int steps) {
  const auto& lat = xi.lattice();
  if (lat.d != 2) throw std::invalid_argument("pam_fd_cn: d = 2 only");
  const int n = lat.n;
  const double dx = 2 * M_PI / n, dt = T / steps;
  const std::size_t s = std::size_t(n) * n;
  std::vector<double> pot = grid_values(xi);
  for (auto& p : pot) p -= b;
  std::vector<double> v = grid_values(v0);
  std::vector<double> Lv(s), rhs(s), r(s), p(s), Ap(s), x(s);
  // A = I - dt/2 (L + pot), symmetric positive definite for small dt
  auto apply_A = [&](const std::vector<double>& in, std::vector<double>& out) {
    half_laplacian(n, dx, in, out);
    for (std::size_t i = 0; i < s; ++i) out[i] = in[i] - 0.5 * dt * (out[i] + pot[i] * in[i]);
  };
  for (int step = 0; step < steps; ++step) {
    half_laplacian(n, dx, v, Lv);
    for (std::size_t i = 0; i < s; ++i) rhs[i] = v[i] + 0.5 * dt * (Lv[i] + pot[i] * v[i]);
    x = v;
    apply_A(x, Ap);
    double rr = 0, bb = 0;
    for (std::size_t i = 0; i < s; ++i) {
      r[i] = rhs[i] - Ap[i];
      p[i] = r[i];
      rr += r[i] * r[i];
      bb += rhs[i] * rhs[i];
    }
    for (int it = 0; it < 1000 && rr > 1e-30 * bb; ++it) {
      apply_A(p, Ap);
      double pAp = 0;
      for (std::size_t i = 0; i < s; ++i) pAp += p[i] * Ap[i];
      const double alpha = rr / pAp;
      double rr2 = 0;
      for (std::size_t i = 0; i < s; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * Ap[i];
        rr2 += r[i] * r[i];
      }
      const double beta = rr2 / rr;
      rr = rr2;
      for (std::size_t i = 0; i < s; ++i) p[i] = r[i] + beta * p[i];
    }
    v = x;
  }
  return v;
}

}  // namespace paralab::oracle
