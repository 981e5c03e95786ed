#include "paralab/polymer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "paralab/errors.hpp"
#include "paralab/kpz.hpp"
#include "paralab/parallel.hpp"
#include "paralab/rng.hpp"

namespace paralab {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void check_path_params(double T, int n, double dt, int& steps) {
  if (!(T > 0) || !(dt > 0)) throw InvalidArgument("path sampler: T and dt must be positive");
  if (n < 1) throw InvalidArgument("path sampler: need at least one path");
  steps = std::max(1, int(std::lround(T / dt)));
  if (std::abs(steps * dt - T) > 1e-9 * T) throw InvalidArgument("path sampler: dt must divide T");
}

PathEnsemble empty_ensemble(int d, int n, int steps, double T, std::uint64_t seed, const char* stream, bool store) {
  PathEnsemble e;
  e.d = d;
  e.n = n;
  e.steps = steps;
  e.T = T;
  e.dt = T / steps;
  e.seed = seed;
  e.stream = stream;
  e.stored_paths = store;
  if (store) e.paths.assign(std::size_t(n) * (steps + 1) * d, 0.0);
  e.endpoints.assign(std::size_t(n) * d, 0.0);
  e.weights.assign(n, 0.0);
  return e;
}

// weights hold log-weights on entry
void finish_weights(PathEnsemble& e) {
  e.log_scale = *std::max_element(e.weights.begin(), e.weights.end());
  if (!std::isfinite(e.log_scale)) throw NumericalFailure("path log-weights are not finite");
  double s = 0, s2 = 0;
  for (double& w : e.weights) {
    w = std::exp(w - e.log_scale);
    s += w;
    s2 += w * w;
  }
  const double mean = s / e.n, scale = std::exp(e.log_scale);
  e.Z = scale * mean;
  e.Z_se = e.n > 1 ? scale * std::sqrt(std::max(0.0, s2 / e.n - mean * mean) / (e.n - 1)) : 0.0;
}

}  // namespace

double wrap_torus(double x) {
  x = std::fmod(x, kTwoPi);
  return x < 0 ? x + kTwoPi : x;
}

std::vector<double> PathEnsemble::normalized_weights() const {
  const double s = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> w(weights);
  for (double& x : w) x /= s;
  return w;
}

double PathEnsemble::ess() const {
  double s = 0, s2 = 0;
  for (double w : weights) {
    s += w;
    s2 += w * w;
  }
  return s2 > 0 ? s * s / s2 : 0.0;
}

PathEnsemble sample_wiener_reweighted(const FourierField& xi, double c, double T, const Point& x0, int n, double dt,
                                      std::uint64_t seed, bool store_paths) {
  int steps = 0;
  check_path_params(T, n, dt, steps);
  const int d = xi.lattice().d;
  PathEnsemble e = empty_ensemble(d, n, steps, T, seed, "wiener", store_paths);
  const PointEvaluator pot(xi);
  const double h = e.dt, sq = std::sqrt(h);
  parallel_for(n, [&](int p) {
    auto eng = make_stream(seed, "wiener", std::uint64_t(p));
    std::normal_distribution<double> N01;
    double x[3] = {x0[0], x0[1], x0[2]};
    double prev = pot(x), integral = 0;
    if (store_paths)
      for (int a = 0; a < d; ++a) e.paths[(std::size_t(p) * (steps + 1)) * d + a] = x[a];
    for (int s = 1; s <= steps; ++s) {
      for (int a = 0; a < d; ++a) x[a] += sq * N01(eng);
      const double cur = pot(x);
      integral += 0.5 * h * (prev + cur);
      prev = cur;
      if (store_paths)
        for (int a = 0; a < d; ++a) e.paths[(std::size_t(p) * (steps + 1) + s) * d + a] = x[a];
    }
    for (int a = 0; a < d; ++a) e.endpoints[std::size_t(p) * d + a] = x[a];
    e.weights[p] = integral - c * T;
  });
  finish_weights(e);
  return e;
}

DriftField::DriftField(const SpaceTimeField& h, int refine, std::string id) : grid_(h.grid), id_(std::move(id)) {
  const auto& lat = h.lattice();
  d_ = lat.d;
  g_ = refine * lat.n;
  tab_.resize(h.grid.nodes());
  parallel_for(h.grid.nodes(), [&](int m) {
    const FourierField gr = gradient(h[m]);
    for (int a = 0; a < d_; ++a) tab_[m].push_back(refined_grid_values(gr, refine, a));
  });
}

DriftField DriftField::constant(const Lattice& lat, const TimeGrid& g, const Point& c) {
  DriftField f;
  f.d_ = lat.d;
  f.g_ = lat.n;
  f.grid_ = g;
  f.id_ = "constant";
  f.tab_.resize(g.nodes());
  for (auto& node : f.tab_)
    for (int a = 0; a < lat.d; ++a) node.emplace_back(lat.size(), c[a]);
  return f;
}

DriftField DriftField::from_vector(const SpaceTimeField& V, int refine, std::string id) {
  const auto& lat = V.lattice();
  if (V.comps() != lat.d) throw InvalidArgument("DriftField: V must be a d-vector field");
  DriftField f;
  f.d_ = lat.d;
  f.g_ = refine * lat.n;
  f.grid_ = V.grid;
  f.id_ = std::move(id);
  f.reversed_ = false;
  f.tab_.resize(V.grid.nodes());
  for (int m = 0; m <= V.grid.M; ++m)
    for (int a = 0; a < lat.d; ++a) f.tab_[m].push_back(refined_grid_values(V[m], refine, a));
  return f;
}

void DriftField::eval(double t, const double* x, double* out) const {
  const double tau = std::clamp(reversed_ ? grid_.T - t : t, 0.0, grid_.T);
  const double u = tau / grid_.dt();
  const int m = std::clamp(int(std::floor(u)), 0, grid_.M - 1);
  const double th = u - m;
  for (int a = 0; a < d_; ++a)
    out[a] = (1 - th) * multilinear(tab_[m][a], d_, g_, x) + th * multilinear(tab_[m + 1][a], d_, g_, x);
}

double DriftField::max_curl(int node) const {
  if (d_ < 2) return 0.0;
  const auto& V1 = tab_[node][0];
  const auto& V2 = tab_[node][1];
  const double h = kTwoPi / g_;
  double worst = 0;
  // first two axes, on the slice x_3 = 0 when d = 3
  const std::size_t row = d_ == 2 ? 1 : g_;
  auto at = [&](const std::vector<double>& v, int i, int j) {
    return v[(std::size_t((i + g_) % g_) * g_ + std::size_t((j + g_) % g_)) * row];
  };
  for (int i = 0; i < g_; ++i)
    for (int j = 0; j < g_; ++j) {
      const double c = (at(V2, i + 1, j) - at(V2, i - 1, j)) / (2 * h) - (at(V1, i, j + 1) - at(V1, i, j - 1)) / (2 * h);
      worst = std::max(worst, std::abs(c));
    }
  return worst;
}

DriftField drift_from_pam(const FourierField& xi, double c, const TimeGrid& grid, int refine) {
  PamOptions o;
  o.substeps = 2;
  auto v = solve_pam(xi, c, grid, constant_field(xi.lattice(), 1.0), o);
  return DriftField(global_extend_2d(v), refine, "pam");
}

PathEnsemble girsanov_drift_sim(const DriftField& drift, double T, const Point& x0, int n, double dt,
                                std::uint64_t seed, bool store_paths) {
  int steps = 0;
  check_path_params(T, n, dt, steps);
  if (std::abs(drift.T() - T) > 1e-12 * T) throw LatticeMismatch("girsanov_drift_sim: drift horizon differs from T");
  const int d = drift.dim();
  PathEnsemble e = empty_ensemble(d, n, steps, T, seed, "girsanov", store_paths);
  e.drift_id = drift.id();
  const double h = e.dt, sq = std::sqrt(h);
  parallel_for(n, [&](int p) {
    auto eng = make_stream(seed, "girsanov", std::uint64_t(p));
    std::normal_distribution<double> N01;
    double x[3] = {x0[0], x0[1], x0[2]}, v[3] = {0, 0, 0};
    if (store_paths)
      for (int a = 0; a < d; ++a) e.paths[(std::size_t(p) * (steps + 1)) * d + a] = x[a];
    for (int s = 0; s < steps; ++s) {
      drift.eval(s * h, x, v);
      for (int a = 0; a < d; ++a) x[a] += v[a] * h + sq * N01(eng);
      if (store_paths)
        for (int a = 0; a < d; ++a) e.paths[(std::size_t(p) * (steps + 1) + s + 1) * d + a] = x[a];
    }
    for (int a = 0; a < d; ++a) e.endpoints[std::size_t(p) * d + a] = x[a];
  });
  finish_weights(e);
  return e;
}

TightnessFit tightness_statistic(const PathEnsemble& e, double p, int max_lag) {
  if (e.n < 2) throw InvalidArgument("tightness_statistic: need at least two paths");
  if (!e.stored_paths) throw InvalidArgument("tightness_statistic: ensemble has no stored paths");
  if (!(p > 0)) throw InvalidArgument("tightness_statistic: p must be positive");
  if (max_lag <= 0) max_lag = std::max(1, e.steps / 4);
  const auto w = e.normalized_weights();
  TightnessFit fit;
  std::vector<double> per(e.n);
  for (int lag = 1; lag <= max_lag; lag *= 2) {
    for (int i = 0; i < e.n; ++i) {
      double acc = 0;
      int cnt = 0;
      for (int s = 0; s + lag <= e.steps; ++s, ++cnt) {
        double q = 0;
        for (int a = 0; a < e.d; ++a) {
          const double dx = e.pos(i, s + lag, a) - e.pos(i, s, a);
          q += dx * dx;
        }
        acc += std::pow(q, p / 2);
      }
      per[i] = acc / cnt;
    }
    double mean = 0;
    for (int i = 0; i < e.n; ++i) mean += w[i] * per[i];
    double var = 0;
    for (int i = 0; i < e.n; ++i) var += w[i] * w[i] * (per[i] - mean) * (per[i] - mean);
    fit.lags.push_back(lag * e.dt);
    fit.moments.push_back(mean);
    fit.stderrs.push_back(std::sqrt(var));
  }
  if (fit.lags.size() < 2) throw InvalidArgument("tightness_statistic: need at least two lags");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = fit.lags.size();
  for (std::size_t i = 0; i < fit.lags.size(); ++i) {
    const double x = std::log(fit.lags[i]), y = std::log(fit.moments[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return fit;
}

MartingaleReport martingale_check(const PathEnsemble& e, const SpaceTimeField& u, const SpaceTimeField& f,
                                  int min_count) {
  if (!e.stored_paths) throw InvalidArgument("martingale_check: ensemble has no stored paths");
  const auto& g = u.grid;
  if (std::abs(g.T - e.T) > 1e-12 * e.T) throw LatticeMismatch("martingale_check: horizon mismatch");
  if (e.steps % g.M != 0) throw LatticeMismatch("martingale_check: path steps must refine the solution grid");
  if (!(f.grid == g)) throw LatticeMismatch("martingale_check: forcing on a different grid");
  if (u.lattice().d != e.d) throw LatticeMismatch("martingale_check: dimension mismatch");
  const int r = e.steps / g.M;
  const bool has_f = max_abs(f) > 0;
  std::vector<PointEvaluator> U, Fv;
  for (int m = 0; m <= g.M; ++m) {
    U.emplace_back(u[m]);
    if (has_f) Fv.emplace_back(f[m]);
  }
  const int stride = std::max(1, g.M / 5);
  std::vector<int> checkpoints;
  for (int m = 0; m <= g.M; m += stride) checkpoints.push_back(m);
  if (checkpoints.back() != g.M) checkpoints.push_back(g.M);
  const int K = int(checkpoints.size());

  // M at each checkpoint and the quadrant bin at each checkpoint, per path
  std::vector<double> Mv(std::size_t(e.n) * K);
  std::vector<int> bins(std::size_t(e.n) * K);
  parallel_for(e.n, [&](int i) {
    double integral = 0;
    double prev = 0;
    double x[3] = {0, 0, 0};
    auto load = [&](int step) {
      for (int a = 0; a < e.d; ++a) x[a] = wrap_torus(e.pos(i, step, a));
    };
    auto fval = [&](int step) {
      if (!has_f) return 0.0;
      const int m = std::min(step / r, g.M - 1);
      const double th = double(step - m * r) / r;
      return (1 - th) * Fv[m](x) + th * Fv[m + 1](x);
    };
    load(0);
    prev = fval(0);
    int k = 0;
    for (int step = 0; step <= e.steps; ++step) {
      if (step > 0) {
        load(step);
        const double cur = fval(step);
        integral += 0.5 * e.dt * (prev + cur);
        prev = cur;
      }
      if (step % r == 0 && k < K && checkpoints[k] == step / r) {
        Mv[std::size_t(i) * K + k] = U[step / r](x) + integral;
        int b = 0;
        for (int a = 0; a < e.d; ++a) b |= (x[a] >= M_PI) << a;
        bins[std::size_t(i) * K + k] = b;
        ++k;
      }
    }
  });

  const auto w = e.normalized_weights();
  MartingaleReport rep;
  const int nb = 1 << e.d;
  for (int a = 0; a < K; ++a)
    for (int b = a + 1; b < K; ++b)
      for (int bin = 0; bin < nb; ++bin) {
        double sw = 0, sm = 0;
        int cnt = 0;
        for (int i = 0; i < e.n; ++i) {
          if (bins[std::size_t(i) * K + a] != bin) continue;
          const double dm = Mv[std::size_t(i) * K + b] - Mv[std::size_t(i) * K + a];
          sw += w[i];
          sm += w[i] * dm;
          ++cnt;
        }
        if (cnt < min_count) continue;
        const double mean = sm / sw;
        double v = 0;
        for (int i = 0; i < e.n; ++i) {
          if (bins[std::size_t(i) * K + a] != bin) continue;
          const double dm = Mv[std::size_t(i) * K + b] - Mv[std::size_t(i) * K + a];
          v += w[i] * w[i] * (dm - mean) * (dm - mean);
        }
        MartingaleRow row;
        row.s = g.t(checkpoints[a]);
        row.t = g.t(checkpoints[b]);
        row.bin = bin;
        row.count = cnt;
        row.mean = mean;
        row.se = std::sqrt(v) / sw;
        row.z = row.se > 0 ? mean / row.se : 0.0;
        rep.max_abs_z = std::max(rep.max_abs_z, std::abs(row.z));
        rep.rows.push_back(row);
      }
  return rep;
}

double kolmogorov_survival(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double s = 0;
  for (int k = 1; k <= 200; ++k) {
    const double term = 2 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    s += term;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

KsResult ks_two_sample(const std::vector<double>& x, const std::vector<double>& wx, const std::vector<double>& y,
                       const std::vector<double>& wy) {
  if (x.size() != wx.size() || y.size() != wy.size()) throw InvalidArgument("ks_two_sample: weight size mismatch");
  if (x.empty() || y.empty()) throw InvalidArgument("ks_two_sample: empty sample");
  struct Item {
    double v, w;
    int side;
  };
  std::vector<Item> all;
  double sx = 0, sy = 0, sx2 = 0, sy2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    all.push_back({x[i], wx[i], 0});
    sx += wx[i];
    sx2 += wx[i] * wx[i];
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    all.push_back({y[i], wy[i], 1});
    sy += wy[i];
    sy2 += wy[i] * wy[i];
  }
  std::sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return a.v < b.v; });
  double Fx = 0, Fy = 0, D = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    (all[i].side == 0 ? Fx : Fy) += all[i].w / (all[i].side == 0 ? sx : sy);
    if (i + 1 < all.size() && all[i + 1].v == all[i].v) continue;
    D = std::max(D, std::abs(Fx - Fy));
  }
  const double nx = sx * sx / sx2, ny = sy * sy / sy2;
  const double ne = nx * ny / (nx + ny);
  const double sq = std::sqrt(ne);
  return {D, kolmogorov_survival((sq + 0.12 + 0.11 / sq) * D), ne};
}

std::vector<KsResult> endpoint_ks(const PathEnsemble& a, const PathEnsemble& b) {
  if (a.d != b.d) throw LatticeMismatch("endpoint_ks: dimension mismatch");
  std::vector<KsResult> out;
  for (int c = 0; c < a.d; ++c) {
    std::vector<double> x(a.n), y(b.n);
    for (int i = 0; i < a.n; ++i) x[i] = wrap_torus(a.endpoint(i, c));
    for (int i = 0; i < b.n; ++i) y[i] = wrap_torus(b.endpoint(i, c));
    out.push_back(ks_two_sample(x, a.weights, y, b.weights));
  }
  return out;
}

WeightedMean endpoint_expectation(const PathEnsemble& e, double (*phi)(const double*, int)) {
  const auto w = e.normalized_weights();
  std::vector<double> v(e.n);
  double mean = 0;
  for (int i = 0; i < e.n; ++i) {
    double x[3] = {0, 0, 0};
    for (int a = 0; a < e.d; ++a) x[a] = wrap_torus(e.endpoint(i, a));
    v[i] = phi(x, e.d);
    mean += w[i] * v[i];
  }
  double var = 0;
  for (int i = 0; i < e.n; ++i) var += w[i] * w[i] * (v[i] - mean) * (v[i] - mean);
  return {mean, std::sqrt(var)};
}

std::vector<SingularityRow> singularity_statistic(const std::vector<int>& Ns, const SingularityOptions& o) {
  if (!(o.delta > 0 && o.delta < 1)) throw InvalidArgument("singularity_statistic: delta must lie in (0, 1)");
  if (Ns.empty()) throw InvalidArgument("singularity_statistic: empty N list");
  Lattice lat{2, o.noise_n};
  for (int N : Ns)
    if (N < 1 || 4 * N > o.noise_n * 2) throw InvalidArgument("singularity_statistic: N too large for the noise lattice");
  const FourierField white = sample_white_noise(o.seed, lat, "singularity-noise").xi;
  const int K = int(Ns.size());
  std::vector<FourierField> xis;
  std::vector<PointEvaluator> ev;
  for (int N : Ns) {
    xis.push_back(mollify(white, o.mollifier, 1.0 / N));
    ev.emplace_back(xis.back(), PointEvaluator::Mode::Tabulated, o.refine);
  }
  int steps = 0;
  check_path_params(o.T, o.paths, o.dt, steps);
  const double h = o.T / steps, sq = std::sqrt(h);
  std::vector<double> I(std::size_t(o.paths) * K);
  parallel_for(o.paths, [&](int p) {
    auto eng = make_stream(o.seed, "singularity-paths", std::uint64_t(p));
    std::normal_distribution<double> N01;
    double x[3] = {o.x0[0], o.x0[1], 0};
    std::vector<double> prev(K), acc(K, 0.0);
    for (int k = 0; k < K; ++k) prev[k] = ev[k](x);
    for (int s = 0; s < steps; ++s) {
      x[0] += sq * N01(eng);
      x[1] += sq * N01(eng);
      for (int k = 0; k < K; ++k) {
        const double cur = ev[k](x);
        acc[k] += 0.5 * h * (prev[k] + cur);
        prev[k] = cur;
      }
    }
    for (int k = 0; k < K; ++k) I[std::size_t(p) * K + k] = acc[k];
  });

  std::vector<SingularityRow> rows;
  const TimeGrid pg{o.T, o.pam_steps};
  const FourierField one = constant_field(lat, 1.0);
  PamOptions popt;
  popt.substeps = 4;
  for (int k = 0; k < K; ++k) {
    SingularityRow r;
    r.N = Ns[k];
    double mx = -1e300;
    for (int p = 0; p < o.paths; ++p) mx = std::max(mx, I[std::size_t(p) * K + k]);
    // A = mean e^{delta a}, B = mean e^{a}, a = I - max; R = A / B^delta
    double A = 0, B = 0, AA = 0, BB = 0, AB = 0, sw = 0, sw2 = 0;
    for (int p = 0; p < o.paths; ++p) {
      const double a = I[std::size_t(p) * K + k] - mx;
      const double ea = std::exp(o.delta * a), eb = std::exp(a);
      A += ea;
      B += eb;
      AA += ea * ea;
      BB += eb * eb;
      AB += ea * eb;
      sw += eb;
      sw2 += eb * eb;
    }
    const double n = o.paths;
    A /= n;
    B /= n;
    const double vA = (AA / n - A * A) / (n - 1), vB = (BB / n - B * B) / (n - 1), cAB = (AB / n - A * B) / (n - 1);
    const double R = A / std::pow(B, o.delta);
    const double gA = 1 / std::pow(B, o.delta), gB = -o.delta * A / std::pow(B, o.delta + 1);
    r.estimate = R;
    r.se = std::sqrt(std::max(0.0, gA * gA * vA + gB * gB * vB + 2 * gA * gB * cAB));
    r.ess = sw * sw / sw2 / n;

    r.c12 = renorm_c12(o.mollifier, 1.0 / r.N, lat);
    r.c124 = renorm_c124(o.mollifier, 1.0 / r.N, lat);
    const double c1 = 2 * r.c12 + 8 * r.c124;
    const double cd = o.delta * o.delta * 2 * r.c12 + std::pow(o.delta, 4) * 8 * r.c124;
    FourierField dxi = xis[k];
    dxi *= o.delta;
    const auto v1 = solve_pam(xis[k], c1, pg, one, popt);
    const auto vd = solve_pam(dxi, cd, pg, one, popt);
    const double x0[3] = {o.x0[0], o.x0[1], 0};
    const double h1 = std::log(PointEvaluator(v1[pg.M], PointEvaluator::Mode::Direct)(x0));
    const double hd = std::log(PointEvaluator(vd[pg.M], PointEvaluator::Mode::Direct)(x0));
    r.proxy = std::exp((cd - o.delta * c1) * o.T + hd - o.delta * h1);
    rows.push_back(r);
  }
  return rows;
}

namespace {
constexpr char kEnsMagic[8] = {'P', 'L', 'E', 'N', 'S', 'M', '0', '1'};

template <class T>
void put(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw IoError("ensemble file truncated");
  return v;
}
}  // namespace

void write_ensemble(const std::string& path, const PathEnsemble& e) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write ensemble: " + path);
  nlohmann::json h = {{"d", e.d},         {"n", e.n},         {"steps", e.steps},
                      {"T", e.T},         {"dt", e.dt},       {"seed", e.seed},
                      {"stream", e.stream}, {"drift_id", e.drift_id}, {"paths_stored", e.stored_paths},
                      {"Z", e.Z},         {"Z_se", e.Z_se}, {"log_scale", e.log_scale}};
  const std::string hs = h.dump();
  f.write(kEnsMagic, 8);
  put<std::uint32_t>(f, std::uint32_t(hs.size()));
  f.write(hs.data(), hs.size());
  f.write(reinterpret_cast<const char*>(e.weights.data()), e.weights.size() * sizeof(double));
  f.write(reinterpret_cast<const char*>(e.endpoints.data()), e.endpoints.size() * sizeof(double));
  if (e.stored_paths) f.write(reinterpret_cast<const char*>(e.paths.data()), e.paths.size() * sizeof(double));
  if (!f) throw IoError("failed writing ensemble: " + path);
}

PathEnsemble read_ensemble(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read ensemble: " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kEnsMagic, 8) != 0) throw IoError("not an ensemble file: " + path);
  const auto len = get<std::uint32_t>(f);
  std::string hs(len, '\0');
  f.read(hs.data(), len);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(hs);
  } catch (const std::exception&) {
    throw IoError("corrupt ensemble header: " + path);
  }
  PathEnsemble e;
  e.d = h.at("d");
  e.n = h.at("n");
  e.steps = h.at("steps");
  e.T = h.at("T");
  e.dt = h.at("dt");
  e.seed = h.at("seed");
  e.stream = h.at("stream");
  e.drift_id = h.at("drift_id");
  e.stored_paths = h.at("paths_stored");
  e.Z = h.at("Z");
  e.Z_se = h.at("Z_se");
  e.log_scale = h.at("log_scale");
  e.weights.resize(e.n);
  e.endpoints.resize(std::size_t(e.n) * e.d);
  f.read(reinterpret_cast<char*>(e.weights.data()), e.weights.size() * sizeof(double));
  f.read(reinterpret_cast<char*>(e.endpoints.data()), e.endpoints.size() * sizeof(double));
  if (e.stored_paths) {
    e.paths.resize(std::size_t(e.n) * (e.steps + 1) * e.d);
    f.read(reinterpret_cast<char*>(e.paths.data()), e.paths.size() * sizeof(double));
  }
  if (!f) throw IoError("ensemble file truncated: " + path);
  return e;
}

void write_stats_csv(const std::string& path, const std::vector<StatRow>& rows) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  f.precision(17);
  f << "stat,value,stderr,n\n";
  for (const auto& r : rows) f << r.stat << ',' << r.value << ',' << r.se << ',' << r.n << '\n';
}

}  // namespace paralab
