#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "paralab/errors.hpp"
#include "paralab/heat.hpp"
#include "paralab/kpz.hpp"
#include "paralab/polymer.hpp"
#include "paralab/rng.hpp"

using namespace paralab;

namespace {

FourierField smooth_xi(const Lattice& lat) {
  return cosine_mode(lat, {1, 0, 0}, 0.6) + cosine_mode(lat, {1, 1, 0}, -0.4);
}

double mean_endpoint(const PathEnsemble& e, int a, double* se) {
  double s = 0, s2 = 0;
  for (int i = 0; i < e.n; ++i) {
    const double x = e.endpoint(i, a);
    s += x;
    s2 += x * x;
  }
  const double m = s / e.n;
  *se = std::sqrt((s2 / e.n - m * m) / (e.n - 1));
  return m;
}

}  // namespace

TEST_SUITE("polymer") {
  TEST_CASE("zero potential gives unit weights") {
    Lattice lat{2, 8};
    auto e = sample_wiener_reweighted(FourierField(lat), 0.0, 0.1, {1, 1, 0}, 200, 0.01, 3);
    CHECK(e.Z == doctest::Approx(1.0));
    CHECK(e.Z_se == doctest::Approx(0.0));
    CHECK(e.ess() == doctest::Approx(200.0));
    double s = 0;
    for (double w : e.normalized_weights()) s += w;
    CHECK(s == doctest::Approx(1.0));
  }

  TEST_CASE("flat potential weights are exact") {
    Lattice lat{2, 8};
    auto e = sample_wiener_reweighted(constant_field(lat, 1.5), 0.5, 0.2, {0, 0, 0}, 50, 0.01, 1);
    for (double w : e.weights) CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.Z == doctest::Approx(std::exp(0.2)).epsilon(1e-12));
    CHECK(e.Z_se < 1e-12);
  }

  TEST_CASE("partition function matches the parabolic solution") {
    Lattice lat{2, 16};
    const auto xi = smooth_xi(lat);
    const double T = 0.5, c = 0.3;
    const Point x0{0.7, 2.1, 0};
    auto e = sample_wiener_reweighted(xi, c, T, x0, 8000, 0.005, 11, false);
    PamOptions o;
    o.substeps = 4;
    auto v = solve_pam(xi, c, TimeGrid{T, 100}, constant_field(lat, 1.0), o);
    const double ref = PointEvaluator(v[100])(x0.data());
    CHECK(std::abs(e.Z - ref) < 4 * e.Z_se + 2e-3);
  }

  TEST_CASE("constant drift shifts the mean") {
    Lattice lat{2, 8};
    const TimeGrid g{1.0, 4};
    auto drift = DriftField::constant(lat, g, {0.8, -0.5, 0});
    auto e = girsanov_drift_sim(drift, 1.0, {1, 1, 0}, 4000, 0.01, 5, false);
    double se0 = 0, se1 = 0;
    const double m0 = mean_endpoint(e, 0, &se0), m1 = mean_endpoint(e, 1, &se1);
    CHECK(std::abs(m0 - 1.8) < 4 * se0);
    CHECK(std::abs(m1 - 0.5) < 4 * se1);
  }

  TEST_CASE("zero drift agrees with Brownian motion in law") {
    Lattice lat{2, 8};
    auto drift = DriftField::constant(lat, TimeGrid{0.5, 4}, {0, 0, 0});
    auto a = girsanov_drift_sim(drift, 0.5, {1, 2, 0}, 3000, 0.01, 7, false);
    auto b = sample_wiener_reweighted(FourierField(lat), 0.0, 0.5, {1, 2, 0}, 3000, 0.01, 8, false);
    for (const auto& r : endpoint_ks(a, b)) CHECK(r.p > 1e-3);
  }

  TEST_CASE("flat potential gives zero Girsanov drift") {
    Lattice lat{2, 8};
    auto drift = drift_from_pam(constant_field(lat, 2.0), 1.0, TimeGrid{0.2, 10});
    double v[3];
    const double x[3] = {1.0, 2.0, 0.0};
    drift.eval(0.05, x, v);
    CHECK(std::abs(v[0]) < 1e-10);
    CHECK(std::abs(v[1]) < 1e-10);
  }

  TEST_CASE("PAM drift is a gradient") {
    Lattice lat{2, 16};
    auto drift = drift_from_pam(smooth_xi(lat), 0.0, TimeGrid{0.3, 10}, 2);
    CHECK(drift.max_curl(10) < 1e-2);
  }

  TEST_CASE("Brownian increments scale diffusively") {
    Lattice lat{2, 8};
    auto e = sample_wiener_reweighted(FourierField(lat), 0.0, 1.0, {0, 0, 0}, 500, 0.01, 21);
    auto fit = tightness_statistic(e, 4.0);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.05));
    auto one = sample_wiener_reweighted(FourierField(lat), 0.0, 1.0, {0, 0, 0}, 1, 0.01, 21);
    CHECK_THROWS_AS(tightness_statistic(one, 4.0), InvalidArgument);
  }

  TEST_CASE("heat semigroup along Brownian paths is a martingale") {
    Lattice lat{2, 16};
    const double T = 0.5;
    TimeGrid g{T, 10};
    const auto phi = cosine_mode(lat, {1, 0, 0}, 1.0) + cosine_mode(lat, {1, 2, 0}, 0.5);
    SpaceTimeField u(g, lat, 1), f(g, lat, 1);
    for (int m = 0; m <= g.M; ++m) u[m] = heat_flow(phi, T - g.t(m));
    auto e = sample_wiener_reweighted(FourierField(lat), 0.0, T, {1, 1, 0}, 4000, 0.005, 4);
    auto rep = martingale_check(e, u, f);
    CHECK(!rep.rows.empty());
    CHECK(rep.max_abs_z < 4.5);
    // a non-martingale is caught
    for (int m = 0; m <= g.M; ++m) u[m] = phi;
    CHECK(martingale_check(e, u, f).max_abs_z > 6);
  }

  TEST_CASE("KS distinguishes shifted samples") {
    std::vector<double> x, y, z, w(2000, 1.0);
    auto eng = make_stream(1, "ks");
    std::normal_distribution<double> N01;
    for (int i = 0; i < 2000; ++i) {
      x.push_back(N01(eng));
      y.push_back(N01(eng));
      z.push_back(N01(eng) + 0.3);
    }
    CHECK(ks_two_sample(x, w, y, w).p > 1e-3);
    CHECK(ks_two_sample(x, w, z, w).p < 1e-6);
    CHECK(kolmogorov_survival(0.0) == 1.0);
    CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.049).epsilon(0.02));
  }

  TEST_CASE("large log-weights stay finite") {
    Lattice lat{2, 8};
    auto e = sample_wiener_reweighted(smooth_xi(lat), 400.0, 2.0, {0, 0, 0}, 100, 0.01, 2, false);
    CHECK(e.log_scale < -700);
    CHECK(e.ess() > 1.0);
    CHECK(e.Z >= 0.0);
  }

  TEST_CASE("sampling is deterministic per seed") {
    Lattice lat{2, 8};
    const auto xi = smooth_xi(lat);
    auto a = sample_wiener_reweighted(xi, 0.0, 0.1, {1, 1, 0}, 50, 0.01, 9);
    auto b = sample_wiener_reweighted(xi, 0.0, 0.1, {1, 1, 0}, 50, 0.01, 9);
    auto c = sample_wiener_reweighted(xi, 0.0, 0.1, {1, 1, 0}, 50, 0.01, 10);
    CHECK(a.paths == b.paths);
    CHECK(a.weights == b.weights);
    CHECK(a.paths != c.paths);
  }

  TEST_CASE("ensemble round trip") {
    Lattice lat{2, 8};
    auto a = sample_wiener_reweighted(smooth_xi(lat), 0.1, 0.1, {1, 1, 0}, 20, 0.01, 9);
    const std::string path = "paralab_test_ensemble.bin";
    write_ensemble(path, a);
    auto b = read_ensemble(path);
    std::remove(path.c_str());
    CHECK(b.n == a.n);
    CHECK(b.steps == a.steps);
    CHECK(b.paths == a.paths);
    CHECK(b.weights == a.weights);
    CHECK(b.endpoints == a.endpoints);
    CHECK(b.Z == a.Z);
    CHECK_THROWS_AS(read_ensemble("no_such_ensemble.bin"), IoError);
  }

  TEST_CASE("singularity statistic agrees with its PAM proxy") {
    SingularityOptions o;
    o.noise_n = 32;
    o.T = 0.02;
    o.dt = 0.02 / 100;
    o.paths = 3000;
    o.pam_steps = 20;
    o.refine = 4;
    o.seed = 2;
    auto rows = singularity_statistic({4, 8}, o);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
      CHECK(r.estimate <= 1.0 + 3 * r.se);
      CHECK(std::abs(r.estimate - r.proxy) < 4 * r.se + 5e-3);
      CHECK(r.ess > 0.05);
    }
  }
}
