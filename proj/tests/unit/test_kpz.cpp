#include <doctest.h>

#include "oracles.hpp"
#include "helpers.hpp"
#include "paralab/errors.hpp"
#include "paralab/heat.hpp"
#include "paralab/bony.hpp"
#include "paralab/evaluate.hpp"
#include "paralab/kpz.hpp"

using namespace paralab;
using paralab::test::max_diff;

namespace {

FourierField smooth_xi(const Lattice& lat) {
  return cosine_mode(lat, {1, 0, 0}, 0.5) + cosine_mode(lat, {1, 2, 0}, 0.3) + cosine_mode(lat, {0, 1, 0}, -0.4);
}

double sup_grid(const FourierField& a, const std::vector<double>& b) {
  auto v = grid_values(a);
  double m = 0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("kpz") {
  TEST_CASE("exponents") {
    CHECK_NOTHROW(validate(KpzExponents{}));
    KpzExponents e;
    e.beta = 0.4;
    CHECK_THROWS_AS(validate(e), InvalidArgument);
  }

  TEST_CASE("zero enhancement and zero data give zero") {
    Lattice lat{2, 16};
    TimeGrid g{0.2, 10};
    KpzProblem p;
    p.enhancement = zero_enhancement(lat, g);
    p.h0 = FourierField(lat);
    auto s = solve_kpz_rough(p);
    CHECK(max_abs(s.v) == 0.0);
    CHECK(max_abs(s.h) == 0.0);
    CHECK(s.T_star == doctest::Approx(0.2));
  }

  TEST_CASE("smooth noise matches the time-stepping oracle") {
    Lattice lat{2, 32};
    TimeGrid g{0.2, 100};
    const FourierField xi = smooth_xi(lat);
    for (double lambda : {1.0, 0.5}) {
      KpzProblem p;
      p.enhancement = kpz_enhancement(xi, g, kpz_constants_from(0, 0, lambda));
      p.h0 = cosine_mode(lat, {1, 1, 0}, 0.2);
      p.lambda = lambda;
      auto s = solve_kpz_rough(p);
      REQUIRE(s.T_star == doctest::Approx(g.T));
      CHECK(s.final_residual < 1e-8);
      auto ref = oracle::kpz_ifrk4(constant_in_time(xi, g), p.h0, lambda, 0.0, 4);
      double err = 0;
      for (int m = 0; m <= g.M; ++m) err = std::max(err, sup_norm(s.h[m] - ref[m]));
      CHECK(err < 1e-5);
      // paracontrolled identities at every node
      for (int m = 0; m <= g.M; ++m) {
        FourierField expect = 2.0 * gradient(s.v[m]) + 4.0 * gradient(p.enhancement.X122[m]);
        CHECK(max_diff(s.vprime[m], expect) < 1e-13);
        FourierField sharp = s.v[m];
        for (int j = 0; j < 2; ++j) sharp -= para_lt(s.vprime[m].component(j), p.enhancement.Q[m].component(j));
        CHECK(max_diff(sharp, s.vsharp[m]) < 1e-12);
      }
      CHECK(std::isfinite(s.norms.v1 + s.norms.v2 + s.norms.v3));
    }
  }

  TEST_CASE("PAM trivial cases") {
    Lattice lat{2, 16};
    TimeGrid g{0.5, 10};
    auto one = constant_field(lat, 1.0);
    auto v = solve_pam(FourierField(lat), 0.0, g, one);
    for (int m = 0; m <= g.M; ++m) CHECK(max_diff(v[m], one) < 1e-15);
    auto w = solve_pam(constant_field(lat, 0.7), 0.0, g, one);
    for (int m = 0; m <= g.M; ++m) CHECK(w[m].at(0, 0).real() == doctest::Approx(std::exp(0.7 * g.t(m))).epsilon(1e-13));
    CHECK_THROWS_AS(solve_pam(FourierField(lat), 0.0, g, FourierField(lat)), InvalidArgument);
  }

  TEST_CASE("PAM matches the finite-difference oracle") {
    Lattice lat{2, 64};
    TimeGrid g{0.5, 200};
    const FourierField xi = smooth_xi(lat);
    auto one = constant_field(lat, 1.0);
    auto v = solve_pam(xi, 0.3, g, one, {4, 12});
    auto ref = oracle::pam_fd_cn(xi, 0.3, one, g.T, 2000);
    CHECK(sup_grid(v[g.M], ref) < 1e-6);
  }

  TEST_CASE("logarithm and exponential") {
    Lattice lat{2, 16};
    TimeGrid g{0.5, 4};
    auto one = constant_field(lat, 1.0);
    CHECK(max_abs(global_extend_2d(constant_in_time(one, g))) < 1e-15);
    auto v = solve_pam(constant_field(lat, 0.7), 0.0, g, one);
    auto h = global_extend_2d(v);
    for (int m = 0; m <= g.M; ++m) CHECK(h[m].at(0, 0).real() == doctest::Approx(0.7 * g.t(m)).epsilon(1e-12));
    CHECK_THROWS_AS(log_field(FourierField(lat)), InvalidArgument);
  }

  TEST_CASE("Cole-Hopf on zero and smooth noise") {
    Lattice lat{2, 32};
    TimeGrid g{0.2, 100};
    auto k = kpz_constants_from(0, 0, 0.5);
    {
      KpzProblem p;
      p.enhancement = kpz_enhancement(FourierField(lat), g, k);
      p.h0 = FourierField(lat);
      p.lambda = 0.5;
      auto s = solve_kpz_rough(p);
      auto v = solve_pam(FourierField(lat), 0.0, g, constant_field(lat, 1.0));
      CHECK(cole_hopf_check(s.h, v).sup_error < 1e-14);
    }
    const FourierField xi = smooth_xi(lat);
    KpzProblem p;
    p.enhancement = kpz_enhancement(xi, g, k);
    p.h0 = FourierField(lat);
    p.lambda = 0.5;
    auto s = solve_kpz_rough(p);
    auto v = solve_pam(xi, 0.0, g, constant_field(lat, 1.0));
    CHECK(cole_hopf_check(s.h, v).sup_error < 1e-5);
    // cross-solver: the KPZ window against log of PAM
    auto h = global_extend_2d(v);
    double err = 0;
    for (int m = 0; m <= g.M; ++m) err = std::max(err, sup_norm(h[m] - s.h[m]));
    CHECK(err < 1e-5);
  }

  TEST_CASE("Feynman-Kac flat potential") {
    Lattice lat{2, 16};
    FeynmanKacOptions o;
    o.paths = 2000;
    o.dt = 0.01;
    auto e = feynman_kac_mc(constant_field(lat, 0.8), 0.3, 0.5, {{0.1, 0.2, 0}}, o);
    CHECK(e[0].value == doctest::Approx(std::exp(0.25)).epsilon(1e-12));
    auto z = feynman_kac_mc(FourierField(lat), 0.0, 0.5, {{0.1, 0.2, 0}}, o);
    CHECK(z[0].value == 1.0);
    CHECK(z[0].se == 0.0);
  }

  TEST_CASE("Feynman-Kac matches PAM for smooth noise") {
    Lattice lat{2, 32};
    const FourierField xi = smooth_xi(lat);
    TimeGrid g{0.5, 50};
    auto v = solve_pam(xi, 0.2, g, constant_field(lat, 1.0), {4, 12});
    FeynmanKacOptions o;
    o.paths = 4000;
    o.dt = 0.005;
    o.seed = 11;
    std::vector<std::array<double, 3>> xs{{0.3, 1.0, 0}, {2.0, 4.0, 0}};
    auto est = feynman_kac_mc(xi, 0.2, g.T, xs, o);
    PointEvaluator ev(v[g.M]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double ref = ev(xs[i].data());
      CHECK(std::abs(est[i].value - ref) < 3.5 * est[i].se);
    }
  }
}
