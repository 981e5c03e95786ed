#include <doctest.h>

#include "oracles.hpp"
#include "helpers.hpp"
#include "paralab/bony.hpp"
#include "paralab/errors.hpp"
#include "paralab/generator.hpp"
#include "paralab/heat.hpp"

using namespace paralab;
using paralab::test::max_diff;
using paralab::test::random_field;

namespace {

SpaceTimeField smooth_drift(const Lattice& lat, const TimeGrid& g, double amp) {
  SpaceTimeField V(g, lat, 2);
  for (int m = 0; m <= g.M; ++m) {
    V[m].set_component(0, cosine_mode(lat, {0, 1, 0}, amp));
    V[m].set_component(1, cosine_mode(lat, {1, 0, 0}, amp * (1 + g.t(m))));
  }
  return V;
}

FourierField smooth_terminal(const Lattice& lat) {
  return cosine_mode(lat, {1, 1, 0}) + cosine_mode(lat, {2, 0, 0}, 0.5) + cosine_mode(lat, {0, 3, 0}, 0.2);
}

double sup_diff(const SpaceTimeField& a, const SpaceTimeField& b) {
  double m = 0;
  for (int i = 0; i < a.grid.nodes(); ++i) m = std::max(m, sup_norm(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("generator") {
  TEST_CASE("exponent chains") {
    CHECK_NOTHROW(validate_exponents(Regime::Young, default_young_exponents()));
    CHECK_NOTHROW(validate_exponents(Regime::Rough, default_rough_exponents()));
    auto e = default_young_exponents();
    e.alpha = 2.0;
    CHECK_THROWS_AS(validate_exponents(Regime::Young, e), InvalidArgument);
    auto r = default_rough_exponents();
    r.rho = 0.3;
    CHECK_THROWS_AS(validate_exponents(Regime::Rough, r), InvalidArgument);
  }

  TEST_CASE("zero drift reduces to the heat flow") {
    Lattice lat{2, 16};
    TimeGrid g{1.0, 10};
    GeneratorProblem p;
    p.V = SpaceTimeField(g, lat, 2);
    p.uT = random_field(lat, 1);
    p.f = Forcing::zero(g, lat);
    auto u = solve_young(p);
    for (int m = 0; m <= g.M; ++m) CHECK(max_diff(u[m], heat_flow(p.uT, g.T - g.t(m))) < 1e-13);

    p.f = Forcing::from_field(constant_in_time(constant_field(lat, 1.0), g));
    u = solve_young(p);
    for (int m = 0; m <= g.M; ++m) {
      FourierField expect = heat_flow(p.uT, g.T - g.t(m));
      expect.at(0, 0) += g.T - g.t(m);
      CHECK(max_diff(u[m], expect) < 1e-13);
    }

    p.lift = zero_lift(lat, g);
    p.regime = Regime::Rough;
    p.exponents = default_rough_exponents();
    auto s = solve_rough(p);
    for (int m = 0; m <= g.M; ++m) {
      CHECK(max_diff(s.u[m], u[m]) < 1e-13);
      FourierField sharp = u[m];
      sharp.at(0, 0) -= g.T - g.t(m);
      CHECK(max_diff(s.usharp[m], sharp) < 1e-12);
    }
  }

  TEST_CASE("Young solver matches the time-stepping oracle on a smooth drift") {
    Lattice lat{2, 32};
    TimeGrid g{0.5, 400};
    GeneratorProblem p;
    p.V = smooth_drift(lat, g, 0.25);
    p.uT = smooth_terminal(lat);
    SpaceTimeField f(g, lat, 1);
    for (int m = 0; m <= g.M; ++m) f[m] = cosine_mode(lat, {1, 0, 0}, 0.3 * g.t(m));
    p.f = Forcing::from_field(f);
    IterationLog log;
    auto u = solve_young(p, &log);
    CHECK(max_diff(u[g.M], p.uT) == 0.0);
    CHECK(log.max_residual() <= 1e-9);
    // the mild form with J^T = int_t^T P_{r-t} solves (d_t + L) u = -f
    SpaceTimeField minus_f = f;
    minus_f *= -1.0;
    auto ref = oracle::generator_ifrk4(p.V, minus_f, p.uT, 4);
    CHECK(sup_diff(u, ref) < 1e-6);
  }

  TEST_CASE("forced windows give the same solution") {
    Lattice lat{2, 16};
    TimeGrid g{0.5, 40};
    GeneratorProblem p;
    p.V = smooth_drift(lat, g, 0.25);
    p.uT = smooth_terminal(lat);
    p.f = Forcing::zero(g, lat);
    p.options.window_nodes = 1;
    auto a = solve_young(p);
    p.options.window_nodes = 8;
    IterationLog log;
    auto b = solve_young(p, &log);
    CHECK(log.windows.size() == 5);
    CHECK(sup_diff(a, b) < 1e-9);
  }

  TEST_CASE("reconstruction with the canonical lift equals the direct resonant product") {
    Lattice lat{2, 32};
    TimeGrid g{0.5, 10};
    auto V = smooth_drift(lat, g, 0.25);
    auto L = lift_generator(V);
    SpaceTimeField u(g, lat, 1);
    for (int m = 0; m <= g.M; ++m) u[m] = random_field(lat, m);
    for (Forcing f : {Forcing::zero(g, lat), Forcing::drift(1),
                      Forcing::from_field(constant_in_time(cosine_mode(lat, {1, 2, 0}), g))}) {
      auto up = gradient(u);
      auto us = sharp_part(u, up, V, f);
      auto R = resonant_reconstruct(up, us, L, f);
      for (int m = 0; m <= g.M; ++m) {
        FourierField direct(lat);
        for (int j = 0; j < 2; ++j) direct += resonant(partial(u[m], j), V[m].component(j));
        CHECK(max_diff(R[m], direct) < 1e-10);
      }
    }
    // zero input
    auto zero = resonant_reconstruct(SpaceTimeField(g, lat, 2), SpaceTimeField(g, lat, 1), L, Forcing::zero(g, lat));
    CHECK(max_abs(zero) == 0.0);
    CHECK_THROWS_AS(resonant_reconstruct(SpaceTimeField(g, lat, 2), SpaceTimeField(g, lat, 1), L, Forcing::drift(2)),
                    InvalidArgument);
  }

  TEST_CASE("f = V^k branch equals the explicit forcing") {
    Lattice lat{2, 16};
    TimeGrid g{0.5, 10};
    auto V = smooth_drift(lat, g, 0.25);
    auto L = lift_generator(V);
    SpaceTimeField u(g, lat, 1);
    for (int m = 0; m <= g.M; ++m) u[m] = random_field(lat, 40 + m);
    auto up = gradient(u);
    auto a = resonant_reconstruct(up, sharp_part(u, up, V, Forcing::drift(0)), L, Forcing::drift(0));
    Forcing ex = Forcing::from_field(V.component(0));
    auto b = resonant_reconstruct(up, sharp_part(u, up, V, ex), L, ex);
    for (int m = 0; m <= g.M; ++m) CHECK(max_diff(a[m], b[m]) < 1e-12);
  }

  TEST_CASE("rough and Young solvers agree on a smooth drift") {
    Lattice lat{2, 32};
    TimeGrid g{0.5, 50};
    GeneratorProblem p;
    p.V = smooth_drift(lat, g, 0.25);
    p.uT = smooth_terminal(lat);
    p.f = Forcing::drift(0);
    auto young = solve_young(p);
    p.lift = lift_generator(p.V);
    p.regime = Regime::Rough;
    p.exponents = default_rough_exponents();
    auto rough = solve_rough(p);
    CHECK(sup_diff(young, rough.u) < 1e-8);
    CHECK(rough.log.max_residual() <= 1e-9);
    // the defining identity and u' = grad u hold exactly
    auto sharp = sharp_part(rough.u, rough.uprime, p.lift->V1, p.f);
    for (int m = 0; m <= g.M; ++m) {
      CHECK(max_diff(sharp[m], rough.usharp[m]) == 0.0);
      CHECK(max_diff(rough.uprime[m], gradient(rough.u[m])) < 1e-14);
    }
    CHECK(std::isfinite(rough.norms.usharp));
    CHECK(rough.norms.u_theta > 0);
  }

  TEST_CASE("norm report conventions") {
    Lattice lat{2, 16};
    TimeGrid g{1.0, 4};
    ParacontrolledSolution s;
    s.u = SpaceTimeField(g, lat, 1);
    s.uprime = SpaceTimeField(g, lat, 2);
    s.usharp = SpaceTimeField(g, lat, 1);
    auto e = default_rough_exponents();
    auto r = norm_report(s, e, g.T);
    CHECK(r.u_theta == 0.0);
    CHECK(r.grad_u_rho == 0.0);
    CHECK(r.uprime == 0.0);
    CHECK(r.usharp == 0.0);
    // the t = T node carries no weight
    s.usharp[g.M] = random_field(lat, 3);
    CHECK(norm_report(s, e, g.T).usharp == 0.0);
    s.usharp[1] = random_field(lat, 4);
    const double w = std::pow(g.T - g.t(1), (e.alpha - 1) / 2) * holder_norm(s.usharp[1], 2 * e.alpha - 1);
    CHECK(norm_report(s, e, g.T).usharp == doctest::Approx(w));
    // heat flow with u' = 0
    for (int m = 0; m <= g.M; ++m) s.u[m] = heat_flow(smooth_terminal(lat), g.T - g.t(m));
    CHECK(norm_report(s, e, g.T).uprime == 0.0);
  }

  TEST_CASE("solution map is Lipschitz in the data") {
    Lattice lat{2, 16};
    TimeGrid g{0.5, 20};
    GeneratorProblem p;
    p.V = smooth_drift(lat, g, 0.25);
    p.uT = smooth_terminal(lat);
    p.f = Forcing::zero(g, lat);
    auto base = solve_young(p);
    double L = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      GeneratorProblem q = p;
      const double delta = 1e-3;
      auto du = random_field(lat, 500 + s);
      du *= delta / du.max_abs();
      q.uT += du;
      auto dV = random_field(lat, 600 + s);
      dV *= delta / dV.max_abs();
      for (int m = 0; m <= g.M; ++m) {
        FourierField c0 = q.V[m].component(0);
        c0 += dV;
        q.V[m].set_component(0, c0);
      }
      auto u = solve_young(q);
      L = std::max(L, sup_diff(u, base) / delta);
    }
    CHECK(L < 200.0);  // frozen bound
  }

  TEST_CASE("time regularity of the Young solution is N-stable") {
    std::vector<double> h;
    for (int n : {16, 32}) {
      Lattice lat{2, n};
      TimeGrid g{0.5, 20};
      GeneratorProblem p;
      p.V = smooth_drift(lat, g, 0.25);
      p.uT = smooth_terminal(lat);
      p.f = Forcing::zero(g, lat);
      auto u = solve_young(p);
      h.push_back(hoelder_time_norm(u, 0.25, {1.0, kInf, kInf}));
    }
    CHECK(std::isfinite(h[1]));
    CHECK(h[1] < 1.5 * h[0]);
  }

  TEST_CASE("bad input is rejected") {
    Lattice lat{2, 16};
    TimeGrid g{1.0, 4};
    GeneratorProblem p;
    p.V = SpaceTimeField(g, lat, 1);
    p.uT = FourierField(lat);
    CHECK_THROWS_AS(solve_young(p), InvalidArgument);
    p.V = SpaceTimeField(g, lat, 2);
    p.uT = FourierField(Lattice{2, 32});
    CHECK_THROWS_AS(solve_young(p), LatticeMismatch);
    p.uT = FourierField(lat);
    p.f = Forcing::drift(5);
    CHECK_THROWS_AS(solve_young(p), InvalidArgument);
  }

  TEST_CASE("non-convergence reports residuals") {
    Lattice lat{2, 16};
    TimeGrid g{1.0, 2};
    GeneratorProblem p;
    SpaceTimeField V(g, lat, 2);
    for (int m = 0; m <= g.M; ++m) V[m].set_component(0, cosine_mode(lat, {0, 1, 0}, 50.0));
    p.V = V;
    p.uT = smooth_terminal(lat);
    p.options.max_iter = 5;
    p.options.window_nodes = 2;
    try {
      solve_young(p);
      CHECK(false);
    } catch (const NumericalFailure& e) {
      CHECK(std::string(e.what()).find("residuals") != std::string::npos);
    }
  }
}
