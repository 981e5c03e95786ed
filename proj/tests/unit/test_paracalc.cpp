#include <doctest.h>

#include "helpers.hpp"
#include "paralab/bony.hpp"
#include "paralab/errors.hpp"
#include "paralab/heat.hpp"
#include "paralab/partition.hpp"

using namespace paralab;
using paralab::test::max_diff;
using paralab::test::random_field;

TEST_SUITE("paracalc") {
  TEST_CASE("Bony decomposition is exact") {
    for (auto lat : {Lattice{1, 32}, Lattice{2, 32}, Lattice{3, 16}}) {
      for (std::uint64_t s = 0; s < 5; ++s) {
        auto f = random_field(lat, 2 * s), g = random_field(lat, 2 * s + 1);
        auto parts = bony(f, g);
        FourierField sum = parts.lt + parts.res + parts.gt;
        auto fg = product(f, g);
        CHECK(max_diff(sum, fg) < 1e-12 * f.max_abs() * g.max_abs() * std::sqrt(double(lat.size())));
        CHECK(max_diff(fg - para_lt(f, g) - para_gt(f, g), resonant(f, g)) < 1e-11);
      }
    }
  }

  TEST_CASE("paraproducts with constants") {
    Lattice lat{2, 32};
    auto g = random_field(lat, 4);
    auto c = constant_field(lat, 1.7);
    FourierField expect(lat);
    for (int j = 1; j <= build_partition(lat)->jmax; ++j) expect += lp_block(g, j);
    expect = product(constant_field(lat, 1.7), expect);  // drops Nyquist modes like every product
    CHECK(max_diff(para_lt(c, g), expect) < 1e-12);
    CHECK(para_lt(g, constant_field(lat, 1.0)).max_abs() < 1e-14);
    auto e0 = constant_field(lat, 1.0);
    CHECK(max_diff(resonant(e0, e0), e0) < 1e-14);
  }

  TEST_CASE("resonant product of separated modes vanishes") {
    Lattice lat{2, 64};
    auto f = cosine_mode(lat, {1, 0, 0}), g = cosine_mode(lat, {20, 0, 0});
    CHECK(resonant(f, g).max_abs() < 1e-14);
  }

  TEST_CASE("commutator examples") {
    Lattice lat{2, 32};
    auto f = random_field(lat, 1), g = random_field(lat, 2);
    CHECK(commutator_R(f, g, FourierField(lat)).max_abs() == 0.0);
    auto h = random_field(lat, 3);
    auto e0 = constant_field(lat, 1.0);
    auto r = commutator_R(f, e0, h);
    CHECK(max_diff(r, -1.0 * product(f, resonant(e0, h))) < 1e-12);
  }

  TEST_CASE("commutator bound is N-stable on synthetic fields") {
    const double a = 0.4, b = -0.6, c = -0.3;
    std::vector<double> worst;
    for (int n : {32, 64}) {
      Lattice lat{2, n};
      double w = 0;
      for (std::uint64_t s = 0; s < 5; ++s) {
        auto f = synthetic_field(lat, a, 10 + s), g = synthetic_field(lat, b, 20 + s),
             h = synthetic_field(lat, c, 30 + s);
        w = std::max(w, holder_norm(commutator_R(f, g, h), a + b + c) /
                            (holder_norm(f, a) * holder_norm(g, b) * holder_norm(h, c)));
      }
      worst.push_back(w);
    }
    CHECK(worst[1] < 3 * worst[0]);
    CHECK(worst[1] < 1.0);  // frozen bound
  }

  TEST_CASE("paraproduct bound by L-infinity") {
    Lattice lat{2, 64};
    double w = 0;
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto f = synthetic_field(lat, 0.5, s), g = synthetic_field(lat, -0.5, 50 + s);
      w = std::max(w, holder_norm(para_lt(f, g), -0.5) / (sup_norm(f) * holder_norm(g, -0.5)));
    }
    CHECK(w < 4.0);  // frozen bound
  }

  TEST_CASE("heat flow closed forms") {
    Lattice lat{2, 16};
    auto e0 = constant_field(lat, 1.0);
    CHECK(max_diff(heat_flow(e0, 3.0), e0) == 0.0);
    auto ek = unit_mode(lat, {1, 0, 0});
    CHECK(heat_flow(ek, 1.0).at(0, lat.index({1, 0, 0})).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(heat_flow(ek, -1.0), InvalidArgument);
  }

  TEST_CASE("heat smoothing estimate") {
    Lattice lat{2, 64};
    auto u = synthetic_field(lat, -0.5, 5);
    double C = 0;
    for (double t : {0.01, 0.03, 0.1, 0.3, 1.0})
      C = std::max(C, holder_norm(heat_flow(u, t), -0.5 + 1.0) * std::sqrt(t) / holder_norm(u, -0.5));
    CHECK(C < 2.0);  // frozen bound
  }

  TEST_CASE("Duhamel integrals of time-constant forcing are exact") {
    Lattice lat{2, 16};
    TimeGrid g{1.0, 10};
    const Wave k{2, 1, 0};
    const double k2 = 5;
    auto f = constant_in_time(unit_mode(lat, k) + constant_field(lat, 1.0), g);
    auto I = duhamel_forward_all(f);
    auto J = duhamel_backward_all(f);
    for (int m = 0; m <= g.M; ++m) {
      const double t = g.t(m);
      CHECK(I[m].at(0, 0).real() == doctest::Approx(t).epsilon(1e-13));
      CHECK(I[m].at(0, lat.index(k)).real() ==
            doctest::Approx(2 * (1 - std::exp(-k2 * t / 2)) / k2).epsilon(1e-12));
      CHECK(J[m].at(0, 0).real() == doctest::Approx(1.0 - t).epsilon(1e-13));
      CHECK(J[m].at(0, lat.index(k)).real() ==
            doctest::Approx(2 * (1 - std::exp(-k2 * (1 - t) / 2)) / k2).epsilon(1e-12));
    }
    CHECK(J[g.M].max_abs() == 0.0);
    CHECK(std::abs(duhamel_backward(f, 0.5, 0.5).max_abs()) == 0.0);
    CHECK(duhamel_backward(f, 0.2, 0.6).at(0, 0).real() == doctest::Approx(0.4));
  }

  TEST_CASE("Duhamel of linear-in-time forcing vs refined quadrature") {
    Lattice lat{1, 8};
    TimeGrid g{1.0, 8};
    SpaceTimeField f(g, lat, 1);
    const Wave k{3, 0, 0};
    for (int m = 0; m <= g.M; ++m) f[m] = g.t(m) * unit_mode(lat, k);
    auto I = duhamel_forward(f, 1.0);
    // int_0^1 e^{-lam(1-s)} s ds by composite Simpson
    const double lam = 4.5;
    const int n = 20000;
    double acc = 0;
    for (int i = 0; i <= n; ++i) {
      const double s = double(i) / n;
      const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
      acc += w * std::exp(-lam * (1 - s)) * s;
    }
    acc /= 3.0 * n;
    CHECK(std::abs(I.at(0, lat.index(k)).real() - acc) < 1e-8 * acc);
  }

  TEST_CASE("gradient commutes with backward Duhamel") {
    Lattice lat{2, 16};
    TimeGrid g{0.5, 5};
    SpaceTimeField f(g, lat, 1);
    for (int m = 0; m <= g.M; ++m) f[m] = random_field(lat, m);
    auto a = gradient(duhamel_backward_all(f));
    auto b = duhamel_backward_all(gradient(f));
    for (int m = 0; m <= g.M; ++m) CHECK(max_diff(a[m], b[m]) < 1e-13);
  }

  TEST_CASE("time Hoelder norm examples") {
    Lattice lat{2, 16};
    TimeGrid g{1.0, 8};
    auto u = constant_in_time(random_field(lat, 1), g);
    CHECK(hoelder_time_norm(u, 0.5, {0, kInf, kInf}) == 0.0);
    SpaceTimeField v(g, lat, 1);
    for (int m = 0; m <= g.M; ++m) v[m] = constant_field(lat, g.t(m));
    CHECK(hoelder_time_norm(v, 1.0, {0, kInf, kInf}) == doctest::Approx(1.0));
  }

  TEST_CASE("Schauder commutator") {
    Lattice lat{2, 32};
    auto g = synthetic_field(lat, -0.6, 1);
    auto f = synthetic_field(lat, 0.4, 2);
    std::vector<double> ts{0.01, 0.1, 0.5};
    auto flat = schauder_commutator_check(constant_field(lat, 2.0), g, ts, 0.4, -0.6, 0.3);
    CHECK(flat.max_ratio < 1e-12);
    auto r0 = schauder_commutator_check(f, constant_field(lat, 1.0), ts, 0.4, -0.6, 0.3);
    CHECK(r0.max_ratio < 1e-12);
    auto r = schauder_commutator_check(f, g, ts, 0.4, -0.6, 0.3);
    CHECK(r.max_ratio < 5.0);  // frozen bound
    CHECK(r.ratios.size() == ts.size());
  }

  TEST_CASE("lattice mismatch is rejected") {
    CHECK_THROWS_AS(product(FourierField(Lattice{2, 16}), FourierField(Lattice{2, 32})), LatticeMismatch);
  }
}
