#include <doctest.h>

#include <filesystem>

#include "oracles.hpp"
#include "helpers.hpp"
#include "paralab/bony.hpp"
#include "paralab/bundle.hpp"
#include "paralab/chaos.hpp"
#include "paralab/enhancement.hpp"
#include "paralab/errors.hpp"
#include "paralab/heat.hpp"
#include "paralab/noise.hpp"

using namespace paralab;
using paralab::test::max_diff;

TEST_SUITE("noise") {
  TEST_CASE("white noise is deterministic, Hermitian, mean free") {
    Lattice lat{2, 16};
    auto a = sample_white_noise(5, lat), b = sample_white_noise(5, lat), c = sample_white_noise(6, lat);
    CHECK(max_diff(a.xi, b.xi) == 0.0);
    CHECK(max_diff(a.xi, c.xi) > 0.0);
    CHECK(a.xi.at(0, 0) == cplx(0.0));
    CHECK(hermitian_defect(a.xi) == 0.0);
  }

  TEST_CASE("white noise mode variance is one") {
    Lattice lat{2, 8};
    const int n = 4000;
    const std::size_t q1 = lat.index({1, 2, 0}), q2 = lat.index({-4, 0, 0});
    double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0;
    for (int s = 0; s < n; ++s) {
      auto w = sample_white_noise(s, lat);
      const double v1 = std::norm(w.xi.at(0, q1)), v2 = std::norm(w.xi.at(0, q2));
      s1 += v1;
      s1sq += v1 * v1;
      s2 += v2;
      s2sq += v2 * v2;
    }
    for (auto [s, sq] : {std::pair{s1, s1sq}, std::pair{s2, s2sq}}) {
      const double mean = s / n, sd = std::sqrt((sq / n - mean * mean) / n);
      CHECK(std::abs(mean - 1.0) < 3 * sd);
    }
  }

  TEST_CASE("mollifier profiles") {
    auto b = Mollifier::bump();
    CHECK(b(0) == 1.0);
    CHECK(b(1.0) == 0.0);
    auto p = Mollifier::parse("plateau:0.5:1");
    CHECK(p(0.4) == 1.0);
    CHECK(p(1.0) == 0.0);
    CHECK(p(0.75) > 0.0);
    CHECK(Mollifier::parse(p.id()).a == 0.5);
    CHECK_THROWS_AS(Mollifier::parse("gauss"), InvalidArgument);
    CHECK_THROWS_AS(Mollifier::parse("plateau:1:0.5"), InvalidArgument);

    Lattice lat{2, 16};
    auto w = sample_white_noise(1, lat);
    auto m = mollify(w.xi, b, 2.0 / 16);
    auto tb = tables(lat);
    for (std::size_t i = 0; i < lat.size(); ++i)
      if (tb->k2[i] >= 64) CHECK(m.at(0, i) == cplx(0.0));
    auto m2 = mollify(w.xi, p, 2.0 / 16);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const double r = std::sqrt(tb->k2[i]) * 2.0 / 16;
      CHECK(std::abs(m2.at(0, i) - p(r) * w.xi.at(0, i)) < 1e-15);
      CHECK(std::abs(m.at(0, i) - b(r) * w.xi.at(0, i)) < 1e-15);
    }
    CHECK_THROWS_AS(mollify(w.xi, b, -1.0), InvalidArgument);
  }

  TEST_CASE("renormalization constants on the unit cube") {
    Lattice lat{3, 8};
    auto m = Mollifier::plateau(0.9, 1.0);
    CHECK(renorm_c12(m, 0.5, lat) == doctest::Approx(44.0 / 3).epsilon(1e-14));
    const double c124 = renorm_c124(m, 0.5, lat);
    CHECK(c124 == doctest::Approx(oracle::c124_direct(m, 0.5, lat)).epsilon(1e-12));
    CHECK(c124 == doctest::Approx(55.883333333333262).epsilon(1e-12));  // frozen
    CHECK(renorm_c12(m, 2.0, lat) == 0.0);
    CHECK(renorm_c124(m, 2.0, lat) == 0.0);
  }

  TEST_CASE("FFT convolution matches the direct double sum") {
    for (auto lat : {Lattice{2, 16}, Lattice{3, 8}}) {
      for (auto m : {Mollifier::bump(), Mollifier::plateau(0.5, 1.0)}) {
        const double eps = 4.0 / lat.n;
        CHECK(renorm_c124(m, eps, lat) == doctest::Approx(oracle::c124_direct(m, eps, lat)).epsilon(1e-11));
      }
    }
  }

  TEST_CASE("KPZ constants rescaling") {
    auto k = kpz_constants_from(2.0, 3.0, 0.5);
    CHECK(k.a == doctest::Approx(2.0));
    CHECK(k.b == doctest::Approx(12.0));
    CHECK(k.c == doctest::Approx(28.0));
  }

  TEST_CASE("X closed form and quadrature agree") {
    Lattice lat{2, 16};
    TimeGrid g{1.0, 10};
    const Wave k{3, 1, 0};
    auto xi = cosine_mode(lat, k);
    auto X = build_X(xi, g);
    CHECK(X[0].max_abs() == 0.0);
    for (int m = 0; m <= g.M; ++m)
      CHECK(X[m].at(0, lat.index(k)).real() ==
            doctest::Approx(2 * (1 - std::exp(-10 * g.t(m) / 2)) / 10).epsilon(1e-13));
    auto w = mollify(sample_white_noise(3, lat).xi, Mollifier::bump(), 4.0 / 16);
    auto Xa = build_X(w, g);
    auto Xb = duhamel_forward_all(constant_in_time(w, g));
    for (int m = 0; m <= g.M; ++m) CHECK(max_diff(Xa[m], Xb[m]) < 1e-10);
  }

  TEST_CASE("tree12 zero mode for one mode pair") {
    Lattice lat{2, 16};
    TimeGrid g{1.0, 200};
    const Wave k{1, 1, 0};
    auto X = build_X(cosine_mode(lat, k), g);
    auto X12 = build_tree12(X, 0.0);
    // |grad X|^2 zero mode = 2 |k|^2 F_t(k)^2 with F_t = 2 (1 - e^{-t})/2 for |k|^2 = 2
    // integrate in closed form: int_0^t 2*2*(1-e^{-s})^2 ds
    const double t = 1.0;
    const double exact = 4 * (t - 2 * (1 - std::exp(-t)) + 0.5 * (1 - std::exp(-2 * t)));
    CHECK(X12[g.M].at(0, 0).real() == doctest::Approx(exact).epsilon(1e-4));
  }

  TEST_CASE("zero noise gives a zero enhancement") {
    Lattice lat{2, 8};
    TimeGrid g{0.5, 4};
    auto e = build_kpz_enhancement(FourierField(lat), g, 0.0, 0.0);
    for (auto* c : {&e.X, &e.X12, &e.X122, &e.X1222, &e.X124, &e.Q, &e.QgradX}) CHECK(max_abs(*c) == 0.0);
    auto lift = lift_generator(SpaceTimeField(g, lat, 2));
    CHECK(max_abs(lift.V2) == 0.0);
  }

  TEST_CASE("lift of spatially constant V vanishes") {
    Lattice lat{2, 8};
    TimeGrid g{0.5, 4};
    SpaceTimeField V(g, lat, 2);
    for (int m = 0; m <= g.M; ++m) {
      V[m].at(0, 0) = 1.0 + g.t(m);
      V[m].at(1, 0) = -2.0;
    }
    CHECK(max_abs(lift_generator(V).V2) == 0.0);
  }

  TEST_CASE("lift of a single mode matches a direct computation") {
    Lattice lat{2, 16};
    TimeGrid g{0.5, 5};
    SpaceTimeField V(g, lat, 2);
    for (int m = 0; m <= g.M; ++m) {
      V[m].set_component(0, cosine_mode(lat, {1, 0, 0}, 0.3));
      V[m].set_component(1, cosine_mode(lat, {0, 2, 0}, 0.2));
    }
    auto L = lift_generator(V);
    auto JV = duhamel_backward_all(V);
    for (int m : {0, 3})
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          auto direct = resonant(partial(JV[m].component(i), j), V[m].component(j));
          CHECK(max_diff(direct, L.V2[m].component(i * 2 + j)) < 1e-14);
        }
  }

  TEST_CASE("tree12 mean slope is 4 c12 in the heat convention") {
    Lattice lat{3, 8};
    auto m = Mollifier::plateau(0.9, 1.0);
    const double c12 = renorm_c12(m, 0.5, lat);
    const double t0 = 30.0, t1 = 40.0;
    const double d0 = chaos_variance_oracle(ChaosTerm::Tree12Mean, 0, 0.0, t0, m, 0.5, lat);
    const double d1 = chaos_variance_oracle(ChaosTerm::Tree12Mean, 0, 0.0, t1, m, 0.5, lat);
    CHECK((d1 - d0) / (t1 - t0) == doctest::Approx(4 * c12).epsilon(1e-2));
  }

  TEST_CASE("chaos oracle elementary values") {
    Lattice lat{3, 8};
    auto m = Mollifier::bump();
    CHECK(chaos_variance_oracle(ChaosTerm::X, 0, 0.3, 0.3, m, 0.5, lat) == 0.0);
    CHECK(chaos_variance_oracle(ChaosTerm::Tree12, 0, 0.3, 0.3, m, 0.5, lat) == 0.0);
    CHECK(chaos_variance_oracle(ChaosTerm::QgradXMean, 0, 0.0, 0.5, m, 0.5, lat) < 1e-14);
    CHECK_THROWS_AS(parse_chaos_term("tree99"), InvalidArgument);
    CHECK_THROWS_AS(chaos_variance_oracle(ChaosTerm::X, 0, 0, 1, m, 0.5, Lattice{2, 8}), InvalidArgument);
  }

  TEST_CASE("enhancement bundle round trip") {
    const auto dir = (std::filesystem::temp_directory_path() / "paralab-unit-bundle").string();
    std::filesystem::remove_all(dir);
    Lattice lat{2, 8};
    TimeGrid g{0.25, 4};
    auto xi = mollify(sample_white_noise(7, lat).xi, Mollifier::bump(), 0.5);
    auto e = build_kpz_enhancement(xi, g, 0.1, 0.02);
    e.seed = 7;
    e.mollifier = "bump";
    e.eps = 0.5;
    auto man = write_enhancement_bundle(dir, e);
    auto man2 = write_enhancement_bundle(dir, e);
    CHECK(man.dump() == man2.dump());
    auto r = read_enhancement_bundle(dir);
    CHECK(r.a == 0.1);
    CHECK(r.seed == 7);
    for (int m = 0; m <= g.M; ++m) {
      CHECK(max_diff(r.X124[m], e.X124[m]) == 0.0);
      CHECK(max_diff(r.Q[m], e.Q[m]) < 1e-15);
    }
    CHECK_THROWS_AS(read_enhancement_bundle(dir + "-missing"), IoError);
  }
}
