#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "helpers.hpp"
#include "paralab/besov.hpp"
#include "paralab/errors.hpp"
#include "paralab/partition.hpp"
#include "paralab/snapshot.hpp"
#include "paralab/spacetime.hpp"

using namespace paralab;
using paralab::test::max_diff;
using paralab::test::random_field;

TEST_SUITE("spectral") {
  TEST_CASE("lattice index and wave are inverse") {
    for (int d = 1; d <= 3; ++d) {
      Lattice lat{d, 8};
      for (std::size_t i = 0; i < lat.size(); ++i) CHECK(lat.index(lat.wave(i)) == i);
      CHECK(lat.index({0, 0, 0}) == 0);
    }
    CHECK_THROWS_AS(validate(Lattice{4, 8}), InvalidArgument);
    CHECK_THROWS_AS(validate(Lattice{2, 7}), InvalidArgument);
    CHECK_THROWS_AS(validate_dyadic(Lattice{2, 6}), InvalidArgument);
  }

  TEST_CASE("transform round trip and real point values") {
    Lattice lat{2, 16};
    auto u = random_field(lat, 3);
    CHECK(hermitian_defect(u) < 1e-14);
    auto vals = dft_inverse(u);
    double im = 0;
    for (auto z : vals) im = std::max(im, std::abs(z.imag()));
    CHECK(im < 1e-12);
    auto back = dft_forward(lat, vals);
    CHECK(max_diff(u, back) < 1e-13);
  }

  TEST_CASE("delta at origin has a flat spectrum, e_k a single coefficient") {
    Lattice lat{2, 8};
    std::vector<double> delta(lat.size(), 0.0);
    delta[0] = 1.0;
    auto d = dft_forward_real(lat, delta);
    for (auto z : d.data()) CHECK(std::abs(z - cplx(1.0 / 64)) < 1e-15);
    auto e = unit_mode(lat, {1, -2, 0});
    auto vals = dft_inverse(e);
    auto back = dft_forward(lat, vals);
    CHECK(std::abs(back.at(0, lat.index({1, -2, 0})) - 1.0) < 1e-14);
  }

  TEST_CASE("derivative of a cosine mode") {
    Lattice lat{2, 16};
    auto u = cosine_mode(lat, {2, 1, 0});
    auto du = partial(u, 0);
    CHECK(std::abs(du.at(0, lat.index({2, 1, 0})) - cplx(0, 2)) < 1e-15);
    CHECK(std::abs(du.at(0, lat.index({-2, -1, 0})) - cplx(0, -2)) < 1e-15);
  }

  TEST_CASE("partition of unity and supports") {
    for (auto lat : {Lattice{1, 16}, Lattice{2, 32}, Lattice{3, 8}, Lattice{2, 64}}) {
      auto P = build_partition(lat);
      auto tb = tables(lat);
      for (std::size_t i = 0; i < lat.size(); ++i) {
        double s = 0;
        for (int j = -1; j <= P->jmax; ++j) s += P->block(j)[i];
        CHECK(std::abs(s - 1.0) < 1e-12);
      }
      // non-adjacent blocks never overlap
      for (int i = -1; i <= P->jmax; ++i)
        for (int j = i + 2; j <= P->jmax; ++j)
          for (std::size_t q = 0; q < lat.size(); ++q) CHECK(P->block(i)[q] * P->block(j)[q] == 0.0);
    }
    CHECK(build_partition(Lattice{1, 16})->jmax == 3);
    auto P3 = build_partition(Lattice{3, 8});
    CHECK(P3->chi[0] == 1.0);
    for (int j = 0; j <= P3->jmax; ++j) CHECK(P3->rho[j][0] == 0.0);
    CHECK_THROWS_AS(build_partition(Lattice{2, 6}), InvalidArgument);
  }

  TEST_CASE("a mode with |k| = 20 on N = 64 meets at most two blocks") {
    Lattice lat{2, 64};
    auto P = build_partition(lat);
    const std::size_t q = lat.index({20, 0, 0});
    int count = 0;
    for (int j = -1; j <= P->jmax; ++j)
      if (P->block(j)[q] != 0) {
        ++count;
        const double lo = j < 0 ? 0.0 : 0.75 * std::ldexp(1.0, j);
        const double hi = j < 0 ? 4.0 / 3 : (j == P->jmax ? 1e9 : 8.0 / 3 * std::ldexp(1.0, j));
        CHECK(20 >= lo);
        CHECK(20 <= hi);
      }
    CHECK(count >= 1);
    CHECK(count <= 2);
  }

  TEST_CASE("blocks of simple fields") {
    Lattice lat{2, 32};
    auto c = constant_field(lat, 2.5);
    CHECK(max_diff(lp_block(c, -1), c) == 0.0);
    for (int j = 0; j <= build_partition(lat)->jmax; ++j) CHECK(lp_block(c, j).max_abs() == 0.0);
    // |k| = 4 sits where rho_1 = 1 (theta(2) = 0, theta(1) = 1 ... within the flat part)
    auto e = unit_mode(lat, {3, 0, 0});
    int hit = -2;
    auto P = build_partition(lat);
    for (int j = -1; j <= P->jmax; ++j)
      if (P->block(j)[lat.index({3, 0, 0})] == 1.0) hit = j;
    REQUIRE(hit >= 0);
    CHECK(max_diff(lp_block(e, hit), e) < 1e-15);

    auto u = random_field(lat, 9);
    FourierField sum(lat);
    for (int j = -1; j <= P->jmax; ++j) sum += lp_block(u, j);
    CHECK(max_diff(sum, u) < 1e-12 * u.max_abs());
    CHECK_THROWS_AS(lp_block(u, P->jmax + 1), InvalidArgument);
  }

  TEST_CASE("besov norms of single blocks") {
    Lattice lat{2, 32};
    auto c = constant_field(lat, 3.0);
    CHECK(besov_norm(c, {0.7, kInf, kInf}) == doctest::Approx(std::pow(2.0, -0.7) * 3.0));
    CHECK(lp_norm(c, 2.0) == doctest::Approx(3.0));
    auto e = cosine_mode(lat, {3, 0, 0});  // in block 1 only
    CHECK(holder_norm(e, 1.0) == doctest::Approx(2.0 * 2.0));
    CHECK(lp_norm(e, 2.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(validate(BesovSpec{0, 0.5, kInf}), InvalidArgument);
  }

  TEST_CASE("besov zero norm is comparable to the sup norm") {
    Lattice lat{2, 32};
    double lo = 1e9, hi = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto u = synthetic_field(lat, 0.5, s);
      const double r = besov_norm(u, {0, kInf, kInf}) / sup_norm(u);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    // frozen bounds
    CHECK(lo > 0.3);
    CHECK(hi < 2.0);
  }

  TEST_CASE("besov embedding B^a_{p,p} into B^{a-d/p}_{inf,inf}") {
    Lattice lat{2, 32};
    double worst = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      auto u = synthetic_field(lat, 0.3, 100 + s);
      worst = std::max(worst, besov_norm(u, {0.3 - 1.0, kInf, kInf}) / besov_norm(u, {0.3, 2, 2}));
    }
    CHECK(worst < 2.5);  // frozen bound
  }

  TEST_CASE("time grid") {
    TimeGrid g{1.0, 4};
    CHECK(g.index_of(0.5) == 2);
    CHECK_THROWS_AS(g.index_of(0.3), InvalidArgument);
    CHECK_THROWS_AS(validate(TimeGrid{1.0, 1}), InvalidArgument);
    Lattice lat{1, 8};
    SpaceTimeField u(g, lat, 1);
    for (int m = 0; m <= g.M; ++m) u[m] = constant_field(lat, m);
    auto r = time_reversed(u);
    CHECK(r[0].at(0, 0).real() == 4.0);
  }

  TEST_CASE("snapshot round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "paralab-unit-snap";
    std::filesystem::create_directories(dir);
    Lattice lat{2, 8};
    TimeGrid g{0.5, 3};
    SpaceTimeField u(g, lat, 2);
    for (int m = 0; m <= g.M; ++m) {
      u[m].set_component(0, random_field(lat, m));
      u[m].set_component(1, random_field(lat, 10 + m));
    }
    const auto p = (dir / "u.psnap").string();
    write_snapshot(p, u);
    auto h = read_snapshot_header(p);
    CHECK(h.d == 2);
    CHECK(h.nt == 4);
    CHECK(h.comps == 2);
    auto v = read_snapshot_series(p);
    CHECK(v.grid == g);
    for (int m = 0; m <= g.M; ++m) CHECK(max_diff(u[m], v[m]) == 0.0);
    write_snapshot(p, u[1]);
    CHECK(max_diff(read_snapshot_field(p), u[1]) == 0.0);
    CHECK_THROWS_AS(read_snapshot_field((dir / "missing").string()), IoError);
  }

  TEST_CASE("named streams are reproducible and distinct") {
    auto a = make_stream(1, "x", 0), b = make_stream(1, "x", 0), c = make_stream(1, "y", 0),
         e = make_stream(1, "x", 1);
    const auto va = a();
    CHECK(va == b());
    CHECK(va != c());
    CHECK(va != e());
  }
}
