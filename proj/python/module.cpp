#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "paralab/besov.hpp"
#include "paralab/bony.hpp"
#include "paralab/errors.hpp"
#include "paralab/kpz.hpp"
#include "paralab/noise.hpp"
#include "paralab/polymer.hpp"
#include "verify.hpp"

namespace py = pybind11;
using namespace paralab;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Lattice lattice_of(const Array& a) {
  const int d = int(a.ndim());
  if (d < 1 || d > 3) throw InvalidArgument("grid arrays must have 1 to 3 axes");
  for (int i = 1; i < d; ++i)
    if (a.shape(i) != a.shape(0)) throw InvalidArgument("grid arrays must be square");
  Lattice lat{d, int(a.shape(0))};
  validate(lat);
  return lat;
}

FourierField to_field(const Array& a) {
  const Lattice lat = lattice_of(a);
  return dft_forward_real(lat, std::span<const double>(a.data(), a.size()));
}

std::vector<py::ssize_t> grid_shape(const Lattice& lat) { return std::vector<py::ssize_t>(lat.d, lat.n); }

Array to_array(const FourierField& f) {
  const auto v = grid_values(f);
  Array out(grid_shape(f.lattice()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array series_array(const SpaceTimeField& u) {
  auto shape = grid_shape(u.lattice());
  shape.insert(shape.begin(), u.grid.nodes());
  Array out(shape);
  const std::size_t s = u.lattice().size();
  for (int m = 0; m <= u.grid.M; ++m) {
    const auto v = grid_values(u[m]);
    std::copy(v.begin(), v.end(), out.mutable_data() + m * s);
  }
  return out;
}

py::dict ensemble_dict(const PathEnsemble& e) {
  Array end({py::ssize_t(e.n), py::ssize_t(e.d)});
  std::copy(e.endpoints.begin(), e.endpoints.end(), end.mutable_data());
  Array w(py::ssize_t(e.n));
  std::copy(e.weights.begin(), e.weights.end(), w.mutable_data());
  py::dict d;
  d["endpoints"] = end;
  d["weights"] = w;
  d["log_scale"] = e.log_scale;
  d["Z"] = e.Z;
  d["Z_se"] = e.Z_se;
  d["ess"] = e.ess();
  return d;
}

}  // namespace

PYBIND11_MODULE(_paralab, m) {
  m.doc() = "Paracontrolled calculus on the torus: paraproducts, renormalized KPZ/PAM solvers, polymer sampling";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<LatticeMismatch>(m, "LatticeMismatch", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("roundtrip", [](const Array& a) { return to_array(to_field(a)); },
        "Project grid values onto the lattice and back.");
  m.def("product", [](const Array& f, const Array& g) { return to_array(product(to_field(f), to_field(g))); },
        "Dealiased pointwise product.");
  m.def(
      "bony",
      [](const Array& f, const Array& g) {
        const auto p = bony(to_field(f), to_field(g));
        return py::make_tuple(to_array(p.lt), to_array(p.res), to_array(p.gt));
      },
      "Paraproduct decomposition (f < g, f o g, f > g).");
  m.def("holder_norm", [](const Array& f, double alpha) { return holder_norm(to_field(f), alpha); });
  m.def("block_norms", [](const Array& f, double p) { return block_norms(to_field(f), p); });

  m.def(
      "white_noise",
      [](std::uint64_t seed, int d, int n, const std::string& mollifier, double eps) {
        const Lattice lat{d, n};
        return to_array(mollify(sample_white_noise(seed, lat).xi, Mollifier::parse(mollifier), eps));
      },
      py::arg("seed"), py::arg("d"), py::arg("n"), py::arg("mollifier") = "bump", py::arg("eps") = 0.25);
  m.def(
      "renorm_constants",
      [](const std::string& mollifier, double eps, int d, int n, double lam) {
        const auto k = kpz_constants(Mollifier::parse(mollifier), eps, Lattice{d, n}, lam);
        py::dict r;
        r["c12"] = k.c12;
        r["c124"] = k.c124;
        r["a"] = k.a;
        r["b"] = k.b;
        r["c"] = k.c;
        return r;
      },
      py::arg("mollifier"), py::arg("eps"), py::arg("d"), py::arg("n"), py::arg("lam") = 0.5);

  m.def(
      "solve_pam",
      [](const Array& xi, double c, double T, int M, int substeps) {
        const auto f = to_field(xi);
        PamOptions o;
        o.substeps = substeps;
        SpaceTimeField v;
        {
          py::gil_scoped_release rel;
          v = solve_pam(f, c, TimeGrid{T, M}, constant_field(f.lattice(), 1.0), o);
        }
        return series_array(v);
      },
      py::arg("xi"), py::arg("c"), py::arg("T"), py::arg("M"), py::arg("substeps") = 2,
      "v with dv = 1/2 Delta v + (xi - c) v, v(0) = 1; returns grid values per node.");
  m.def(
      "solve_kpz",
      [](const Array& xi, double c12, double c124, double lam, double T, int M) {
        KpzProblem p;
        const auto f = to_field(xi);
        p.enhancement = kpz_enhancement(f, TimeGrid{T, M}, kpz_constants_from(c12, c124, lam));
        p.h0 = FourierField(f.lattice());
        p.lambda = lam;
        const auto s = solve_kpz_rough(p);
        py::dict r;
        r["h"] = series_array(s.h);
        r["T_star"] = s.T_star;
        r["final_residual"] = s.final_residual;
        return r;
      },
      py::arg("xi"), py::arg("c12"), py::arg("c124"), py::arg("lam"), py::arg("T"), py::arg("M"),
      "dh = 1/2 Delta h + lam |grad h|^2 + xi - c with h(0) = 0.");

  m.def(
      "sample_polymer",
      [](const Array& xi, double c, double T, std::vector<double> x0, int n, double dt, std::uint64_t seed) {
        Point p{0, 0, 0};
        for (std::size_t a = 0; a < x0.size() && a < 3; ++a) p[a] = x0[a];
        const auto f = to_field(xi);
        return ensemble_dict(sample_wiener_reweighted(f, c, T, p, n, dt, seed, false));
      },
      py::arg("xi"), py::arg("c"), py::arg("T"), py::arg("x0"), py::arg("n"), py::arg("dt"), py::arg("seed") = 0,
      "Brownian endpoints with weights exp(int xi(B) ds - c T).");
  m.def(
      "ks_two_sample",
      [](std::vector<double> x, std::vector<double> wx, std::vector<double> y, std::vector<double> wy) {
        const auto r = ks_two_sample(x, wx, y, wy);
        return py::make_tuple(r.D, r.p);
      },
      "Weighted two-sample Kolmogorov-Smirnov statistic and p-value.");

  m.def(
      "acceptance_json",
      [](int k) {
        py::gil_scoped_release rel;
        return verify::to_json(verify::acceptance(k)).dump();
      },
      "Run one acceptance criterion and return its report as JSON text.");
  m.attr("suites") = verify::suite_names();
}
