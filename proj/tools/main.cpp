#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "paralab/bundle.hpp"
#include "paralab/errors.hpp"
#include "paralab/kpz.hpp"
#include "paralab/parallel.hpp"
#include "paralab/polymer.hpp"
#include "paralab/rng.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace paralab;
using paralab::cli::ExperimentConfig;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kNumericalFailure = 3 };

std::string file_hash(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw IoError("cannot read " + p.string());
  const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return hex64(fnv1a_bytes(bytes.data(), bytes.size()));
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream os(p);
  if (!os) throw IoError("cannot write " + p.string());
  os << j.dump(2) << "\n";
}

fs::path make_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create " + p.string());
  return p;
}

json provenance(const ExperimentConfig& c, const char* command) {
  return {{"schema_version", cli::kSchemaVersion},
          {"command", command},
          {"experiment", c.experiment},
          {"seed", c.seed},
          {"config_fnv1a", hex64(fnv1a(c.raw.dump()))}};
}

FourierField noise_from(std::uint64_t seed, const Lattice& lat, const std::string& mollifier, double eps) {
  return mollify(sample_white_noise(seed, lat).xi, Mollifier::parse(mollifier), eps);
}

// PAM/polymer constant c = 2 c12 + 8 c124 from the lattice sums in a bundle
double polymer_constant(const KpzEnhancement& e) { return kpz_constants_from(e.c12, e.c124, 0.5).c; }

std::string bundle_dir(const ExperimentConfig& c, const std::string& flag) {
  return flag.empty() ? (fs::path(c.output) / "enhancement").string() : flag;
}

// ---------------------------------------------------------------------------

int cmd_gen_noise(const ExperimentConfig& c) {
  const auto m = Mollifier::parse(c.mollifier);
  const auto k = kpz_constants(m, c.eps, c.lattice, c.lambda);
  auto e = kpz_enhancement(noise_from(c.seed, c.lattice, c.mollifier, c.eps), c.grid, k);
  e.seed = c.seed;
  e.mollifier = m.id();
  e.eps = c.eps;
  const fs::path dir = fs::path(c.output) / "enhancement";
  const json man = write_enhancement_bundle(dir.string(), e);
  const std::string h = hex64(fnv1a(man.dump()));
  std::printf("enhancement bundle %s manifest %s c12 %.12g c124 %.12g\n", dir.c_str(), h.c_str(), k.c12, k.c124);
  return kOk;
}

json iteration_log(const IterationLog& log) {
  json w = json::array();
  for (const auto& x : log.windows)
    w.push_back({{"m0", x.m0}, {"m1", x.m1}, {"converged", x.converged}, {"residuals", x.residuals}});
  return {{"initial_window_nodes", log.initial_window_nodes}, {"halvings", log.halvings},
          {"max_residual", log.max_residual()}, {"windows", w}};
}

int cmd_solve_generator(const ExperimentConfig& c, const KpzEnhancement& e, const fs::path& out, json& man) {
  const auto& lat = e.lattice();
  const auto& g = e.grid();
  GeneratorProblem p;
  p.V = SpaceTimeField(g, lat, lat.d);
  if (c.drift == "polymer") {
    if (lat.d != 2) throw InvalidArgument("generator drift 'polymer' needs d = 2");
    const auto xi = noise_from(e.seed, lat, e.mollifier, e.eps);
    PamOptions po;
    po.substeps = c.pam_substeps;
    const auto h = global_extend_2d(solve_pam(xi, polymer_constant(e), g, constant_field(lat, 1.0), po));
    for (int m = 0; m <= g.M; ++m) p.V[m] = gradient(h[g.M - m]);
  }
  p.uT = FourierField(lat);
  for (const auto& mode : c.terminal) p.uT += cosine_mode(lat, {mode.k[0], mode.k[1], mode.k[2]}, mode.amp);
  if (c.forcing == "zero") p.f = Forcing::zero(g, lat);
  else p.f = Forcing::drift(std::stoi(c.forcing.substr(6)));
  p.regime = c.regime;
  p.exponents = c.exponents_for_regime();
  p.options.tol = c.tol;
  p.options.max_iter = c.max_iter;
  json comps, log;
  if (c.regime == Regime::Rough) {
    p.lift = lift_generator(p.V);
    const auto s = solve_rough(p);
    comps["u"] = write_tracked_snapshot(out.string(), "u", s.u);
    comps["uprime"] = write_tracked_snapshot(out.string(), "uprime", s.uprime);
    comps["usharp"] = write_tracked_snapshot(out.string(), "usharp", s.usharp);
    log = iteration_log(s.log);
    log["norms"] = {{"u_theta", s.norms.u_theta}, {"grad_u_rho", s.norms.grad_u_rho}, {"uprime", s.norms.uprime},
                    {"usharp", s.norms.usharp}};
  } else {
    IterationLog il;
    const auto u = solve_young(p, &il);
    comps["u"] = write_tracked_snapshot(out.string(), "u", u);
    log = iteration_log(il);
  }
  man["components"] = comps;
  man["log"] = log;
  std::printf("generator solve: %zu windows, max residual %.3g\n", log["windows"].size(),
              log["max_residual"].get<double>());
  return kOk;
}

int cmd_solve_kpz(const ExperimentConfig& c, const KpzEnhancement& e, const fs::path& out, json& man) {
  KpzProblem p;
  p.enhancement = e;
  p.h0 = FourierField(e.lattice());
  p.exponents = c.kpz_exponents;
  p.lambda = e.lambda;
  p.tol = c.tol;
  p.max_iter = c.max_iter;
  const auto s = solve_kpz_rough(p);
  man["components"] = {{"h", write_tracked_snapshot(out.string(), "h", s.h)},
                       {"v", write_tracked_snapshot(out.string(), "v", s.v)}};
  man["log"] = {{"T_star", s.T_star},
                {"halvings", s.halvings},
                {"iterations", s.iterations},
                {"max_node_residual", s.max_node_residual},
                {"final_residual", s.final_residual},
                {"norms", {{"v", s.norms.v1}, {"vprime", s.norms.v2}, {"vsharp", s.norms.v3}}}};
  std::printf("kpz solve: T* = %.6g, final residual %.3g\n", s.T_star, s.final_residual);
  if (s.T_star < e.grid().T * (1 - 1e-12)) {
    std::fprintf(stderr, "numerical failure: fixed point stopped at T* = %.6g < T = %.6g\n", s.T_star, e.grid().T);
    return kNumericalFailure;
  }
  return kOk;
}

int cmd_solve_pam(const ExperimentConfig& c, const KpzEnhancement& e, const fs::path& out, json& man) {
  const auto& lat = e.lattice();
  const auto xi = noise_from(e.seed, lat, e.mollifier, e.eps);
  PamOptions po;
  po.substeps = c.pam_substeps;
  const double cst = polymer_constant(e);
  const auto v = solve_pam(xi, cst, e.grid(), constant_field(lat, 1.0), po);
  man["components"] = {{"v", write_tracked_snapshot(out.string(), "v", v)}};
  if (lat.d == 2) man["components"]["h"] = write_tracked_snapshot(out.string(), "h", global_extend_2d(v));
  man["log"] = {{"c", cst}, {"substeps", po.substeps}};
  std::printf("pam solve: c = %.12g\n", cst);
  return kOk;
}

int cmd_solve(const ExperimentConfig& c, const std::string& which, const std::string& bundle) {
  const auto e = read_enhancement_bundle(bundle_dir(c, bundle));
  const fs::path out = make_dir(fs::path(c.output) / ("solve-" + which));
  json man = provenance(c, ("solve " + which).c_str());
  man["bundle_manifest"] = file_hash(fs::path(bundle_dir(c, bundle)) / "manifest.json");
  int rc = kOk;
  if (which == "generator") rc = cmd_solve_generator(c, e, out, man);
  else if (which == "kpz") rc = cmd_solve_kpz(c, e, out, man);
  else rc = cmd_solve_pam(c, e, out, man);
  write_json(out / "manifest.json", man);
  return rc;
}

int cmd_polymer(const ExperimentConfig& c, const std::string& bundle) {
  const auto e = read_enhancement_bundle(bundle_dir(c, bundle));
  const auto& lat = e.lattice();
  const auto& g = e.grid();
  const auto xi = noise_from(e.seed, lat, e.mollifier, e.eps);
  const double cst = polymer_constant(e);
  const fs::path out = make_dir(fs::path(c.output) / "polymer");
  const Point x0{c.x0[0], c.x0[1], c.x0[2]};

  std::vector<StatRow> rows;
  const auto w = sample_wiener_reweighted(xi, cst, g.T, x0, c.paths, c.dt, c.seed, c.store_paths);
  write_ensemble((out / "wiener.ens").string(), w);
  rows.push_back({"Z", w.Z, w.Z_se, w.n});
  rows.push_back({"ess", w.ess(), 0.0, w.n});
  rows.push_back({"ess_fraction", w.ess() / w.n, 0.0, w.n});
  json files = {{"wiener.ens", file_hash(out / "wiener.ens")}};

  auto endpoint_means = [&](const PathEnsemble& en, const std::string& tag) {
    const auto nw = en.normalized_weights();
    for (int a = 0; a < en.d; ++a) {
      double m = 0, v = 0;
      for (int i = 0; i < en.n; ++i) m += nw[i] * en.endpoint(i, a);
      for (int i = 0; i < en.n; ++i) v += nw[i] * nw[i] * (en.endpoint(i, a) - m) * (en.endpoint(i, a) - m);
      rows.push_back({tag + "_endpoint_mean_" + std::to_string(a), m, std::sqrt(v), en.n});
    }
  };
  endpoint_means(w, "wiener");

  if (lat.d == 2) {
    const auto drift = drift_from_pam(xi, cst, g, c.drift_refine);
    const auto q = girsanov_drift_sim(drift, g.T, x0, c.paths, c.dt, c.seed, c.store_paths);
    write_ensemble((out / "girsanov.ens").string(), q);
    files["girsanov.ens"] = file_hash(out / "girsanov.ens");
    endpoint_means(q, "girsanov");
    const auto ks = endpoint_ks(w, q);
    for (std::size_t a = 0; a < ks.size(); ++a) {
      rows.push_back({"ks_D_" + std::to_string(a), ks[a].D, 0.0, int(std::lround(ks[a].n_eff))});
      rows.push_back({"ks_p_" + std::to_string(a), ks[a].p, 0.0, int(std::lround(ks[a].n_eff))});
    }
    if (c.store_paths && q.n >= 2) {
      const auto fit = tightness_statistic(q, c.tightness_p);
      rows.push_back({"tightness_exponent", fit.exponent, 0.0, q.n});
    }
  } else {
    std::printf("drift ensemble skipped: the Girsanov drift is built for d = 2\n");
  }
  write_stats_csv((out / "stats.csv").string(), rows);
  files["stats.csv"] = file_hash(out / "stats.csv");
  json man = provenance(c, "polymer");
  man["bundle_manifest"] = file_hash(fs::path(bundle_dir(c, bundle)) / "manifest.json");
  man["c"] = cst;
  man["files"] = files;
  write_json(out / "manifest.json", man);
  std::printf("polymer: Z = %.6g +- %.2g, ESS/n = %.3f\n", w.Z, w.Z_se, w.ess() / w.n);
  return kOk;
}

int cmd_verify(const std::string& suite, const std::string& output) {
  const auto checks = verify::run_suite(suite);
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.pass;
    std::printf("%-28s %s  %s\n", c.id.c_str(), c.pass ? "PASS" : "FAIL", c.title.c_str());
  }
  const fs::path out = make_dir(fs::path(output) / "verify");
  write_json(out / (suite + ".json"), {{"suite", suite}, {"pass", ok}, {"checks", verify::to_json(checks)}});
  return ok ? kOk : kVerifyFailed;
}

int cmd_report(const std::string& output) {
  const fs::path root(output);
  if (!fs::is_directory(root)) throw IoError("no output directory " + output);
  std::vector<fs::path> all;
  for (const auto& ent : fs::recursive_directory_iterator(root))
    if (ent.is_regular_file() && ent.path() != root / "report.json") all.push_back(ent.path());
  std::sort(all.begin(), all.end());
  json files = json::array(), verify = json::object();
  for (const auto& p : all) {
    files.push_back({{"path", fs::relative(p, root).generic_string()},
                     {"bytes", fs::file_size(p)},
                     {"fnv1a", file_hash(p)}});
    if (p.parent_path().filename() == "verify" && p.extension() == ".json") {
      std::ifstream is(p);
      json v = json::parse(is, nullptr, false);
      if (!v.is_discarded()) verify[p.stem().string()] = v.value("pass", false);
    }
  }
  write_json(root / "report.json", {{"schema_version", cli::kSchemaVersion}, {"files", files}, {"verify", verify}});
  std::printf("report: %zu files", all.size());
  for (auto it = verify.begin(); it != verify.end(); ++it)
    std::printf(", %s %s", it.key().c_str(), it.value().get<bool>() ? "pass" : "FAIL");
  std::printf("\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paralab experiment runner"};
  app.require_subcommand(1);
  std::string config_path, out_dir, bundle;
  std::uint64_t seed = 0;
  int threads = 0;
  auto common = [&](CLI::App* sc, bool need_config) {
    auto* o = sc->add_option("--config", config_path, "experiment config (JSON)");
    if (need_config) o->required();
    sc->add_option("--seed", seed, "root seed, overrides the config");
    sc->add_option("--out", out_dir, "output directory, overrides the config");
    sc->add_option("--threads", threads, "worker threads")->check(CLI::NonNegativeNumber);
  };
  auto* gen = app.add_subcommand("gen-noise", "sample noise and build the enhancement bundle");
  common(gen, true);
  std::string which;
  auto* solve = app.add_subcommand("solve", "solve from an enhancement bundle");
  common(solve, true);
  solve->add_option("which", which, "generator | kpz | pam")
      ->required()
      ->check(CLI::IsMember({"generator", "kpz", "pam"}));
  solve->add_option("--bundle", bundle, "enhancement bundle directory");
  auto* poly = app.add_subcommand("polymer", "sample polymer ensembles and statistics");
  common(poly, true);
  poly->add_option("--bundle", bundle, "enhancement bundle directory");
  std::string suite;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  common(ver, false);
  ver->add_option("suite", suite, "bony | schauder | chaos | constants | consistency | girsanov")->required();
  auto* rep = app.add_subcommand("report", "summarize an output directory");
  common(rep, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }
  if (threads > 0) set_threads(threads);

  try {
    auto load = [&]() {
      ExperimentConfig c = cli::load_config(config_path);
      auto* sc = app.get_subcommands().front();
      if (sc->count("--seed")) c.seed = seed;
      if (!out_dir.empty()) c.output = out_dir;
      return c;
    };
    if (gen->parsed()) return cmd_gen_noise(load());
    if (solve->parsed()) return cmd_solve(load(), which, bundle);
    if (poly->parsed()) return cmd_polymer(load(), bundle);
    const std::string output = !out_dir.empty() ? out_dir : config_path.empty() ? "out" : load().output;
    if (ver->parsed()) {
      const auto& names = verify::suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::fprintf(stderr, "unknown suite '%s'\n%s", suite.c_str(), ver->help().c_str());
        return kInputError;
      }
      return cmd_verify(suite, output);
    }
    return cmd_report(output);
  } catch (const cli::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const NumericalFailure& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalFailure;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  }
}
