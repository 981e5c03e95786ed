#include "config.hpp"

#include <cmath>
#include <fstream>

#include "paralab/errors.hpp"

namespace paralab::cli {

using nlohmann::json;

namespace {

template <class T>
void take(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

const json& section(const json& j, const char* key) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) throw ConfigError(std::string("config: '") + key + "' must be an object");
  return j.at(key);
}

}  // namespace

GeneratorExponents ExperimentConfig::exponents_for_regime() const {
  if (generator_exponents) return *generator_exponents;
  return regime == Regime::Rough ? default_rough_exponents() : default_young_exponents();
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
  if (j.at("schema_version") != kSchemaVersion)
    throw ConfigError("config: unsupported schema_version " + j.at("schema_version").dump());
  ExperimentConfig c;
  c.raw = j;
  take(j, "experiment", c.experiment);
  take(j, "seed", c.seed);
  take(j, "output", c.output);

  const auto& g = section(j, "grid");
  take(g, "d", c.lattice.d);
  take(g, "N", c.lattice.n);
  take(g, "T", c.grid.T);
  take(g, "M", c.grid.M);

  const auto& n = section(j, "noise");
  take(n, "mollifier", c.mollifier);
  take(n, "eps", c.eps);
  take(n, "lambda", c.lambda);

  const auto& s = section(j, "solver");
  take(s, "tol", c.tol);
  take(s, "max_iter", c.max_iter);
  take(s, "pam_substeps", c.pam_substeps);

  const auto& e = section(j, "exponents");
  if (e.contains("kpz")) {
    const auto& k = section(e, "kpz");
    take(k, "alpha", c.kpz_exponents.alpha);
    take(k, "varrho", c.kpz_exponents.varrho);
    take(k, "beta", c.kpz_exponents.beta);
    take(k, "gamma", c.kpz_exponents.gamma);
    take(k, "delta", c.kpz_exponents.delta);
  }

  const auto& gen = section(j, "generator");
  std::string regime = "rough";
  take(gen, "regime", regime);
  if (regime == "rough") c.regime = Regime::Rough;
  else if (regime == "young") c.regime = Regime::Young;
  else throw ConfigError("config: generator.regime must be 'rough' or 'young'");
  if (e.contains("generator")) {
    GeneratorExponents ge = c.regime == Regime::Rough ? default_rough_exponents() : default_young_exponents();
    const auto& x = section(e, "generator");
    take(x, "alpha", ge.alpha);
    take(x, "theta", ge.theta);
    take(x, "rho", ge.rho);
    take(x, "gamma", ge.gamma);
    take(x, "beta", ge.beta);
    c.generator_exponents = ge;
  }
  take(gen, "drift", c.drift);
  take(gen, "forcing", c.forcing);
  if (gen.contains("terminal")) {
    c.terminal.clear();
    try {
      for (const auto& m : gen.at("terminal")) {
        CosineMode cm;
        const auto k = m.at("k").get<std::vector<int>>();
        if (k.empty() || k.size() > 3) throw ConfigError("config: terminal mode needs 1 to 3 wave numbers");
        for (std::size_t a = 0; a < k.size(); ++a) cm.k[a] = k[a];
        cm.amp = m.at("amp").get<double>();
        c.terminal.push_back(cm);
      }
    } catch (const json::exception&) {
      throw ConfigError("config: generator.terminal must be a list of {k, amp}");
    }
  }

  const auto& mc = section(j, "mc");
  take(mc, "paths", c.paths);
  take(mc, "dt", c.dt);
  take(mc, "store_paths", c.store_paths);
  take(mc, "tightness_p", c.tightness_p);
  take(mc, "drift_refine", c.drift_refine);
  if (mc.contains("x0")) {
    std::vector<double> x;
    take(mc, "x0", x);
    if (x.empty() || x.size() > 3) throw ConfigError("config: mc.x0 needs 1 to 3 coordinates");
    c.x0 = {0, 0, 0};
    for (std::size_t a = 0; a < x.size(); ++a) c.x0[a] = x[a];
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& ex) {
    throw ConfigError("config " + path + " is not valid JSON: " + ex.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& c) {
  try {
    validate_dyadic(c.lattice);
    paralab::validate(c.grid);
    Mollifier::parse(c.mollifier);
    validate(c.kpz_exponents);
    if (c.generator_exponents) validate_exponents(c.regime, *c.generator_exponents);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(c.eps > 0)) throw ConfigError("config: noise.eps must be positive");
  if (!(c.lambda > 0)) throw ConfigError("config: noise.lambda must be positive");
  if (!(c.tol > 0) || c.max_iter < 1) throw ConfigError("config: solver tolerances must be positive");
  if (c.pam_substeps < 1) throw ConfigError("config: solver.pam_substeps must be >= 1");
  if (c.drift != "polymer" && c.drift != "zero") throw ConfigError("config: generator.drift must be polymer or zero");
  if (c.forcing != "zero" && c.forcing.rfind("drift:", 0) != 0)
    throw ConfigError("config: generator.forcing must be 'zero' or 'drift:<k>'");
  if (c.paths < 1 || !(c.dt > 0)) throw ConfigError("config: mc.paths and mc.dt must be positive");
  if (!(c.tightness_p > 0)) throw ConfigError("config: mc.tightness_p must be positive");
  if (c.drift_refine < 1) throw ConfigError("config: mc.drift_refine must be >= 1");
}

}  // namespace paralab::cli
