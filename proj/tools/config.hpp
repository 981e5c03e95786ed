#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "paralab/generator.hpp"
#include "paralab/kpz.hpp"

namespace paralab::cli {

inline constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CosineMode {
  std::array<int, 3> k{0, 0, 0};
  double amp = 1.0;
};

struct ExperimentConfig {
  std::string experiment = "default";
  std::uint64_t seed = 0;
  Lattice lattice{2, 32};
  TimeGrid grid{0.1, 20};
  std::string mollifier = "bump";
  double eps = 0.25;
  double lambda = 0.5;

  // solvers
  double tol = 1e-9;
  int max_iter = 200;
  int pam_substeps = 2;
  KpzExponents kpz_exponents;
  Regime regime = Regime::Rough;
  std::optional<GeneratorExponents> generator_exponents;
  std::string drift = "polymer";  // polymer | zero
  std::vector<CosineMode> terminal{{{1, 0, 0}, 1.0}};
  std::string forcing = "zero";   // zero | drift:<k>

  // Monte Carlo
  int paths = 2000;
  double dt = 1e-3;
  std::array<double, 3> x0{3.141592653589793, 3.141592653589793, 0.0};
  bool store_paths = true;
  double tightness_p = 2.0;
  int drift_refine = 4;

  std::string output = "out";
  nlohmann::json raw;  // the parsed document, for hashing

  GeneratorExponents exponents_for_regime() const;
};

// Missing keys keep their defaults; wrong types, unknown schema versions and
// invalid values raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& c);

}  // namespace paralab::cli
