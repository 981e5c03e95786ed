#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "paralab/evaluate.hpp"
#include "paralab/generator.hpp"
#include "paralab/noise.hpp"

namespace paralab {

using Point = std::array<double, 3>;

// Positions are stored unwrapped (increments are never wrapped); wrap onto
// [0, 2 pi) when evaluating fields or comparing distributions.
struct PathEnsemble {
  int d = 2;
  int n = 0;
  int steps = 0;
  double T = 0, dt = 0;
  std::uint64_t seed = 0;
  std::string stream;
  std::string drift_id;
  bool stored_paths = false;
  std::vector<double> paths;      // n * (steps + 1) * d, present when stored_paths
  std::vector<double> endpoints;  // n * d, unwrapped
  std::vector<double> weights;    // n, unnormalized, scaled by exp(-log_scale)
  double log_scale = 0;
  double Z = 1, Z_se = 0;         // mean of the unscaled weights and its standard error

  double pos(int i, int step, int a) const { return paths[(std::size_t(i) * (steps + 1) + step) * d + a]; }
  double endpoint(int i, int a) const { return endpoints[std::size_t(i) * d + a]; }
  std::vector<double> normalized_weights() const;
  double ess() const;  // (sum w)^2 / sum w^2
};

double wrap_torus(double x);

// Brownian paths from x0 with weights exp(int_0^T xi(B_s) ds - c T), trapezoid
// quadrature on the path steps. One RNG stream per path.
PathEnsemble sample_wiener_reweighted(const FourierField& xi, double c, double T, const Point& x0, int n, double dt,
                                      std::uint64_t seed, bool store_paths = true);

// V(t, x) = grad h(T - t, x) for h given on a forward time grid of horizon T.
// Spatial multilinear interpolation of tabulated gradients on a grid refined
// by `refine`, linear interpolation in time.
class DriftField {
 public:
  DriftField() = default;
  DriftField(const SpaceTimeField& h, int refine = 2, std::string id = "");
  static DriftField constant(const Lattice& lat, const TimeGrid& g, const Point& c);
  // A d-vector field V(t, x) given directly in forward time.
  static DriftField from_vector(const SpaceTimeField& V, int refine = 2, std::string id = "");

  int dim() const { return d_; }
  double T() const { return grid_.T; }
  const std::string& id() const { return id_; }
  void eval(double t, const double* x, double* out) const;
  // Largest |d_1 V^2 - d_2 V^1| by centered differences of the interpolant on
  // the tabulation grid (d >= 2).
  double max_curl(int node) const;

 private:
  int d_ = 2, g_ = 0;
  bool reversed_ = true;
  TimeGrid grid_;
  std::string id_;
  std::vector<std::vector<std::vector<double>>> tab_;  // node -> component -> values
};

DriftField drift_from_pam(const FourierField& xi, double c, const TimeGrid& grid, int refine = 2);

// Euler-Maruyama for dX = V(t, X) dt + dB with unit weights.
PathEnsemble girsanov_drift_sim(const DriftField& drift, double T, const Point& x0, int n, double dt,
                                std::uint64_t seed, bool store_paths = true);

struct TightnessFit {
  std::vector<double> lags, moments, stderrs;
  double exponent = 0;  // least-squares slope of log moment vs log lag
};
TightnessFit tightness_statistic(const PathEnsemble& e, double p, int max_lag = 0);

struct MartingaleRow {
  double s = 0, t = 0;
  int bin = 0;
  int count = 0;
  double mean = 0, se = 0, z = 0;
};
struct MartingaleReport {
  std::vector<MartingaleRow> rows;
  double max_abs_z = 0;
};
// M_t = u(t, X_t) + int_0^t f(s, X_s) ds for the generator solution u of the
// mild problem with forcing f (see generator.hpp); binned by the quadrant of
// the wrapped X_s. Path steps must refine the solution grid.
MartingaleReport martingale_check(const PathEnsemble& e, const SpaceTimeField& u, const SpaceTimeField& f,
                                  int min_count = 50);

struct KsResult {
  double D = 0, p = 1;
  double n_eff = 0;
};
// Two-sample Kolmogorov-Smirnov with weighted empirical distributions;
// effective sizes (sum w)^2 / sum w^2.
KsResult ks_two_sample(const std::vector<double>& x, const std::vector<double>& wx, const std::vector<double>& y,
                       const std::vector<double>& wy);
double kolmogorov_survival(double lambda);
// KS per coordinate of the wrapped endpoints.
std::vector<KsResult> endpoint_ks(const PathEnsemble& a, const PathEnsemble& b);

struct WeightedMean {
  double value = 0, se = 0;
};
// Self-normalized estimate of E[phi(X_T)] with the ensemble weights.
WeightedMean endpoint_expectation(const PathEnsemble& e, double (*phi)(const double*, int));

struct SingularityRow {
  int N = 0;
  double estimate = 0, se = 0;
  double proxy = 0;
  double c12 = 0, c124 = 0;
  double ess = 0;  // of the weights W^delta
};
struct SingularityOptions {
  int noise_n = 128;
  double T = 0.05;
  double delta = 0.5;
  int paths = 10000;
  double dt = 1e-3;
  int pam_steps = 50;
  int refine = 8;
  std::uint64_t seed = 0;
  Mollifier mollifier = Mollifier::bump();
  Point x0{0, 0, 0};
};
// E_W[Y_N^delta] with Y_N = exp(int xi^N) / Z_N for xi^N = white noise on the
// noise lattice mollified at eps = 1/N, using common paths for every N. The
// proxy evaluates exp((c(delta xi) - delta c(xi)) T + h_delta - delta h) from two PAM solves.
std::vector<SingularityRow> singularity_statistic(const std::vector<int>& Ns, const SingularityOptions& o);

// Ensemble file: magic, JSON header, weights, endpoints, optional paths.
void write_ensemble(const std::string& path, const PathEnsemble& e);
PathEnsemble read_ensemble(const std::string& path);

struct StatRow {
  std::string stat;
  double value = 0, se = 0;
  long n = 0;
};
void write_stats_csv(const std::string& path, const std::vector<StatRow>& rows);

}  // namespace paralab
