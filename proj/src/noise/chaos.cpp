#include "paralab/chaos.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "paralab/errors.hpp"
#include "paralab/partition.hpp"

namespace paralab {

ChaosTerm parse_chaos_term(std::string_view tag) {
  if (tag == "X") return ChaosTerm::X;
  if (tag == "tree12") return ChaosTerm::Tree12;
  if (tag == "tree12_mean") return ChaosTerm::Tree12Mean;
  if (tag == "QgradX_mean") return ChaosTerm::QgradXMean;
  throw InvalidArgument("unknown chaos term tag: " + std::string(tag));
}

namespace {

double e1(double z) { return std::abs(z) < 1e-12 ? 1.0 - 0.5 * z : -std::expm1(-z) / z; }

}  // namespace

double exp_conv(double lambda, double mu, double t) {
  if (lambda < mu) std::swap(lambda, mu);
  return t * std::exp(-mu * t) * e1((lambda - mu) * t);
}

double kernel_F(double k2, double mk, double t) {
  if (k2 == 0) return 0.0;
  return -mk * 2.0 * std::expm1(-0.5 * k2 * t) / k2;
}

double kernel_F12(double k2, double k1sq, double k2sq, double m1, double m2, double t) {
  if (k1sq == 0 || k2sq == 0) return 0.0;
  const double lam = 0.5 * k2, a = 0.5 * k1sq, b = 0.5 * k2sq;
  const double c = 4.0 * m1 * m2 / (k1sq * k2sq);
  return c * (exp_conv(lam, 0, t) - exp_conv(lam, a, t) - exp_conv(lam, b, t) + exp_conv(lam, a + b, t));
}

namespace {

// Q = I(grad X): Q^j(k) = i k_j FQ_t(k) xi(k), FQ_t = int_0^t e^{-|k|^2(t-s)/2} F_s(k) ds
double kernel_FQ(double k2, double mk, double t) {
  if (k2 == 0) return 0.0;
  const double lam = 0.5 * k2;
  return mk * 2.0 / k2 * (exp_conv(lam, 0, t) - exp_conv(lam, lam, t));
}

}  // namespace

double chaos_variance_oracle(ChaosTerm term, int q, double s, double t, const Mollifier& m, double eps,
                             const Lattice& lat) {
  if (lat.d != 3 || lat.n > 16) throw InvalidArgument("chaos oracle restricted to d = 3, N <= 16");
  if (s < 0 || t < s) throw InvalidArgument("chaos oracle needs 0 <= s <= t");
  auto part = build_partition(lat);
  auto tb = tables(lat);
  if ((term == ChaosTerm::X || term == ChaosTerm::Tree12) && (q < -1 || q > part->jmax))
    throw InvalidArgument("chaos oracle: block index out of range");
  const std::size_t n = lat.size();
  std::vector<double> mk(n);
  std::vector<std::size_t> supp;
  for (std::size_t i = 0; i < n; ++i) {
    mk[i] = tb->nyquist[i] ? 0.0 : m(eps * std::sqrt(tb->k2[i]));
    if (mk[i] != 0.0 && tb->k2[i] != 0) supp.push_back(i);
  }

  switch (term) {
    case ChaosTerm::X: {
      const auto& rq = part->block(q);
      double sum = 0;
      for (std::size_t i : supp) {
        const double f = kernel_F(tb->k2[i], mk[i], t) - kernel_F(tb->k2[i], mk[i], s);
        sum += rq[i] * rq[i] * f * f;
      }
      return sum;
    }
    case ChaosTerm::Tree12: {
      const auto& rq = part->block(q);
      double sum = 0;
      for (std::size_t a : supp)
        for (std::size_t b : supp) {
          const Wave& k1 = tb->k[a];
          const Wave& k2 = tb->k[b];
          Wave k{k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]};
          bool inside = true;
          double ksq = 0;
          for (int ax = 0; ax < 3; ++ax) {
            inside = inside && std::abs(k[ax]) < lat.n / 2;
            ksq += double(k[ax]) * k[ax];
          }
          if (!inside || ksq == 0) continue;
          const double w = rq[lat.index(k)];
          if (w == 0) continue;
          const double dot = double(k1[0]) * k2[0] + double(k1[1]) * k2[1] + double(k1[2]) * k2[2];
          const double f = kernel_F12(ksq, tb->k2[a], tb->k2[b], mk[a], mk[b], t) -
                           kernel_F12(ksq, tb->k2[a], tb->k2[b], mk[a], mk[b], s);
          sum += w * w * f * f * dot * dot;
        }
      return 2.0 * sum;
    }
    case ChaosTerm::Tree12Mean: {
      double sum = 0;
      for (std::size_t a : supp) {
        const double k1sq = tb->k2[a];
        sum += k1sq * (kernel_F12(0.0, k1sq, k1sq, mk[a], mk[a], t) -
                       kernel_F12(0.0, k1sq, k1sq, mk[a], mk[a], s));
      }
      return sum;
    }
    case ChaosTerm::QgradXMean: {
      // E[(d_i Q^j o d_i X)(x)] = i sum_k psi(k,-k) k_i^2 k_j FQ_t(k) F_t(k)
      std::vector<double> psi(n, 0.0);
      for (int a = -1; a <= part->jmax; ++a)
        for (int b = std::max(-1, a - 1); b <= std::min(part->jmax, a + 1); ++b) {
          const auto& ra = part->block(a);
          const auto& rb = part->block(b);
          for (std::size_t i : supp) psi[i] += ra[i] * rb[tb->neg[i]];
        }
      double worst = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double sum = 0;
          for (std::size_t p : supp) {
            const Wave& k = tb->k[p];
            sum += psi[p] * double(k[i]) * k[i] * k[j] * kernel_FQ(tb->k2[p], mk[p], t) *
                   kernel_F(tb->k2[p], mk[p], t);
          }
          worst = std::max(worst, std::abs(sum));
        }
      return worst;
    }
  }
  return 0.0;
}

}  // namespace paralab
