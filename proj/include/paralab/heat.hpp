#pragma once

#include <memory>
#include <vector>

#include "paralab/besov.hpp"
#include "paralab/spacetime.hpp"

namespace paralab {

// P_t u: multiply mode k by exp(-t |k|^2 / 2).
FourierField heat_flow(const FourierField& u, double t);

// Exponential time differencing with f linear on [t, t + dt]. Per mode
// lambda = |k|^2/2, z = lambda dt:
//   E  = e^{-z}
//   w0 = int_0^dt e^{-lambda(dt-s)} (1 - s/dt) ds   (weight of the far end)
//   w1 = int_0^dt e^{-lambda(dt-s)} s/dt ds         (weight of the near end)
class EtdStepper {
 public:
  EtdStepper(const Lattice& lat, double dt);

  double dt() const { return dt_; }
  // I(t + dt) = E I(t) + w0 f(t) + w1 f(t + dt)
  void forward(const FourierField& prev, const FourierField& f0, const FourierField& f1,
               FourierField& out) const;
  // J(t) = E J(t + dt) + w1 f(t) + w0 f(t + dt)
  void backward(const FourierField& next, const FourierField& f0, const FourierField& f1,
                FourierField& out) const;
  void decay(FourierField& u) const;  // u <- E u

  const std::vector<double>& E() const { return e_; }
  const std::vector<double>& w0() const { return w0_; }
  const std::vector<double>& w1() const { return w1_; }

 private:
  Lattice lat_;
  double dt_;
  std::vector<double> e_, w0_, w1_;
};

std::shared_ptr<const EtdStepper> etd_stepper(const Lattice& lat, double dt);

// I(f)(t_m) at every node.
SpaceTimeField duhamel_forward_all(const SpaceTimeField& f);
FourierField duhamel_forward(const SpaceTimeField& f, double t);
// J^T(f)(t_m) at every node, T the final node.
SpaceTimeField duhamel_backward_all(const SpaceTimeField& f);
// J^T(f)(t) with T any node >= t (integration over [t, T] only).
FourierField duhamel_backward(const SpaceTimeField& f, double t, double T);

// max over node pairs of ||u(t) - u(s)||_target / |t - s|^rho.
double hoelder_time_norm(const SpaceTimeField& u, double rho, const BesovSpec& target);

struct SchauderCommutatorReport {
  double max_ratio = 0.0;
  std::vector<double> times;
  std::vector<double> ratios;
};
// || P_t(f < g) - f < P_t g ||_{alpha+beta+2 theta} t^theta / (||f||_alpha ||g||_beta).
SchauderCommutatorReport schauder_commutator_check(const FourierField& f, const FourierField& g,
                                                   const std::vector<double>& times, double alpha,
                                                   double beta, double theta);

}  // namespace paralab
