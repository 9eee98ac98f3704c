#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "udw/core_types.hpp"

namespace udw::nonmarkov {

struct NonMarkovConfig {
  double h = 0.0;        // step; 0 picks min(0.02/a, 0.02/omega)
  double tau_max = 0.0;  // horizon
  std::optional<double> epsilon;  // overrides Params::epsilon inside W
  double memory_cutoff = 40.0;    // memory kept for s <= memory_cutoff / a
  std::size_t sample_every = 1;   // store every n-th step

  // Resolved step; throws std::invalid_argument on a bad configuration.
  double step(const Params& p) const;
};

// Step weights for int_{t_n}^{t_{n+1}} dt int_0^t ds w(s) f(t - s) with f
// piecewise linear on the grid t_m = m h and w integrated exactly:
//   sum_m weight(n - m) f(t_m), m = 0 .. n + 1,
// where weight(d) = h int B(s/h - d) w(s) ds and B is the box-hat convolution
// (quadratic B-spline on [-1, 2]). The m = 0 point only carries its right
// half-hat, which subtracts boundary(n). The kernel is cut at s = cutoff.
class StepWeights {
 public:
  StepWeights() = default;
  StepWeights(const std::function<cd(double)>& w, double h, double cutoff, std::vector<double> breaks);

  // d >= -1; zero beyond the cut
  cd weight(long d) const {
    const auto i = static_cast<std::size_t>(d + 1);
    return i < full_.size() ? full_[i] : cd(0);
  }
  cd boundary(long d) const {
    const auto i = static_cast<std::size_t>(d);
    return i < left_.size() ? left_[i] : cd(0);
  }
  // largest lag with a nonzero weight
  long max_lag() const { return static_cast<long>(full_.size()) - 2; }

 private:
  std::vector<cd> full_, left_;
};

struct NzSolution {
  std::vector<double> taus;
  std::vector<Mat4c> rho_interaction;
};

// Full operator-form second-order NZ equation in the interaction picture:
// d rho/d tau = g^2 int_0^tau ds sum_jk (W_jk(s)[mu_j(tau - s) rho(tau - s), mu_k(tau)] + h.c.)
// rho0 need not have unit trace (block-restricted runs embed traceless data).
NzSolution integrate_nz(const Params& p, const NonMarkovConfig& cfg, const Mat4c& rho0_interaction);

struct XSamples {
  std::vector<double> taus;
  std::vector<XVector> x;
};
struct OSamples {
  std::vector<double> taus;
  std::vector<OVector> y;
};

XSamples integrate_nz_x(const Params& p, const NonMarkovConfig& cfg, const XVector& x0_interaction);
OSamples integrate_nz_o(const Params& p, const NonMarkovConfig& cfg, const OVector& y0_interaction);

TimeSeries to_time_series(const Params& p, const NzSolution& sol);

// The kernel integrand without the g^2 prefactor.
Mat4c operator_integrand(double omega, const Mat4c& rho_past, double tau, double s, cd w_self, cd w_cross);

// The component integrands exactly as tabulated for the X and O blocks
// (interaction picture, no g^2 prefactor).
struct PrintedX {
  cd d11, d22, d33, d14, d23;
};
struct PrintedO {
  cd d12, d13, d24, d34;
};
PrintedX printed_integrand_x(double omega, const Mat4c& rho_past, double tau, double s, cd w_self, cd w_cross);
PrintedO printed_integrand_o(double omega, const Mat4c& rho_past, double tau, double s, cd w_self, cd w_cross);
// Operator form minus tabulated form for the rho23 component.
cd rho23_correction(double omega, const Mat4c& rho_past, double s, cd w_cross);

struct GapReport {
  std::vector<double> taus;
  std::vector<double> gap;  // max entrywise |rho_nz - rho_markov|, Schrodinger picture
  double max_gap = 0.0;     // over the window
  double window_lo = 0.0;
  double window_hi = 0.0;
};

GapReport markovianity_gap(const Params& p, const NonMarkovConfig& cfg, const DensityMatrix4& rho0,
                           double window_lo, double window_hi);

struct AliceSolution {
  std::vector<double> taus;
  std::vector<cd> rho12;
};

// Single-detector off-diagonal NZ equation (interaction picture); with the
// counter-term i g^2 D(omega) rho12 when requested.
AliceSolution integrate_nz_alice(const Params& p, const NonMarkovConfig& cfg, cd rho12_0, bool counterterm);

}  // namespace udw::nonmarkov
