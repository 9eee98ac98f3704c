#pragma once

#include "udw/core_types.hpp"

namespace udw::correlators {

struct CorrelatorConstants {
  double c_s = 0.0;
  double c_x = 0.0;
  double k_x = 0.0;
  double d_s_prime = 0.0;
  double d_x_prime = 0.0;
  double s_s_prime = 0.0;
  double s_x_prime = 0.0;
};

struct EllPair {
  double ell_plus = 0.0;
  double ell_minus = 0.0;
};

// W_s(s) = -(a^2/16 pi^2) / sinh^2[a(s - i eps)/2]
cd wightman_self(double s, const Params& p);
// W_x(s) = -(a^2/16 pi^2) / (sinh^2[a(s - i eps)/2] - (aL/2)^2); L = 0 falls back to W_s.
cd wightman_cross(double s, const Params& p);

// Proper-time lag of the light-cone spike of W_x: 2 asinh(aL/2)/a.
double light_cone_lag(const Params& p);

EllPair ell_pair(double aL);

double c_s(const Params& p);
double c_x(const Params& p);
double k_x(const Params& p);
double d_s_prime(const Params& p);
double d_x_prime(const Params& p);
double s_s_prime();
double s_x_prime(const Params& p);

// All seven; requires L > 0 (std::domain_error otherwise).
CorrelatorConstants constants(const Params& p);

// S_x(omega) = 2 int Im W_x sin(omega s), C_x(omega) = 2 int Re W_x cos(omega s).
double fourier_sine_cross(double omega, const Params& p);
double fourier_cosine_cross(double omega, const Params& p);

// Single-detector transforms: C = (omega/4pi) coth(pi omega/a),
// D = (omega/2pi^2)[log(e^gamma a eps) + Re psi(-i omega/a)].
double single_detector_C(double omega, const Params& p);
double single_detector_D(double omega, const Params& p);

}  // namespace udw::correlators
