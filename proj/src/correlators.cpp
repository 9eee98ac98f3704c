#include "udw/correlators.hpp"

#include <cmath>

#include "udw/special_functions.hpp"

namespace udw::correlators {

namespace {

constexpr double kLargeArg = 300.0;

double half_aL(const Params& p) { return 0.5 * p.a * p.L; }
double root(const Params& p) { return std::sqrt(1.0 + half_aL(p) * half_aL(p)); }

void require_separation(const Params& p, const char* what) {
  if (!(p.L > 0.0)) throw std::domain_error(std::string(what) + ": requires L > 0");
}

// -(a^2/4pi^2) e^{-2|u|}, the exponential tail shared by both correlators
cd tail(cd u, double a) {
  const double pref = -a * a / (4.0 * pi * pi);
  return u.real() > 0.0 ? pref * std::exp(-2.0 * u) : pref * std::exp(2.0 * u);
}

}  // namespace

cd wightman_self(double s, const Params& p) {
  const cd u = 0.5 * p.a * cd(s, -p.epsilon);
  if (std::abs(u.real()) > kLargeArg) return tail(u, p.a);
  const cd sh = std::sinh(u);
  return -p.a * p.a / (16.0 * pi * pi) / (sh * sh);
}

cd wightman_cross(double s, const Params& p) {
  if (p.L == 0.0) return wightman_self(s, p);
  const cd u = 0.5 * p.a * cd(s, -p.epsilon);
  if (std::abs(u.real()) > kLargeArg) return tail(u, p.a);
  // sinh^2 u - sinh^2 u0 = sinh(u + u0) sinh(u - u0), free of cancellation at the light cone
  const double u0 = std::asinh(half_aL(p));
  return -p.a * p.a / (16.0 * pi * pi) / (std::sinh(u + u0) * std::sinh(u - u0));
}

double light_cone_lag(const Params& p) { return 2.0 * std::asinh(half_aL(p)) / p.a; }

EllPair ell_pair(double aL) {
  const double c = 0.5 * aL, r = std::sqrt(1.0 + c * c);
  return {c + r, -1.0 / (c + r)};
}

double c_s(const Params& p) { return p.a / (4.0 * pi * pi); }

double c_x(const Params& p) {
  require_separation(p, "c_x");
  return std::asinh(half_aL(p)) / (2.0 * pi * pi * p.L * root(p));
}

double k_x(const Params& p) {
  require_separation(p, "k_x");
  return -1.0 / (4.0 * pi * p.L * root(p));
}

double d_s_prime(const Params& p) {
  if (!(p.epsilon > 0.0)) throw std::domain_error("d_s_prime: requires epsilon > 0");
  return std::log(p.a * p.epsilon) / (2.0 * pi * pi);
}

double d_x_prime(const Params& p) {
  require_separation(p, "d_x_prime");
  const double lp = ell_pair(p.aL()).ell_plus;
  const double y = 1.0 / (lp * lp);  // ell_minus^2
  return special::dilog_reflection_difference(y) / (4.0 * pi * pi * p.aL() * root(p));
}

double s_s_prime() { return -1.0 / (4.0 * pi); }

double s_x_prime(const Params& p) {
  require_separation(p, "s_x_prime");
  // 2 int Im[W_x(s)] s ds, the slope of S_x(omega) at omega = 0
  return -std::asinh(half_aL(p)) / (2.0 * pi * p.aL() * root(p));
}

CorrelatorConstants constants(const Params& p) {
  p.validate(true);
  require_separation(p, "constants");
  CorrelatorConstants c;
  c.c_s = c_s(p);
  c.c_x = c_x(p);
  c.k_x = k_x(p);
  c.d_s_prime = d_s_prime(p);
  c.d_x_prime = d_x_prime(p);
  c.s_s_prime = s_s_prime();
  c.s_x_prime = s_x_prime(p);
  return c;
}

double fourier_sine_cross(double omega, const Params& p) {
  require_separation(p, "fourier_sine_cross");
  if (omega < 0.0) throw std::domain_error("fourier_sine_cross: omega must be >= 0");
  return -std::sin(omega * light_cone_lag(p)) / (4.0 * pi * p.L * root(p));
}

double fourier_cosine_cross(double omega, const Params& p) {
  require_separation(p, "fourier_cosine_cross");
  if (omega < 0.0) throw std::domain_error("fourier_cosine_cross: omega must be >= 0");
  if (omega == 0.0) return c_x(p);
  // detailed balance: C_x = -coth(pi omega/a) S_x
  return -fourier_sine_cross(omega, p) / std::tanh(pi * omega / p.a);
}

double single_detector_C(double omega, const Params& p) {
  if (omega < 0.0) throw std::domain_error("single_detector_C: omega must be >= 0");
  if (omega == 0.0) return c_s(p);
  return omega / (4.0 * pi) / std::tanh(pi * omega / p.a);
}

double single_detector_D(double omega, const Params& p) {
  if (!(omega > 0.0)) throw std::domain_error("single_detector_D: omega must be > 0");
  return omega / (2.0 * pi * pi) *
         (euler_gamma + std::log(p.a * p.epsilon) + special::digamma_re_imag_axis(omega / p.a));
}

}  // namespace udw::correlators
