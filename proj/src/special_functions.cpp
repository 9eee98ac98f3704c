#include "udw/special_functions.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "udw/core_types.hpp"

namespace udw::special {

namespace {

constexpr double pi2_6 = pi * pi / 6.0;

// |z| <= 1/2: direct power series, ~55 terms at the edge.
double dilog_series(double z) {
  double sum = 0.0, zk = z;
  for (int k = 1; k < 200; ++k) {
    const double term = zk / (double(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    zk *= z;
  }
  return sum;
}

}  // namespace

double dilog(double z) {
  if (std::isnan(z)) throw std::domain_error("dilog: NaN argument");
  if (z > 1.0) throw std::domain_error("dilog: argument above the branch point");
  if (z == 1.0) return pi2_6;
  if (z == 0.0) return 0.0;
  if (std::abs(z) <= 0.5) return dilog_series(z);
  if (z > 0.5) return pi2_6 - std::log(z) * std::log1p(-z) - dilog_series(1.0 - z);
  if (z >= -1.0) {
    // Landen: z/(z-1) lies in (1/3, 1/2]
    const double l = std::log1p(-z);
    return -dilog_series(z / (z - 1.0)) - 0.5 * l * l;
  }
  // inversion to 1/z in (-1, 0)
  const double l = std::log(-z);
  return -pi2_6 - 0.5 * l * l - dilog(1.0 / z);
}

double dilog_reflection_difference(double y) {
  if (!(y > 0.0 && y <= 1.0)) throw std::domain_error("dilog_reflection_difference: y must lie in (0, 1]");
  // Re Li2(x) = pi^2/3 - ln^2(x)/2 - Li2(1/x) for x > 1
  const double l = std::log(y);
  return 2.0 * dilog(y) - pi * pi / 3.0 + 0.5 * l * l;
}

double digamma_re_imag_axis(double x) {
  if (std::isnan(x)) throw std::domain_error("digamma_re_imag_axis: NaN argument");
  if (x == 0.0) throw std::domain_error("digamma_re_imag_axis: pole at 0");
  // Re psi(-ix) = Re psi(ix) = Re psi(1 + ix), since 1/(ix) is imaginary.
  using cdd = std::complex<double>;
  cdd z(1.0, std::abs(x));
  cdd shift = 0.0;
  while (std::abs(z) < 15.0) {
    shift += 1.0 / z;
    z += 1.0;
  }
  // asymptotic series, Bernoulli numbers B_2..B_14
  static const double b[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6};
  const cdd w2 = 1.0 / (z * z);
  cdd wp = w2, tail = 0.0;
  for (int n = 1; n <= 7; ++n) {
    tail += b[n - 1] / (2.0 * n) * wp;
    wp *= w2;
  }
  const cdd psi = std::log(z) - 0.5 / z - tail - shift;
  return psi.real();
}

}  // namespace udw::special
