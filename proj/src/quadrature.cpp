#include "udw/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace udw::quad {

double integrate(const std::function<double(double)>& f, double lo, double hi, Tolerance tol) {
  if (hi == lo) return 0.0;
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, tol.max_depth,
                                                                                 tol.rel, &err, &l1);
  if (!std::isfinite(v)) throw std::runtime_error("quadrature: non-finite result");
  return v;
}

double integrate_with_breaks(const std::function<double(double)>& f, double lo, double hi,
                             std::vector<double> breaks, Tolerance tol) {
  std::vector<double> pts{lo};
  std::sort(breaks.begin(), breaks.end());
  for (double b : breaks)
    if (b > lo && b < hi && b > pts.back()) pts.push_back(b);
  pts.push_back(hi);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += integrate(f, pts[i], pts[i + 1], tol);
  return sum;
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double lo,
                                       double hi, std::vector<double> breaks, Tolerance tol) {
  const double re = integrate_with_breaks([&](double s) { return f(s).real(); }, lo, hi, breaks, tol);
  const double im = integrate_with_breaks([&](double s) { return f(s).imag(); }, lo, hi, breaks, tol);
  return {re, im};
}

double richardson3(double f_h, double f_h2, double f_h4) {
  const double a1 = 2.0 * f_h2 - f_h;
  const double a2 = 2.0 * f_h4 - f_h2;
  return (4.0 * a2 - a1) / 3.0;
}

}  // namespace udw::quad
