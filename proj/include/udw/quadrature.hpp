#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace udw::quad {

struct Tolerance {
  double rel = 1e-12;
  unsigned max_depth = 30;
};

// Adaptive Gauss-Kronrod (31 point) on [lo, hi].
double integrate(const std::function<double(double)>& f, double lo, double hi, Tolerance tol = {});

// Same, split at the sorted interior breakpoints that fall strictly inside (lo, hi).
double integrate_with_breaks(const std::function<double(double)>& f, double lo, double hi,
                             std::vector<double> breaks, Tolerance tol = {});

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double lo,
                                       double hi, std::vector<double> breaks = {}, Tolerance tol = {});

// Richardson limit for f(h) = L + c1 h + c2 h^2 from samples at h, h/2, h/4.
double richardson3(double f_h, double f_h2, double f_h4);

}  // namespace udw::quad
