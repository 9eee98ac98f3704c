#pragma once

namespace udw::special {

// Real dilogarithm Li2(z) for z <= 1. Throws std::domain_error outside.
double dilog(double z);

// Re[Li2(y) - Li2(1/y)] for y in (0, 1]; the second term is taken on the
// principal branch above the cut, whose real part is well defined.
double dilog_reflection_difference(double y);

// Re psi(-i x) for real x != 0 (digamma on the imaginary axis).
double digamma_re_imag_axis(double x);

}  // namespace udw::special
