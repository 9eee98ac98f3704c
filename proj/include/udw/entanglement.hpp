#pragma once

#include <vector>

#include "udw/core_types.hpp"

namespace udw::entanglement {

inline constexpr double negativity_floor = 1e-12;

struct NegativitySeries {
  std::vector<double> taus;
  std::vector<double> values;
  SolverTag solver = SolverTag::markov;
};

// (rho^{T_A})_{(i,j),(k,l)} = rho_{(k,j),(i,l)}, composite index (A, B).
Mat4c partial_transpose_a(const Mat4c& rho);

// Eigenvalues of the partial transpose (Hermitian, so real).
Eigen::Vector4d partial_transpose_spectrum(const Mat4c& rho);

// (||rho^{T_A}||_1 - 1)/2, values below the floor reported as 0.
// Throws invalid_state if the trace deviates from 1 by more than 1e-8.
double negativity(const DensityMatrix4& rho);

NegativitySeries negativity_series(const TimeSeries& series);

// a - b pointwise; grids must match exactly.
std::vector<double> delta_negativity(const NegativitySeries& a, const NegativitySeries& b);

}  // namespace udw::entanglement
