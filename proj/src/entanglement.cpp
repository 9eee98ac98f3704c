#include "udw/entanglement.hpp"

#include <cmath>

namespace udw::entanglement {

Mat4c partial_transpose_a(const Mat4c& rho) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = rho(2 * k + j, 2 * i + l);
  return out;
}

Eigen::Vector4d partial_transpose_spectrum(const Mat4c& rho) {
  const Mat4c pt = partial_transpose_a(rho);
  Eigen::SelfAdjointEigenSolver<Mat4c> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double negativity(const DensityMatrix4& rho) {
  const Mat4c& m = rho.matrix();
  if (!m.allFinite()) throw invalid_state("negativity: non-finite state");
  if (std::abs(m.trace() - 1.0) > 1e-8) throw invalid_state("negativity: trace deviates from 1");
  const Eigen::Vector4d ev = partial_transpose_spectrum(m);
  // sum |l| / 2 - 1/2 equals the magnitude of the negative eigenvalues for unit trace
  double neg = 0.0;
  for (int k = 0; k < 4; ++k)
    if (ev(k) < 0.0) neg -= ev(k);
  return neg < negativity_floor ? 0.0 : neg;
}

NegativitySeries negativity_series(const TimeSeries& series) {
  series.validate();
  NegativitySeries out;
  out.taus = series.taus;
  out.solver = series.solver;
  out.values.reserve(series.states.size());
  for (const auto& s : series.states) out.values.push_back(negativity(s));
  return out;
}

std::vector<double> delta_negativity(const NegativitySeries& a, const NegativitySeries& b) {
  if (a.taus != b.taus) throw std::invalid_argument("delta_negativity: tau grids differ");
  std::vector<double> d(a.values.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = a.values[k] - b.values[k];
  return d;
}

}  // namespace udw::entanglement
