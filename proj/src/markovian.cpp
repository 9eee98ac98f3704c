#include "udw/markovian.hpp"

#include <cmath>
#include <limits>
#include <unsupported/Eigen/MatrixFunctions>

namespace udw::markovian {

XGenerator build_x_generator(const Params& p, const CorrelatorConstants& c, bool rwa) {
  XGenerator gen;
  gen.g = p.g;
  gen.rwa = rwa;
  gen.m0(3, 4) = 2.0 * p.omega;
  gen.m0(4, 3) = -2.0 * p.omega;
  const double S = c.c_s, X = c.c_x, K = c.k_x;
  if (!rwa) {
    gen.m2 << -2 * S, S, S, -2 * X, -2 * K, 2 * X, 0,
              0, -3 * S, -S, 2 * X, 0, -2 * X, -2 * K,
              0, -S, -3 * S, 2 * X, 0, -2 * X, 2 * K,
              0, 2 * X, 2 * X, -2 * S, 0, 2 * S, 0,
              2 * K, K, K, 0, -2 * S, 0, 0,
              0, -2 * X, -2 * X, 2 * S, 0, -2 * S, 0,
              0, K, -K, 0, 0, 0, -2 * S;
    gen.b << 0, S, S, -X, -K, X, 0;
  } else {
    // (6,4) is 0 and the source drops its rho14 entries, as the RWA dissipator requires
    gen.m2 << -2 * S, S, S, 0, 0, 2 * X, 0,
              0, -3 * S, -S, 0, 0, -2 * X, -2 * K,
              0, -S, -3 * S, 0, 0, -2 * X, 2 * K,
              0, 0, 0, -2 * S, 0, 0, 0,
              0, 0, 0, 0, -2 * S, 0, 0,
              0, -2 * X, -2 * X, 0, 0, -2 * S, 0,
              0, K, -K, 0, 0, 0, -2 * S;
    gen.b << 0, S, S, 0, 0, X, 0;
  }
  return gen;
}

OGenerator build_o_generator(const Params& p, const CorrelatorConstants& c, bool rwa) {
  OGenerator gen;
  gen.g = p.g;
  gen.rwa = rwa;
  const cd i(0.0, 1.0);
  for (int k = 0; k < 4; ++k) {
    gen.n0(k, k) = -i * p.omega;
    gen.n0(k + 4, k + 4) = i * p.omega;
  }
  const cd S = c.c_s, X = c.c_x;
  const cd al = c.c_x - i * c.k_x;
  const cd alc = std::conj(al);
  if (!rwa) {
    gen.n2 << -2. * S, -al, X, S, S, X, -alc, 0,
              -al, -2. * S, S, X, X, S, 0, -alc,
              X, S, -2. * S, -alc, -al, 0, S, X,
              S, X, -alc, -2. * S, 0, -al, X, S,
              S, X, -al, 0, -2. * S, -alc, X, S,
              X, S, 0, -al, -alc, -2. * S, S, X,
              -alc, 0, S, X, X, S, -2. * S, -al,
              0, -alc, X, S, S, X, -al, -2. * S;
  } else {
    const cd am = al, ap = alc;  // alpha_- = C_x - i K_x, alpha_+ = C_x + i K_x
    Eigen::Matrix<cd, 4, 4> upper, lower;
    upper << -2. * S, -am, X, S,
             -am, -2. * S, S, X,
             X, S, -2. * S, -ap,
             S, X, -ap, -2. * S;
    lower << -2. * S, -ap, X, S,
             -ap, -2. * S, S, X,
             X, S, -2. * S, -am,
             S, X, -am, -2. * S;
    gen.n2.topLeftCorner<4, 4>() = upper;
    gen.n2.bottomRightCorner<4, 4>() = lower;
  }
  return gen;
}

namespace {

void require_gap(double omega) {
  if (!(omega > 0.0))
    throw unsupported_regime("gapless limit omega = 0 must be treated separately (defective generator)");
}

}  // namespace

Spectrum spectrum(const XGenerator& gen, double omega) {
  require_gap(omega);
  Eigen::EigenSolver<Mat7> es(gen.matrix(), false);
  if (es.info() != Eigen::Success) throw numerical_error("X-block eigensolver failed");
  Spectrum s;
  s.block = Block::X;
  for (int k = 0; k < 7; ++k) s.eigenvalues.push_back(es.eigenvalues()(k));
  return s;
}

Spectrum spectrum(const OGenerator& gen, double omega) {
  require_gap(omega);
  Eigen::ComplexEigenSolver<Mat8c> es(gen.matrix(), false);
  if (es.info() != Eigen::Success) throw numerical_error("O-block eigensolver failed");
  Spectrum s;
  s.block = Block::O;
  for (int k = 0; k < 8; ++k) s.eigenvalues.push_back(es.eigenvalues()(k));
  return s;
}

Spectrum predicted_spectrum_x(const Params& p, const CorrelatorConstants& c) {
  const double g2 = p.g * p.g, S = c.c_s, X = c.c_x, K = c.k_x;
  const double r = std::sqrt(S * S + 8.0 * X * X);
  const cd i(0.0, 1.0);
  Spectrum s;
  s.block = Block::X;
  s.eigenvalues = {-2.0 * g2 * S,
                   -3.0 * g2 * S - g2 * r,
                   -3.0 * g2 * S + g2 * r,
                   -2.0 * g2 * (S - i * K),
                   -2.0 * g2 * (S + i * K),
                   -2.0 * i * p.omega - 2.0 * g2 * S,
                   2.0 * i * p.omega - 2.0 * g2 * S};
  return s;
}

Spectrum predicted_spectrum_o(const Params& p, const CorrelatorConstants& c) {
  const double g2 = p.g * p.g, S = c.c_s, X = c.c_x, K = c.k_x;
  const cd i(0.0, 1.0);
  const cd rm = std::sqrt(cd((S - X) * (S - X) - K * K));
  const cd rp = std::sqrt(cd((S + X) * (S + X) - K * K));
  const cd base = -i * p.omega;
  std::vector<cd> l = {base + g2 * (-2.0 * S + X - rm), base + g2 * (-2.0 * S + X + rm),
                       base + g2 * (-2.0 * S - X - rp), base + g2 * (-2.0 * S - X + rp)};
  for (int k = 0; k < 4; ++k) l.push_back(std::conj(l[k]));
  Spectrum s;
  s.block = Block::O;
  s.eigenvalues = l;
  return s;
}

double spectral_mismatch(const std::vector<cd>& computed, const std::vector<cd>& predicted) {
  if (computed.size() != predicted.size()) throw std::invalid_argument("spectral_mismatch: size mismatch");
  std::vector<bool> used(predicted.size(), false);
  double worst = 0.0;
  for (const cd& z : computed) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(z - predicted[k]);
      if (d < best) {
        best = d;
        arg = k;
      }
    }
    used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

double x_determinant_formula(const Params& p, const CorrelatorConstants& c) {
  const double S = c.c_s, X = c.c_x, K = c.k_x;
  return -256.0 * std::pow(p.g, 10) * p.omega * p.omega * S * (S * S - X * X) * (S * S + K * K);
}

double o_determinant_formula(const Params& p, const CorrelatorConstants& c) {
  const double S = c.c_s, X = c.c_x, O = p.omega, g4 = std::pow(p.g, 4);
  return std::pow(O, 8) + 16.0 * g4 * std::pow(O, 6) * S * S + 64.0 * g4 * g4 * std::pow(O, 4) * S * S * (S * S - X * X);
}

XVector steady_state_x(const XGenerator& gen) {
  Eigen::FullPivLU<Mat7> lu(gen.matrix());
  if (!lu.isInvertible()) throw unsupported_regime("X-block generator is singular (omega = 0 or L = 0)");
  return -lu.solve(gen.source());
}

std::vector<XVector> propagate_x(const XGenerator& gen, const XVector& x0, const std::vector<double>& taus) {
  if (!x0.allFinite()) throw numerical_error("propagate_x: non-finite initial condition");
  Eigen::Matrix<double, 8, 8> aug = Eigen::Matrix<double, 8, 8>::Zero();
  aug.topLeftCorner<7, 7>() = gen.matrix();
  aug.topRightCorner<7, 1>() = gen.source();
  std::vector<XVector> out;
  out.reserve(taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (k > 0 && taus[k] < taus[k - 1]) throw std::invalid_argument("propagate_x: taus not sorted");
    if (taus[k] == 0.0) {
      out.push_back(x0);
      continue;
    }
    const Eigen::Matrix<double, 8, 8> e = (aug * taus[k]).exp();
    out.push_back(e.topLeftCorner<7, 7>() * x0 + e.topRightCorner<7, 1>());
  }
  return out;
}

std::vector<OVector> propagate_o(const OGenerator& gen, const OVector& y0, const std::vector<double>& taus) {
  if (!y0.allFinite()) throw numerical_error("propagate_o: non-finite initial condition");
  const Mat8c m = gen.matrix();
  std::vector<OVector> out;
  out.reserve(taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (k > 0 && taus[k] < taus[k - 1]) throw std::invalid_argument("propagate_o: taus not sorted");
    if (taus[k] == 0.0) {
      out.push_back(y0);
      continue;
    }
    const Mat8c e = (m * cd(taus[k])).exp();
    out.push_back(e * y0);
  }
  return out;
}

TimeSeries evolve(const Params& p, const DensityMatrix4& rho0, const std::vector<double>& taus, bool rwa) {
  p.validate();
  const CorrelatorConstants c = correlators::constants(p);
  const auto [x0, y0] = split_blocks(rho0);
  const auto xs = propagate_x(build_x_generator(p, c, rwa), x0, taus);
  const auto ys = propagate_o(build_o_generator(p, c, rwa), y0, taus);
  TimeSeries ts;
  ts.params = p;
  ts.solver = rwa ? SolverTag::markov_rwa : SolverTag::markov;
  ts.taus = taus;
  ts.states.reserve(taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    OVector y = ys[k];
    // the two halves are conjugate by construction; remove round-off drift
    y.tail<4>() = y.head<4>().conjugate();
    ts.states.push_back(join_blocks(xs[k], y));
  }
  return ts;
}

cd rho14_closed_form(const Params& p, const CorrelatorConstants& c, const DensityMatrix4& rho0, double tau,
                     bool rwa) {
  const cd i(0.0, 1.0);
  const double g2 = p.g * p.g, S = c.c_s, X = c.c_x, K = c.k_x, O = p.omega;
  const cd r14 = rho0(0, 3);
  if (rwa) return r14 * std::exp((-2.0 * i * O - 2.0 * g2 * S) * tau);
  if (!(g2 < 0.1 * O / p.a)) throw unsupported_regime("rho14 closed form requires g^2 << omega/a");

  const double r11 = rho0(0, 0).real(), r22 = rho0(1, 1).real(), r33 = rho0(2, 2).real();
  const double r23 = rho0(1, 2).real();
  const double P = 2.0 * r22 + 2.0 * r33 - 1.0;
  const double Q = 2.0 * r11 + r22 + r33 - 1.0;
  const double q = S / X, s8 = std::sqrt(8.0 + q * q);
  const double den = 8.0 + q * q - q * s8;
  const double root = std::sqrt(S * S + 8.0 * X * X);

  const cd t1 = (r14 + i * g2 * S * r23 / O + i * g2 * X * P / (2.0 * O) - g2 * K * Q / (2.0 * O)) *
                std::exp((-2.0 * i * O - 2.0 * g2 * S) * tau);
  const cd t2 = g2 * K * Q / (2.0 * O) * std::exp(-2.0 * g2 * S * tau);
  const cd t3 = -i * g2 * X * (4.0 - q * q + q * s8) * (P + (-q + s8) * r23) / (2.0 * O * den) *
                std::exp(g2 * (-3.0 * S - root) * tau);
  const cd t4 = -i * g2 * X * (-3.0 * q + s8) * ((-q + s8) * P - 8.0 * r23) / (4.0 * O * den) *
                std::exp(g2 * (-3.0 * S + root) * tau);
  return t1 + t2 + t3 + t4;
}

cd alice_offdiagonal(const Params& p, cd rho12_0, double tau) {
  if (!(p.omega > 0.0)) throw unsupported_regime("alice_offdiagonal requires omega > 0");
  const cd i(0.0, 1.0);
  const double g2 = p.g * p.g, S = correlators::c_s(p);
  const cd k = i * g2 * S / (2.0 * p.omega) * std::conj(rho12_0);
  const cd A = rho12_0 + k, B = -k;
  return A * std::exp(-g2 * S * tau) + B * std::exp((-g2 * S + 2.0 * i * p.omega) * tau);
}

cd alice_offdiagonal_standard(const Params& p, cd rho12_0, double tau) {
  if (!(p.omega > 0.0)) throw unsupported_regime("alice_offdiagonal_standard requires omega > 0");
  const cd i(0.0, 1.0);
  const double g2 = p.g * p.g;
  const double C = correlators::single_detector_C(p.omega, p);
  const double D = correlators::single_detector_D(p.omega, p);
  const cd k = std::conj(rho12_0) * g2 * (D + i * C) / (2.0 * p.omega);
  const cd A = rho12_0 + k, B = -k;
  return A * std::exp(-g2 * C * tau) + B * std::exp((-g2 * C + 2.0 * i * p.omega) * tau);
}

}  // namespace udw::markovian
