#pragma once

#include <vector>

#include "udw/core_types.hpp"
#include "udw/correlators.hpp"

namespace udw::markovian {

using correlators::CorrelatorConstants;

enum class Block { X, O };

// dx/dtau = (m0 + g^2 m2) x + g^2 b
struct XGenerator {
  Mat7 m0 = Mat7::Zero();
  Mat7 m2 = Mat7::Zero();
  Vec7 b = Vec7::Zero();
  double g = 0.0;
  bool rwa = false;

  Mat7 matrix() const { return m0 + g * g * m2; }
  Vec7 source() const { return g * g * b; }
};

// dy/dtau = (n0 + g^2 n2) y
struct OGenerator {
  Mat8c n0 = Mat8c::Zero();
  Mat8c n2 = Mat8c::Zero();
  double g = 0.0;
  bool rwa = false;

  Mat8c matrix() const { return n0 + g * g * n2; }
};

struct Spectrum {
  std::vector<cd> eigenvalues;
  Block block = Block::X;
};

XGenerator build_x_generator(const Params& p, const CorrelatorConstants& c, bool rwa);
OGenerator build_o_generator(const Params& p, const CorrelatorConstants& c, bool rwa);

// Throws unsupported_regime for omega = 0 (gapless, defective generator).
Spectrum spectrum(const XGenerator& gen, double omega);
Spectrum spectrum(const OGenerator& gen, double omega);

// O(g^2) eigenvalue formulas; lambda_4^X, lambda_5^X are exact.
Spectrum predicted_spectrum_x(const Params& p, const CorrelatorConstants& c);
Spectrum predicted_spectrum_o(const Params& p, const CorrelatorConstants& c);

// Largest distance after nearest-neighbour pairing of two spectra of equal size.
double spectral_mismatch(const std::vector<cd>& computed, const std::vector<cd>& predicted);

double x_determinant_formula(const Params& p, const CorrelatorConstants& c);
double o_determinant_formula(const Params& p, const CorrelatorConstants& c);

// x* = -(m0 + g^2 m2)^{-1} g^2 b; unsupported_regime if singular.
XVector steady_state_x(const XGenerator& gen);

// Exact propagation via the exponential of the source-augmented generator.
std::vector<XVector> propagate_x(const XGenerator& gen, const XVector& x0, const std::vector<double>& taus);
std::vector<OVector> propagate_o(const OGenerator& gen, const OVector& y0, const std::vector<double>& taus);

// Schrodinger-picture time series built from both blocks.
TimeSeries evolve(const Params& p, const DensityMatrix4& rho0, const std::vector<double>& taus, bool rwa);

// Closed-form rho14(tau), Schrodinger picture. The non-RWA branch requires
// g^2 < 0.1 omega/a (unsupported_regime otherwise).
cd rho14_closed_form(const Params& p, const CorrelatorConstants& c, const DensityMatrix4& rho0, double tau,
                     bool rwa);

// Single detector, interaction picture: A e^{-g^2 C_s tau} + B e^{(-g^2 C_s + 2 i omega) tau}.
cd alice_offdiagonal(const Params& p, cd rho12_0, double tau);
// The same with the finite-gap transforms C(omega), D(omega) in place of C_s.
cd alice_offdiagonal_standard(const Params& p, cd rho12_0, double tau);

}  // namespace udw::markovian
