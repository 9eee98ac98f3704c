#pragma once

#include "udw/core_types.hpp"
#include "udw/correlators.hpp"

namespace udw::gksl {

using Mat6c = Eigen::Matrix<cd, 6, 6>;
using correlators::CorrelatorConstants;

enum class KossakowskiTag { gamma, gamma_rwa, eta, zeta };
enum class HamiltonianTag { heff, heff_rwa, zeff };

// Index (detector, alpha) -> 3*detector + alpha - 1, i.e. (A1,A2,A3,B1,B2,B3).
// Stored complex: zeta carries imaginary entries.
struct KossakowskiMatrix {
  Mat6c gamma = Mat6c::Zero();
  KossakowskiTag tag = KossakowskiTag::gamma;
};

struct EffectiveHamiltonian {
  Mat4c h = Mat4c::Zero();
  HamiltonianTag tag = HamiltonianTag::heff;
};

struct Generator {
  EffectiveHamiltonian h;
  KossakowskiMatrix gamma;
};

Generator build_gksl(const Params& p, const CorrelatorConstants& c, bool rwa);

struct Corrections {
  EffectiveHamiltonian zeff;
  KossakowskiMatrix eta;
  KossakowskiMatrix zeta;
};

// Subleading terms: -i[z_eff, rho] + D_eta[-i[h, rho] + rho_dot] + D_zeta[rho].
Corrections build_corrections(const Params& p, const CorrelatorConstants& c);

// sum gamma^{ab}_{jk} (s_b^k rho s_a^j - {s_a^j s_b^k, rho}/2)
Mat4c apply_dissipator(const KossakowskiMatrix& gamma, const Mat4c& rho);

// -i[h, rho] + D[rho]
Mat4c rhs(const Generator& gen, const Mat4c& rho);

// -i[z_eff, rho] + D_eta[-i[h, rho] + rho_dot] + D_zeta[rho]
Mat4c correction_rhs(const Corrections& corr, double omega, const Mat4c& rho, const Mat4c& rho_dot);

struct CpReport {
  double min_eigenvalue = 0.0;
  bool is_psd = false;
};

// Throws std::invalid_argument if gamma is not Hermitian to 1e-10.
CpReport cp_certificate(const KossakowskiMatrix& gamma);

Eigen::Matrix<double, 6, 1> kossakowski_eigenvalues(const KossakowskiMatrix& gamma);
Eigen::Vector4d hamiltonian_spectrum(const EffectiveHamiltonian& h);

}  // namespace udw::gksl
