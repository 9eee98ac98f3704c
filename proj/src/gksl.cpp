#include "udw/gksl.hpp"

namespace udw::gksl {

namespace {

int idx(int detector, int alpha) { return 3 * detector + alpha - 1; }

// Same coefficient pattern on AA/BB (self) and AB/BA (cross) blocks.
void fill(Mat6c& m, int alpha, int beta, cd self, cd cross) {
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) m(idx(j, alpha), idx(k, beta)) = (j == k) ? self : cross;
}

Mat4c comm(const Mat4c& x, const Mat4c& y) { return x * y - y * x; }

}  // namespace

Generator build_gksl(const Params& p, const CorrelatorConstants& c, bool rwa) {
  const double g2 = p.g * p.g;
  Generator gen;
  const Mat4c h = bare_hamiltonian(p.omega);
  if (!rwa) {
    gen.h.h = h + g2 * c.k_x * pauli(0, 1) * pauli(1, 1);
    gen.h.tag = HamiltonianTag::heff;
    fill(gen.gamma.gamma, 1, 1, g2 * c.c_s, g2 * c.c_x);
    gen.gamma.tag = KossakowskiTag::gamma;
  } else {
    gen.h.h = h + 0.5 * g2 * c.k_x * (pauli(0, 1) * pauli(1, 1) + pauli(0, 2) * pauli(1, 2));
    gen.h.tag = HamiltonianTag::heff_rwa;
    fill(gen.gamma.gamma, 1, 1, 0.5 * g2 * c.c_s, 0.5 * g2 * c.c_x);
    fill(gen.gamma.gamma, 2, 2, 0.5 * g2 * c.c_s, 0.5 * g2 * c.c_x);
    gen.gamma.tag = KossakowskiTag::gamma_rwa;
  }
  return gen;
}

Corrections build_corrections(const Params& p, const CorrelatorConstants& c) {
  const double g2 = p.g * p.g;
  Corrections out;
  out.zeff.h = -0.5 * g2 * p.omega * c.d_s_prime * (pauli(0, 3) + pauli(1, 3)) -
               0.5 * g2 * p.omega * c.s_x_prime * (pauli(0, 1) * pauli(1, 2) + pauli(0, 2) * pauli(1, 1));
  out.zeff.tag = HamiltonianTag::zeff;
  fill(out.eta.gamma, 1, 1, g2 * c.d_s_prime, g2 * c.d_x_prime);
  out.eta.tag = KossakowskiTag::eta;
  const cd i(0.0, 1.0);
  fill(out.zeta.gamma, 1, 2, 0.5 * g2 * (c.d_s_prime - i * c.s_s_prime), 0.5 * g2 * (c.d_x_prime - i * c.s_x_prime));
  fill(out.zeta.gamma, 2, 1, 0.5 * g2 * (c.d_s_prime + i * c.s_s_prime), 0.5 * g2 * (c.d_x_prime + i * c.s_x_prime));
  out.zeta.tag = KossakowskiTag::zeta;
  return out;
}

Mat4c apply_dissipator(const KossakowskiMatrix& gamma, const Mat4c& rho) {
  Mat4c out = Mat4c::Zero();
  for (int m = 0; m < 6; ++m) {
    for (int n = 0; n < 6; ++n) {
      const cd gmn = gamma.gamma(m, n);
      if (gmn == 0.0) continue;
      const Mat4c& sa = pauli(m / 3, m % 3 + 1);
      const Mat4c& sb = pauli(n / 3, n % 3 + 1);
      const Mat4c ab = sa * sb;
      out += gmn * (sb * rho * sa - 0.5 * (ab * rho + rho * ab));
    }
  }
  return out;
}

Mat4c rhs(const Generator& gen, const Mat4c& rho) {
  const cd i(0.0, 1.0);
  return -i * comm(gen.h.h, rho) + apply_dissipator(gen.gamma, rho);
}

Mat4c correction_rhs(const Corrections& corr, double omega, const Mat4c& rho, const Mat4c& rho_dot) {
  const cd i(0.0, 1.0);
  const Mat4c h = bare_hamiltonian(omega);
  return -i * comm(corr.zeff.h, rho) + apply_dissipator(corr.eta, -i * comm(h, rho) + rho_dot) +
         apply_dissipator(corr.zeta, rho);
}

Eigen::Matrix<double, 6, 1> kossakowski_eigenvalues(const KossakowskiMatrix& gamma) {
  Eigen::SelfAdjointEigenSolver<Mat6c> es(gamma.gamma, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

CpReport cp_certificate(const KossakowskiMatrix& gamma) {
  const double asym = (gamma.gamma - gamma.gamma.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) throw std::invalid_argument("cp_certificate: Kossakowski matrix is not Hermitian");
  CpReport r;
  r.min_eigenvalue = kossakowski_eigenvalues(gamma).minCoeff();
  r.is_psd = r.min_eigenvalue >= -1e-12;
  return r;
}

Eigen::Vector4d hamiltonian_spectrum(const EffectiveHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(h.h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace udw::gksl
