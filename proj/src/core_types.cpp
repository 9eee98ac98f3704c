#include "udw/core_types.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace udw {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
}

}  // namespace

void Params::validate(bool allow_zero_coupling) const {
  require(std::isfinite(g), "g", "must be finite");
  require(allow_zero_coupling ? g >= 0.0 : g > 0.0, "g", "must be positive");
  require(std::isfinite(a) && a > 0.0, "a", "must be positive and finite");
  require(std::isfinite(omega) && omega >= 0.0, "omega", "must be non-negative and finite");
  require(std::isfinite(L) && L >= 0.0, "L", "must be non-negative and finite");
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon", "must be positive and finite");
}

bool operator==(const Params& l, const Params& r) {
  return l.g == r.g && l.a == r.a && l.omega == r.omega && l.L == r.L && l.epsilon == r.epsilon;
}

void check_state(const Mat4c& m, double tol) {
  if (!m.allFinite()) throw invalid_state("density matrix has non-finite entries");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) {
    std::ostringstream os;
    os << "density matrix not Hermitian (max |rho - rho^dag| = " << herm << ")";
    throw invalid_state(os.str());
  }
  const cd tr = m.trace();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream os;
    os << "density matrix trace " << tr.real() << " differs from 1";
    throw invalid_state(os.str());
  }
}

DensityMatrix4::DensityMatrix4() : m_(Mat4c::Identity() / 4.0) {}

DensityMatrix4::DensityMatrix4(const Mat4c& m) : m_(m) { check_state(m_); }

DensityMatrix4 DensityMatrix4::unchecked(const Mat4c& m) { return DensityMatrix4(m, no_check{}); }

double DensityMatrix4::min_eigenvalue() const {
  const Mat4c h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4c> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix4 pure_state(const Vec4c& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw invalid_state("zero state vector");
  const Vec4c v = psi / n;
  return DensityMatrix4(v * v.adjoint());
}

namespace states {

DensityMatrix4 ground() { return pure_state(Vec4c(0, 0, 0, 1)); }
DensityMatrix4 up_up() { return pure_state(Vec4c(1, 0, 0, 0)); }
DensityMatrix4 down_up() { return pure_state(Vec4c(0, 0, 1, 0)); }
DensityMatrix4 bell_phi_plus() { return pure_state(Vec4c(1, 0, 0, 1)); }
DensityMatrix4 maximally_mixed() { return DensityMatrix4(); }

DensityMatrix4 by_name(const std::string& name) {
  if (name == "ground") return ground();
  if (name == "up-up") return up_up();
  if (name == "down-up") return down_up();
  if (name == "bell-phi-plus") return bell_phi_plus();
  if (name == "maximally-mixed") return maximally_mixed();
  throw std::invalid_argument("initial_state: unknown preset '" + name + "'");
}

}  // namespace states

XVector x_coords(const Mat4c& m) {
  XVector x;
  x << m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(0, 3).real(), m(0, 3).imag(),
      m(1, 2).real(), m(1, 2).imag();
  return x;
}

OVector o_coords(const Mat4c& m) {
  OVector y;
  y << m(0, 1), m(0, 2), m(1, 3), m(2, 3), m(1, 0), m(2, 0), m(3, 1), m(3, 2);
  return y;
}

Mat4c embed_blocks(const XVector& x, const OVector& y, double trace) {
  Mat4c m = Mat4c::Zero();
  m(0, 0) = x(0);
  m(1, 1) = x(1);
  m(2, 2) = x(2);
  m(3, 3) = trace - x(0) - x(1) - x(2);
  m(0, 3) = cd(x(3), x(4));
  m(3, 0) = cd(x(3), -x(4));
  m(1, 2) = cd(x(5), x(6));
  m(2, 1) = cd(x(5), -x(6));
  m(0, 1) = y(0);
  m(0, 2) = y(1);
  m(1, 3) = y(2);
  m(2, 3) = y(3);
  m(1, 0) = y(4);
  m(2, 0) = y(5);
  m(3, 1) = y(6);
  m(3, 2) = y(7);
  return m;
}

std::pair<XVector, OVector> split_blocks(const DensityMatrix4& rho) {
  check_state(rho.matrix());
  return {x_coords(rho.matrix()), o_coords(rho.matrix())};
}

DensityMatrix4 join_blocks(const XVector& x, const OVector& y) {
  if (!x.allFinite() || !y.allFinite()) throw invalid_state("non-finite block coordinates");
  for (int k = 0; k < 4; ++k) {
    if (std::abs(y(k + 4) - std::conj(y(k))) > 1e-10)
      throw invalid_state("O-block conjugate pairing violated at component " + std::to_string(k + 1));
  }
  return DensityMatrix4::unchecked(embed_blocks(x, y, 1.0));
}

namespace {

Vec4c picture_phases(double tau, double omega) {
  const cd e = std::exp(cd(0.0, omega * tau));
  return Vec4c(e, 1.0, 1.0, std::conj(e));
}

}  // namespace

Mat4c to_interaction_picture(const Mat4c& rho_s, double tau, double omega) {
  const Vec4c u = picture_phases(tau, omega);
  return u.asDiagonal() * rho_s * u.conjugate().asDiagonal();
}

Mat4c to_schrodinger_picture(const Mat4c& rho_i, double tau, double omega) {
  return to_interaction_picture(rho_i, -tau, omega);
}

DensityMatrix4 to_interaction_picture(const DensityMatrix4& rho_s, double tau, double omega) {
  return DensityMatrix4::unchecked(to_interaction_picture(rho_s.matrix(), tau, omega));
}

DensityMatrix4 to_schrodinger_picture(const DensityMatrix4& rho_i, double tau, double omega) {
  return DensityMatrix4::unchecked(to_schrodinger_picture(rho_i.matrix(), tau, omega));
}

namespace {

std::array<Mat4c, 6> make_paulis() {
  using M2 = Eigen::Matrix<cd, 2, 2>;
  M2 s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, cd(0, -1), cd(0, 1), 0;
  s3 << 1, 0, 0, -1;
  const M2 id = M2::Identity();
  auto kron = [](const M2& x, const M2& y) {
    Mat4c r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
    return r;
  };
  return {kron(s1, id), kron(s2, id), kron(s3, id), kron(id, s1), kron(id, s2), kron(id, s3)};
}

}  // namespace

const Mat4c& pauli(int detector, int alpha) {
  static const std::array<Mat4c, 6> table = make_paulis();
  if (detector < 0 || detector > 1 || alpha < 1 || alpha > 3)
    throw std::out_of_range("pauli: bad index");
  return table[3 * detector + alpha - 1];
}

Mat4c bare_hamiltonian(double omega) { return 0.5 * omega * (pauli(0, 3) + pauli(1, 3)); }

XAffineMap linearize_x(const std::function<Mat4c(const Mat4c&)>& f) {
  XAffineMap out;
  const Mat4c base = f(embed_blocks(XVector::Zero(), OVector::Zero(), 1.0));
  out.affine = x_coords(base);
  for (int c = 0; c < 7; ++c) {
    // traceless direction: the trace constraint moves rho44 with the populations
    const Mat4c col = f(embed_blocks(XVector::Unit(c), OVector::Zero(), 0.0));
    out.lin.col(c) = x_coords(col);
  }
  return out;
}

Mat8c linearize_o(const std::function<Mat4c(const Mat4c&)>& f) {
  Mat8c out;
  for (int c = 0; c < 8; ++c) {
    const Mat4c col = f(embed_blocks(XVector::Zero(), OVector::Unit(c), 0.0));
    out.col(c) = o_coords(col);
  }
  return out;
}

std::string to_string(SolverTag tag) {
  switch (tag) {
    case SolverTag::markov: return "markov";
    case SolverTag::markov_rwa: return "markov-rwa";
    case SolverTag::nonmarkov: return "nonmarkov";
  }
  return "unknown";
}

SolverTag solver_tag_from_string(const std::string& s) {
  if (s == "markov") return SolverTag::markov;
  if (s == "markov-rwa") return SolverTag::markov_rwa;
  if (s == "nonmarkov") return SolverTag::nonmarkov;
  throw std::invalid_argument("solvers: unknown solver '" + s + "'");
}

void TimeSeries::validate() const {
  if (taus.size() != states.size()) throw std::invalid_argument("TimeSeries: size mismatch");
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (!(taus[i] > taus[i - 1])) throw std::invalid_argument("TimeSeries: taus not increasing");
}

}  // namespace udw
