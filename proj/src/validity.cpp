#include "udw/validity.hpp"

#include <cmath>
#include <limits>

#include "udw/gksl.hpp"

namespace udw::validity {

namespace {

CorrelatorConstants substituted(const CorrelatorConstants& c) {
  CorrelatorConstants s = c;
  s.c_s = c.d_s_prime;
  s.c_x = c.d_x_prime;
  s.k_x = c.s_x_prime;
  return s;
}

void add(ValidityReport& r, const std::string& label, double value) {
  BoundEntry e;
  e.label = label;
  e.value = std::abs(value);
  e.threshold = r.threshold;
  e.pass = std::isfinite(e.value) && e.value < r.threshold;
  r.scalar_bounds.push_back(e);
}

}  // namespace

std::vector<std::string> ValidityReport::failed() const {
  std::vector<std::string> out;
  for (const auto& b : scalar_bounds)
    if (!b.pass) out.push_back(b.label);
  for (const auto& m : matrix_bounds) {
    const std::string tag = m.block == Block::X ? " (X)" : " (O)";
    if (!(m.max_y < m.threshold)) out.push_back("max|Y|" + tag);
    if (!(m.max_z_ainv < m.threshold)) out.push_back("max|Z A^-1|" + tag);
  }
  return out;
}

const BoundEntry* ValidityReport::find(const std::string& label) const {
  for (const auto& b : scalar_bounds)
    if (b.label == label) return &b;
  return nullptr;
}

CorrectionMatrices build_correction_matrices(const Params& p, const CorrelatorConstants& c, Block block) {
  p.validate(true);
  if (!(p.L > 0)) throw std::domain_error("build_correction_matrices: L must be positive");
  if (!(p.omega > 0)) throw std::domain_error("build_correction_matrices: omega must be positive");
  const double g2 = p.g * p.g;
  const gksl::Corrections corr = gksl::build_corrections(p, c);
  const Mat4c h = bare_hamiltonian(p.omega);
  const cd i(0, 1);
  auto f = [&](const Mat4c& rho) {
    const Mat4c hr = -i * (h * rho - rho * h);
    return Mat4c(-i * (corr.zeff.h * rho - rho * corr.zeff.h) + gksl::apply_dissipator(corr.eta, hr));
  };
  CorrectionMatrices out;
  if (block == Block::X) {
    out.y = (g2 * markovian::build_x_generator(p, substituted(c), false).m2).cast<cd>();
    out.z = (-linearize_x(f).lin).cast<cd>();
    out.a = markovian::build_x_generator(p, c, false).matrix().cast<cd>();
  } else {
    out.y = g2 * markovian::build_o_generator(p, substituted(c), false).n2;
    out.z = -linearize_o(f);
    out.a = markovian::build_o_generator(p, c, false).matrix();
  }
  return out;
}

ValidityReport evaluate(const Params& p, double threshold) {
  p.validate(true);
  if (p.L > 0) return evaluate(p, correlators::constants(p), threshold);
  return evaluate(p, CorrelatorConstants{}, threshold);
}

ValidityReport evaluate(const Params& p, const CorrelatorConstants& c, double threshold) {
  p.validate(true);
  if (!(threshold > 0)) throw std::invalid_argument("threshold: must be positive");
  ValidityReport r;
  r.threshold = threshold;
  const double g2 = p.g * p.g, a = p.a, om = p.omega, aL = p.aL();
  const double log_ae = std::log(a * p.epsilon);
  const bool have_L = p.L > 0, have_gap = p.omega > 0;
  const double inf = std::numeric_limits<double>::infinity();

  add(r, "g^2*|log(a*eps)|/(2*pi^2)", g2 * log_ae / (2 * pi * pi));
  add(r, "pi*omega/a", pi * om / a);
  if (have_L) {
    add(r, "g^2*|D'_x|", g2 * c.d_x_prime);
    add(r, "g^2*|S'_x|", g2 * c.s_x_prime);
    add(r, "g^2*|log(a*eps)|/(2*pi*aL)", g2 * log_ae / (2 * pi * aL));
    add(r, "|3*pi*omega/a - g^2*aL|/(aL)^2", (3 * pi * om / a - g2 * aL) / (aL * aL));
    add(r, "g^2/(aL)", g2 / aL);
    add(r, "g^2/(4*aL)+g^2*|log(a*eps)|", g2 / (4 * aL) + g2 * std::abs(log_ae));
    add(r, "pi*omega/(a*(aL)^2)", pi * om / (a * aL * aL));
    add(r, "omega*|log(a^2*eps*L)|/(a*(aL)^2)", om * std::log(a * a * p.epsilon * p.L) / (a * aL * aL));
  } else {
    r.regime_notes.push_back(
        "stacked trajectory: L = 0 puts both detectors on one worldline; the cross correlator and "
        "the aL-dependent bounds diverge");
  }
  add(r, "g^2*a/omega", have_gap ? g2 * a / om : inf);
  add(r, "g^2/(omega*L)", have_gap && have_L ? g2 / (om * p.L) : inf);
  if (!have_gap)
    r.regime_notes.push_back("gapless: omega = 0 leaves the free generator degenerate; the expansion is not valid");

  if (have_L && have_gap) {
    for (Block b : {Block::X, Block::O}) {
      const CorrectionMatrices m = build_correction_matrices(p, c, b);
      MatrixBound mb;
      mb.block = b;
      mb.threshold = threshold;
      mb.max_y = m.y.cwiseAbs().maxCoeff();
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(m.a);
      mb.max_z_ainv = lu.isInvertible() ? (m.z * lu.inverse()).cwiseAbs().maxCoeff() : inf;
      mb.pass = mb.max_y < threshold && mb.max_z_ainv < threshold;
      r.matrix_bounds.push_back(mb);
    }
  }

  r.overall = have_L && have_gap;
  for (const auto& e : r.scalar_bounds) r.overall = r.overall && e.pass;
  for (const auto& m : r.matrix_bounds) r.overall = r.overall && m.pass;
  return r;
}

}  // namespace udw::validity
