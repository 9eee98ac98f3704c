#include "udw/nonmarkov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "udw/correlators.hpp"
#include "udw/markovian.hpp"
#include "udw/quadrature.hpp"

namespace udw::nonmarkov {

namespace {

const quad::Tolerance moment_tol{1e-10, 18};

Params kernel_params(const Params& p, const NonMarkovConfig& cfg) {
  Params q = p;
  if (cfg.epsilon) q.epsilon = *cfg.epsilon;
  q.validate(true);
  return q;
}

std::size_t step_count(const NonMarkovConfig& cfg, double h) {
  return static_cast<std::size_t>(std::ceil(cfg.tau_max / h - 1e-9));
}

std::vector<double> self_breaks(double eps) { return {eps, 10 * eps, 100 * eps}; }

std::vector<double> cross_breaks(double eps, double s0) {
  std::vector<double> b{s0};
  for (double d : {eps, 10 * eps, 100 * eps, 1.0}) {
    b.push_back(s0 - d);
    b.push_back(s0 + d);
  }
  return b;
}

// sigma_+ e^{i omega t} + sigma_- e^{-i omega t} on detector j
Mat4c mu(int j, double t, double omega) {
  const cd ep = std::exp(cd(0, omega * t));
  const cd s1 = 0.5 * (ep + std::conj(ep));          // coefficient of sigma1
  const cd s2 = 0.5 * cd(0, 1) * (ep - std::conj(ep));  // coefficient of sigma2
  return s1 * pauli(j, 1) + s2 * pauli(j, 2);
}

void check_finite(const Mat4c& m, const char* term) {
  if (!m.allFinite())
    throw numerical_error(std::string("non-finite memory integral for ") + term +
                          " (epsilon too small for the step)");
}

}  // namespace

double NonMarkovConfig::step(const Params& p) const {
  p.validate(true);
  double hmax = 0.02 / p.a;
  if (p.omega > 0) hmax = std::min(hmax, 0.02 / p.omega);
  if (!(tau_max > 0) || !std::isfinite(tau_max)) throw std::invalid_argument("tau_max: must be positive");
  if (sample_every == 0) throw std::invalid_argument("sample_every: must be >= 1");
  if (!(memory_cutoff > 0)) throw std::invalid_argument("memory_cutoff: must be positive");
  if (epsilon && !(*epsilon > 0)) throw std::invalid_argument("epsilon: must be positive");
  if (h == 0.0) return hmax;
  if (!(h > 0)) throw std::invalid_argument("h: must be positive");
  if (h > hmax * (1 + 1e-12))
    throw std::invalid_argument("h: exceeds min(0.02/a, 0.02/omega) = " + std::to_string(hmax));
  return h;
}

StepWeights::StepWeights(const std::function<cd(double)>& w, double h, double cutoff,
                         std::vector<double> breaks) {
  if (!(h > 0) || !(cutoff > 0)) throw std::invalid_argument("StepWeights: h and cutoff must be positive");
  const auto K = static_cast<std::size_t>(std::ceil(cutoff / h - 1e-9));
  // per-panel moments int w(s) t^k ds, t = s/h - p in [0, 1]
  std::vector<cd> m0(K), m1(K), m2(K);
  for (std::size_t p = 0; p < K; ++p) {
    const double lo = p * h, hi = (p + 1) * h;
    auto t = [&](double s) { return (s - lo) / h; };
    m0[p] = quad::integrate_complex(w, lo, hi, breaks, moment_tol);
    m1[p] = quad::integrate_complex([&](double s) { return w(s) * t(s); }, lo, hi, breaks, moment_tol);
    m2[p] = quad::integrate_complex([&](double s) { return w(s) * (t(s) * t(s)); }, lo, hi, breaks, moment_tol);
    for (cd v : {m0[p], m1[p], m2[p]})
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw numerical_error("non-finite kernel moment on panel " + std::to_string(p));
  }
  auto panel = [&](long p, double c0, double c1, double c2) {
    if (p < 0 || p >= static_cast<long>(K)) return cd(0);
    return h * (c0 * m0[p] + c1 * m1[p] + c2 * m2[p]);
  };
  full_.resize(K + 2);
  left_.resize(K);
  for (long d = -1; d <= static_cast<long>(K); ++d)
    full_[d + 1] = panel(d - 1, 0, 0, 0.5) + panel(d, 0.5, 1, -1) + panel(d + 1, 0.5, -1, 0.5);
  for (long d = 0; d < static_cast<long>(K); ++d) left_[d] = panel(d, 0, 1, -0.5) + panel(d + 1, 0.5, -1, 0.5);
}

Mat4c operator_integrand(double omega, const Mat4c& rho_past, double tau, double s, cd w_self, cd w_cross) {
  Mat4c out = Mat4c::Zero();
  for (int j = 0; j < 2; ++j) {
    const Mat4c mr = mu(j, tau - s, omega) * rho_past;
    for (int k = 0; k < 2; ++k) {
      const Mat4c mk = mu(k, tau, omega);
      const Mat4c t = (j == k ? w_self : w_cross) * (mr * mk - mk * mr);
      out += t + t.adjoint();
    }
  }
  return out;
}

PrintedX printed_integrand_x(double om, const Mat4c& r, double tau, double s, cd ws, cd wx) {
  const double r11 = r(0, 0).real(), r22 = r(1, 1).real(), r33 = r(2, 2).real();
  const cd r14 = r(0, 3), r23 = r(1, 2);
  const double c = std::cos(om * s), sn = std::sin(om * s);
  const cd em = std::exp(cd(0, -2 * om * tau)) * std::exp(cd(0, om * s));
  const cd ep = std::conj(em);
  PrintedX d;
  d.d11 = 2 * ws.real() * c * (-2 * r11 + r22 + r33) + 2 * ws.imag() * sn * (2 * r11 + r22 + r33) -
          2.0 * em * std::conj(wx) * r14 - 2.0 * ep * wx * std::conj(r14) +
          4 * (wx.real() * c + wx.imag() * sn) * r23.real();
  d.d22 = 2 * ws.real() * c * (1 - 3 * r22 - r33) + 2 * ws.imag() * sn * (1 - 2 * r11 - r22 - r33) +
          2.0 * em * wx.real() * r14 + 2.0 * ep * wx.real() * std::conj(r14) -
          4 * (wx.real() * r23.real() + wx.imag() * r23.imag()) * c;
  d.d33 = 2 * ws.real() * c * (1 - r22 - 3 * r33) + 2 * ws.imag() * sn * (1 - 2 * r11 - r22 - r33) +
          2.0 * em * wx.real() * r14 + 2.0 * ep * wx.real() * std::conj(r14) -
          4 * (wx.real() * r23.real() - wx.imag() * r23.imag()) * c;
  d.d14 = -4.0 * std::exp(cd(0, om * s)) * ws.real() * r14 + 4.0 * ep * ws.real() * r23.real() -
          2.0 * ep * wx.real() * (1 - 2 * r22 - 2 * r33) - cd(0, 2) * ep * wx.imag() * (1 - 2 * r11 - r22 - r33);
  d.d23 = 2.0 * em * ws.real() * r14 + 2.0 * ep * ws.real() * std::conj(r14) - 4 * ws.real() * c * r23 +
          2 * wx.real() * c * (1 - 2 * r22 - 2 * r33) + 2 * wx.imag() * sn * (1 - 2 * r11 - 2 * r22);
  return d;
}

PrintedO printed_integrand_o(double om, const Mat4c& r, double tau, double s, cd ws, cd wx) {
  const cd r12 = r(0, 1), r13 = r(0, 2), r24 = r(1, 3), r34 = r(2, 3);
  const double c = std::cos(om * s), sn = std::sin(om * s);
  const cd e2 = std::exp(cd(0, 2 * om * tau));
  const cd eps_ = std::exp(cd(0, om * s)), ems = std::conj(eps_);
  const double wsr = ws.real(), wsi = ws.imag(), wxr = wx.real(), wxi = wx.imag();
  auto cj = [](cd z) { return std::conj(z); };
  PrintedO d;
  d.d12 = -2.0 * (wsr * c * (r12 - r34) - wsi * sn * (r12 + r34)) - 2.0 * wsr * eps_ * r12 +
          2.0 * e2 * wsr * ems * cj(r12) - 2.0 * e2 * ems * wx * cj(r24) + 2.0 * r24 * (wxr * c + wxi * sn) +
          2.0 * e2 * ems * wxr * cj(r13) - 2.0 * cj(wx) * c * r13;
  d.d13 = -4.0 * wsr * eps_ * r13 + cd(0, 2) * cj(ws) * sn * r13 + 2.0 * r24 * (wsr * c + wsi * sn) +
          2.0 * e2 * wsr * ems * cj(r13) - 2.0 * e2 * wx * ems * cj(r34) + 2.0 * r34 * (wxr * c + wxi * sn) +
          2.0 * e2 * wxr * ems * cj(r12) - 2.0 * cj(wx) * c * r12;
  d.d24 = -2.0 * wsr * eps_ * r24 - 2.0 * (wsr * c + wsi * sn) * r24 + 2.0 * (wsr * c - wsi * sn) * r13 +
          2.0 * e2 * wsr * ems * cj(r24) - 2.0 * e2 * cj(wx) * ems * cj(r12) + 2.0 * r12 * (wxr * c - wxi * sn) +
          2.0 * e2 * ems * wxr * cj(r34) - 2.0 * wx * c * r34;
  d.d34 = -2.0 * (wsr * c + wsi * sn) * r34 - 2.0 * wsr * eps_ * r34 + 2.0 * (wsr * c - wsi * sn) * r12 +
          2.0 * e2 * wsr * ems * cj(r34) + 2.0 * (wxr * c - wxi * sn) * r13 - 2.0 * e2 * cj(wx) * ems * cj(r13) -
          2.0 * wx * c * r24 + 2.0 * e2 * wxr * ems * cj(r24);
  return d;
}

cd rho23_correction(double om, const Mat4c& r, double s, cd wx) {
  const double r11 = r(0, 0).real(), r22 = r(1, 1).real(), r33 = r(2, 2).real();
  const double c = std::cos(om * s), sn = std::sin(om * s);
  const cd fixed = sn * (1 - 2 * r11 - r22 - r33) + cd(0, 1) * c * (r22 - r33);
  return 2 * wx.imag() * (fixed - sn * (1 - 2 * r11 - 2 * r22));
}

NzSolution integrate_nz(const Params& p, const NonMarkovConfig& cfg, const Mat4c& rho0) {
  const double h = cfg.step(p);
  const Params q = kernel_params(p, cfg);
  if (q.L <= 0) throw unsupported_regime("integrate_nz: L = 0 stacks both detectors on one trajectory");
  if (!rho0.allFinite()) throw invalid_state("integrate_nz: non-finite initial state");
  const std::size_t n_steps = step_count(cfg, h);
  const double om = p.omega, g2 = p.g * p.g;
  const double cutoff = std::min(cfg.memory_cutoff / p.a, (n_steps + 1) * h);

  const StepWeights ws([&](double s) { return correlators::wightman_self(s, q); }, h, cutoff,
                       self_breaks(q.epsilon));
  const StepWeights wx([&](double s) { return correlators::wightman_cross(s, q); }, h, cutoff,
                       cross_breaks(q.epsilon, correlators::light_cone_lag(q)));
  const long lag = std::max(ws.max_lag(), wx.max_lag());

  // history of mu_j(tau_m) rho_m
  std::vector<Mat4c> hist[2];
  for (auto& v : hist) v.reserve(n_steps + 2);

  NzSolution sol;
  Mat4c rho = rho0;
  for (int j = 0; j < 2; ++j) hist[j].push_back(mu(j, 0.0, om) * rho);
  sol.taus.push_back(0.0);
  sol.rho_interaction.push_back(rho);
  const cd tr0 = rho0.trace();
  for (std::size_t n = 0; n < n_steps; ++n) {
    const long nl = static_cast<long>(n);
    Mat4c base_s[2], base_x[2], mk[2];
    for (int j = 0; j < 2; ++j) {
      Mat4c bs = Mat4c::Zero(), bx = Mat4c::Zero();
      for (long m = std::max(0L, nl - lag); m <= nl; ++m) {
        const Mat4c& pm = hist[j][m];
        bs.noalias() += ws.weight(nl - m) * pm;
        bx.noalias() += wx.weight(nl - m) * pm;
      }
      bs.noalias() -= ws.boundary(nl) * hist[j][0];
      bx.noalias() -= wx.boundary(nl) * hist[j][0];
      check_finite(bs, "W_s");
      check_finite(bx, "W_x");
      base_s[j] = bs;
      base_x[j] = bx;
      mk[j] = mu(j, (n + 0.5) * h, om);
    }
    // the newest point enters only through weight(-1); fixed-point iteration
    Mat4c next[2] = {mu(0, (n + 1) * h, om) * rho, mu(1, (n + 1) * h, om) * rho};
    Mat4c rho_new = rho;
    for (int it = 0; it < 3; ++it) {
      Mat4c inc = Mat4c::Zero();
      for (int j = 0; j < 2; ++j) {
        const Mat4c qs = base_s[j] + ws.weight(-1) * next[j];
        const Mat4c qx = base_x[j] + wx.weight(-1) * next[j];
        for (int k = 0; k < 2; ++k) {
          const Mat4c& qq = (j == k) ? qs : qx;
          const Mat4c t = qq * mk[k] - mk[k] * qq;
          inc += t + t.adjoint();
        }
      }
      rho_new = rho + g2 * inc;
      for (int j = 0; j < 2; ++j) next[j] = mu(j, (n + 1) * h, om) * rho_new;
    }
    rho = rho_new;
    for (int j = 0; j < 2; ++j) hist[j].push_back(next[j]);
    if (!rho.allFinite()) throw numerical_error("integrate_nz: non-finite state at step " + std::to_string(n + 1));
    if ((n + 1) % cfg.sample_every == 0 || n + 1 == n_steps) {
      sol.taus.push_back((n + 1) * h);
      sol.rho_interaction.push_back(rho);
    }
  }
  if (std::abs(rho.trace() - tr0) > 1e-8) throw numerical_error("integrate_nz: trace drift exceeds 1e-8");
  return sol;
}

XSamples integrate_nz_x(const Params& p, const NonMarkovConfig& cfg, const XVector& x0) {
  const NzSolution s = integrate_nz(p, cfg, embed_blocks(x0, OVector::Zero(), 1.0));
  XSamples out;
  out.taus = s.taus;
  for (const auto& r : s.rho_interaction) out.x.push_back(x_coords(r));
  return out;
}

OSamples integrate_nz_o(const Params& p, const NonMarkovConfig& cfg, const OVector& y0) {
  const NzSolution s = integrate_nz(p, cfg, embed_blocks(XVector::Zero(), y0, 0.0));
  OSamples out;
  out.taus = s.taus;
  for (const auto& r : s.rho_interaction) out.y.push_back(o_coords(r));
  return out;
}

TimeSeries to_time_series(const Params& p, const NzSolution& sol) {
  TimeSeries ts;
  ts.params = p;
  ts.solver = SolverTag::nonmarkov;
  ts.taus = sol.taus;
  for (std::size_t k = 0; k < sol.taus.size(); ++k) {
    Mat4c m = to_schrodinger_picture(sol.rho_interaction[k], sol.taus[k], p.omega);
    ts.states.push_back(DensityMatrix4::unchecked(0.5 * (m + m.adjoint())));
  }
  return ts;
}

GapReport markovianity_gap(const Params& p, const NonMarkovConfig& cfg, const DensityMatrix4& rho0,
                           double window_lo, double window_hi) {
  if (!(window_hi >= window_lo)) throw std::invalid_argument("markovianity_gap: empty window");
  const NzSolution nz = integrate_nz(p, cfg, to_interaction_picture(rho0.matrix(), 0.0, p.omega));
  const TimeSeries mk = markovian::evolve(p, rho0, nz.taus, false);
  GapReport r;
  r.window_lo = window_lo;
  r.window_hi = window_hi;
  r.taus = nz.taus;
  for (std::size_t k = 0; k < nz.taus.size(); ++k) {
    const Mat4c s = to_schrodinger_picture(nz.rho_interaction[k], nz.taus[k], p.omega);
    const double d = (s - mk.states[k].matrix()).cwiseAbs().maxCoeff();
    r.gap.push_back(d);
    if (nz.taus[k] >= window_lo && nz.taus[k] <= window_hi) r.max_gap = std::max(r.max_gap, d);
  }
  return r;
}

AliceSolution integrate_nz_alice(const Params& p, const NonMarkovConfig& cfg, cd rho12_0, bool counterterm) {
  const double h = cfg.step(p);
  const Params q = kernel_params(p, cfg);
  const std::size_t n_steps = step_count(cfg, h);
  const double om = p.omega, g2 = p.g * p.g;
  const double cutoff = std::min(cfg.memory_cutoff / p.a, (n_steps + 1) * h);
  const auto br = self_breaks(q.epsilon);
  const StepWeights wp(
      [&](double s) { return correlators::wightman_self(s, q).real() * std::exp(cd(0, om * s)); }, h, cutoff, br);
  const StepWeights wm(
      [&](double s) { return correlators::wightman_self(s, q).real() * std::exp(cd(0, -om * s)); }, h, cutoff, br);
  const long lag = std::max(wp.max_lag(), wm.max_lag());
  const double ct = counterterm ? correlators::single_detector_D(om, q) : 0.0;

  std::vector<cd> hist{rho12_0};
  hist.reserve(n_steps + 1);
  AliceSolution sol;
  cd r = rho12_0;
  sol.taus.push_back(0.0);
  sol.rho12.push_back(r);
  for (std::size_t n = 0; n < n_steps; ++n) {
    const long nl = static_cast<long>(n);
    cd a = 0, b = 0;
    for (long m = std::max(0L, nl - lag); m <= nl; ++m) {
      a += wp.weight(nl - m) * hist[m];
      b += wm.weight(nl - m) * std::conj(hist[m]);
    }
    a -= wp.boundary(nl) * hist[0];
    b -= wm.boundary(nl) * std::conj(hist[0]);
    const cd phase = std::exp(cd(0, 2 * om * (n + 0.5) * h));
    cd next = r;
    for (int it = 0; it < 3; ++it) {
      const cd inc = -2 * g2 * (a + wp.weight(-1) * next) +
                     2 * g2 * phase * (b + wm.weight(-1) * std::conj(next)) + cd(0, g2 * ct) * 0.5 * h * (r + next);
      next = r + inc;
    }
    r = next;
    hist.push_back(r);
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
      throw numerical_error("integrate_nz_alice: non-finite state");
    if ((n + 1) % cfg.sample_every == 0 || n + 1 == n_steps) {
      sol.taus.push_back((n + 1) * h);
      sol.rho12.push_back(r);
    }
  }
  return sol;
}

}  // namespace udw::nonmarkov
