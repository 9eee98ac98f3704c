// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "test_util.hpp"
#include "udw/correlators.hpp"
#include "udw/entanglement.hpp"
#include "udw/gksl.hpp"
#include "udw/markovian.hpp"
#include "udw/nonmarkov.hpp"
#include "udw/validity.hpp"

using namespace udw;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Params figure(double aL) { return Params{0.01, 1.0, 0.01, aL, 0.01}; }

std::vector<double> g2a_grid(const Params& p, double g2at_max, int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = g2at_max / (p.g * p.g * p.a) * k / (n - 1);
  return t;
}

// Delta N = N(non-RWA) - N(RWA) on a grid of g^2 a tau in [0, 20].
std::pair<std::vector<double>, std::vector<double>> delta_negativity(const Params& p, const DensityMatrix4& r0,
                                                                     int n = 20001) {
  const auto taus = g2a_grid(p, 20.0, n);
  const auto full = entanglement::negativity_series(markovian::evolve(p, r0, taus, false));
  const auto rwa = entanglement::negativity_series(markovian::evolve(p, r0, taus, true));
  return {taus, entanglement::delta_negativity(full, rwa)};
}

Outcome c1() {
  using oracle::Kind;
  double worst = 0, worst_ds = 0;
  for (int i = 0; i < 10; ++i) {
    const double aL = 0.05 * std::pow(400.0, i / 9.0);
    const Params p{0.01, 1.0, 0.01, aL, 0.01};
    const auto c = correlators::constants(p);
    const std::pair<double, Kind> pairs[] = {{c.c_s, Kind::c_s},       {c.c_x, Kind::c_x},
                                             {c.k_x, Kind::k_x},       {c.s_s_prime, Kind::s_s},
                                             {c.s_x_prime, Kind::s_x}, {c.d_x_prime, Kind::d_x}};
    for (const auto& [v, k] : pairs) worst = std::max(worst, oracle::rel_err(v, oracle::extrapolated(k, 1, aL)));
  }
  for (double eps : {0.01, 0.001}) {
    const Params p{0.01, 1.0, 0.01, 2.0, eps};
    worst_ds = std::max(worst_ds, oracle::rel_err(correlators::d_s_prime(p),
                                                  oracle::defining_integral(Kind::d_s, 1, 2, eps)));
  }
  return {worst <= 1e-5 && worst_ds <= 1e-3,
          fmt("max rel err %.2e (limit 1e-5), D'_s finite-eps %.2e (limit 1e-3)", worst, worst_ds)};
}

Outcome c2() {
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (double aL : {0.25, 2.0}) {
    const Params p = figure(aL);
    const auto c = correlators::constants(p);
    for (bool rwa : {false, true}) {
      const auto gen = gksl::build_gksl(p, c, rwa);
      const auto gx = markovian::build_x_generator(p, c, rwa);
      const auto go = markovian::build_o_generator(p, c, rwa);
      for (int k = 0; k < 200; ++k) {
        const DensityMatrix4 r = testutil::random_state(rng);
        const Mat4c d = gksl::rhs(gen, r.matrix());
        const auto [x, y] = split_blocks(r);
        worst = std::max(worst, (x_coords(d) - (gx.matrix() * x + gx.source())).cwiseAbs().maxCoeff());
        worst = std::max(worst, (o_coords(d) - go.matrix() * y).cwiseAbs().maxCoeff());
      }
    }
  }
  return {worst <= 1e-12, fmt("max entrywise difference %.2e over 200 states x 2 separations x 2 flags", worst)};
}

Outcome c3() {
  double min_eig = 1e300, eig_err = 0;
  for (int i = 0; i <= 30; ++i) {
    const Params p = figure(std::pow(10.0, -3.0 + 6.0 * i / 30));
    const auto c = correlators::constants(p);
    const auto g = gksl::build_gksl(p, c, false).gamma;
    min_eig = std::min(min_eig, gksl::cp_certificate(g).min_eigenvalue);
    auto e = gksl::kossakowski_eigenvalues(g);
    std::vector<double> v(e.data(), e.data() + 6);
    std::sort(v.begin(), v.end());
    const double g2 = p.g * p.g;
    std::vector<double> expect{0, 0, 0, 0, g2 * (c.c_s - c.c_x), g2 * (c.c_s + c.c_x)};
    std::sort(expect.begin(), expect.end());
    for (int k = 0; k < 6; ++k) eig_err = std::max(eig_err, std::abs(v[k] - expect[k]));
  }
  return {min_eig >= -1e-12 && eig_err <= 1e-12,
          fmt("min eigenvalue %.2e (>= -1e-12), eigenvalue error %.2e (<= 1e-12)", min_eig, eig_err)};
}

Outcome c4() {
  const Params p{0.01, 1.0, 0.01, 2.0, 0.01};
  const auto c = correlators::constants(p);
  const double lim = 100 * std::pow(p.g, 4) * p.a;
  const auto sx = markovian::spectrum(markovian::build_x_generator(p, c, false), p.omega);
  const auto so = markovian::spectrum(markovian::build_o_generator(p, c, false), p.omega);
  const double rx = markovian::spectral_mismatch(sx.eigenvalues, markovian::predicted_spectrum_x(p, c).eigenvalues);
  const double ro = markovian::spectral_mismatch(so.eigenvalues, markovian::predicted_spectrum_o(p, c).eigenvalues);
  const double g2 = p.g * p.g;
  double exact = 0;
  for (cd target : {cd(-2 * g2 * c.c_s, 2 * g2 * c.k_x), cd(-2 * g2 * c.c_s, -2 * g2 * c.k_x)}) {
    double best = 1e300;
    for (cd e : sx.eigenvalues) best = std::min(best, std::abs(e - target));
    exact = std::max(exact, best);
  }
  return {rx <= lim && ro <= lim && exact <= 1e-14,
          fmt("X residual %.2e, O residual %.2e (limit %.1e), exact pair %.1e (limit 1e-14)", rx, ro, lim, exact)};
}

Outcome c5() {
  const Params p{0.01, 1.0, 0.01, 2.0, 0.01};
  const auto c = correlators::constants(p);
  const auto gen = markovian::build_x_generator(p, c, false);
  const XVector xs = markovian::steady_state_x(gen);
  const XVector xr = markovian::steady_state_x(markovian::build_x_generator(p, c, true));
  XVector mixed;
  mixed << 0.25, 0.25, 0.25, 0, 0, 0, 0;
  const double dev = (xs - mixed).cwiseAbs().maxCoeff();
  const double agree = (xs - xr).cwiseAbs().maxCoeff();
  // the O block has no source term: its only fixed point is y = 0
  const auto go = markovian::build_o_generator(p, c, false);
  const double smin = go.matrix().jacobiSvd().singularValues().minCoeff();
  return {dev <= 10 * p.g * p.g && agree <= 1e-10 && smin > 0,
          fmt("|x* - mixed| %.2e (limit 1e-3), RWA vs non-RWA %.2e (limit 1e-10), O-block min singular value %.2e",
              dev, agree, smin)};
}

Outcome c6() {
  const Params p = figure(2.0);
  const auto c = correlators::constants(p);
  const DensityMatrix4 bell = states::bell_phi_plus();
  const auto taus = g2a_grid(p, 5.0, 401);
  const auto [x0, y0] = split_blocks(bell);
  double err = 0, err_rwa = 0;
  const auto xs = markovian::propagate_x(markovian::build_x_generator(p, c, false), x0, taus);
  const auto xr = markovian::propagate_x(markovian::build_x_generator(p, c, true), x0, taus);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    err = std::max(err, std::abs(markovian::rho14_closed_form(p, c, bell, taus[i], false) - cd(xs[i](3), xs[i](4))));
    err_rwa =
        std::max(err_rwa, std::abs(markovian::rho14_closed_form(p, c, bell, taus[i], true) - cd(xr[i](3), xr[i](4))));
  }
  return {err <= 1e-6 && err_rwa <= 1e-6,
          fmt("non-RWA max error %.2e, RWA max error %.2e (limit 1e-6); the non-RWA form is leading order, "
              "its error scales as g^2",
              err, err_rwa)};
}

Outcome c7() {
  const Params p = figure(0.25);
  const auto taus = g2a_grid(p, 20.0, 4001);
  const auto full = entanglement::negativity_series(markovian::evolve(p, states::ground(), taus, false));
  const auto rwa = entanglement::negativity_series(markovian::evolve(p, states::ground(), taus, true));
  double nmax = 0, rmax = 0;
  for (double v : full.values) nmax = std::max(nmax, v);
  for (double v : rwa.values) rmax = std::max(rmax, v);
  return {nmax > 1e-6 && rmax <= 1e-12, fmt("max non-RWA negativity %.2e (> 1e-6), max RWA %.2e (<= 1e-12)", nmax, rmax)};
}

Outcome c8() {
  bool ok = true;
  std::string d;
  for (double aL : {0.25, 2.0}) {
    const auto [taus, dn] = delta_negativity(figure(aL), states::down_up());
    double m = 0;
    for (double v : dn) m = std::max(m, std::abs(v));
    ok = ok && m >= 1e-10 && m <= 1e-6;
    d += fmt("aL=%.2f: max|dN| %.2e; ", aL, m);
  }
  return {ok, d + "band [1e-10, 1e-6]"};
}

Outcome c9() {
  const Params p = figure(2.0);
  const auto [taus, dn] = delta_negativity(p, states::bell_phi_plus());
  double m = 0, first = 0, last = 0;
  int flips = 0;
  const std::size_t n = dn.size();
  for (std::size_t k = 0; k < n; ++k) {
    m = std::max(m, std::abs(dn[k]));
    if (k < n / 4) first = std::max(first, std::abs(dn[k]));
    if (k >= n - n / 4) last = std::max(last, std::abs(dn[k]));
  }
  // sign changes between points where |dN| is above round-off
  int prev = 0;
  for (double v : dn) {
    if (std::abs(v) <= 1e-14) continue;
    const int s = v > 0 ? 1 : -1;
    if (prev != 0 && s != prev) ++flips;
    prev = s;
  }
  return {m <= 10 * p.g * p.g && flips >= 5 && last < first,
          fmt("max|dN| %.2e (<= 1e-3), sign changes %.0f (>= 5), envelope first/last quarter %.2e / %.2e", m,
              double(flips), first, last)};
}

Outcome c10() {
  nonmarkov::NonMarkovConfig cfg;
  cfg.tau_max = 200.0;
  cfg.sample_every = 50;
  const Params deep{0.01, 1.0, 0.01, 2.0, 0.01};
  const double g2 = deep.g * deep.g;
  double worst = 0;
  for (const auto& st : {states::ground(), states::up_up(), states::bell_phi_plus()})
    worst = std::max(worst, nonmarkov::markovianity_gap(deep, cfg, st, 5.0, 200.0).max_gap);
  Params fast = deep;
  fast.omega = 2.0;
  const double broken = nonmarkov::markovianity_gap(fast, cfg, states::up_up(), 5.0, 200.0).max_gap;
  return {worst <= 5 * g2 && broken > 10 * 5 * g2,
          fmt("deep gap %.2f g^2 (limit 5), Omega/a = 2 gap %.1f g^2 (must exceed 50)", worst / g2, broken / g2)};
}

Outcome c11() {
  // g = 1e-3 keeps the O(g^4) content of the resummed NZ solution below 1e-4 relative
  const Params p{1e-3, 1.0, 0.01, 2.0, 0.01};
  const double tau = 2.0;
  nonmarkov::NonMarkovConfig cfg;
  cfg.tau_max = tau;
  const Mat4c r = nonmarkov::integrate_nz(p, cfg, states::ground().matrix()).rho_interaction.back();
  auto f = [&](double s) {
    return (tau - s) * 2 * (oracle::w_self(s, p.a, p.epsilon) * std::exp(oracle::cd(0, -p.omega * s))).real();
  };
  const double e = p.epsilon;
  const double born = p.g * p.g * oracle::qagp(f, oracle::clip({e, 10 * e, 100 * e, 1.0}, 0.0, tau), 1e-12);
  const double worst = std::max({oracle::rel_err(r(1, 1).real(), born), oracle::rel_err(r(2, 2).real(), born),
                                 oracle::rel_err(1 - r(3, 3).real(), 2 * born)});
  return {worst <= 1e-4, fmt("max relative error of populations %.2e (limit 1e-4) at g = 1e-3, a tau = 2", worst)};
}

Outcome c12() {
  auto pt = [](double g, double om, double aL) { return Params{g, 1.0, om, aL, 0.01}; };
  const auto deep = validity::evaluate(pt(0.01, 0.01, 2));
  const auto fast = validity::evaluate(pt(0.01, 2, 2));
  const auto stacked = validity::evaluate(pt(0.01, 0.01, 0));
  const auto degen = validity::evaluate(pt(0.01, 1e-4, 2));
  const auto* c1 = fast.find("pi*omega/a");
  const auto* nd = degen.find("g^2*a/omega");
  bool stack_note = false;
  for (const auto& n : stacked.regime_notes) stack_note = stack_note || n.find("stacked trajectory") != std::string::npos;
  const bool ok = deep.overall && c1 && !c1->pass && !stacked.overall && stack_note && nd && !nd->pass;
  return {ok, fmt("deep overall %.0f, pi*omega/a at Omega/a=2 = %.3f, stacked note %.0f, g^2*a/omega = %.2f",
                  deep.overall, c1 ? c1->value : NAN, stack_note, nd ? nd->value : NAN)};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, c1}, {2, c2}, {3, c3}, {4, c4}, {5, c5}, {6, c6}, {7, c7}, {8, c8}, {9, c9}, {10, c10}, {11, c11}, {12, c12}};
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("criterion %2d: %s  [%.1f s]  %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
