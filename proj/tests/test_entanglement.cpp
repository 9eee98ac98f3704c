#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "udw/correlators.hpp"
#include "udw/entanglement.hpp"
#include "udw/markovian.hpp"

using namespace udw;
using namespace udw::entanglement;

TEST_CASE("partial transpose") {
  const Mat4c b = states::bell_phi_plus().matrix();
  const Mat4c pt = partial_transpose_a(b);
  // (|uu><dd| + h.c.)/2 maps to (|du><ud| + h.c.)/2
  CHECK(std::abs(pt(2, 1) - 0.5) <= 1e-15);
  CHECK(std::abs(pt(1, 2) - 0.5) <= 1e-15);
  CHECK(pt(0, 3) == cd(0.0));
  std::mt19937_64 rng(3);
  const Mat4c r = testutil::random_state(rng).matrix();
  CHECK((partial_transpose_a(partial_transpose_a(r)) - r).norm() == 0.0);
  CHECK(std::abs(partial_transpose_a(r).trace() - 1.0) < 1e-15);
}

TEST_CASE("negativity of reference states") {
  CHECK(negativity(states::bell_phi_plus()) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(negativity(states::ground()) == 0.0);
  CHECK(negativity(states::down_up()) == 0.0);
  CHECK(negativity(states::maximally_mixed()) == 0.0);
  // Werner state p |Phi+><Phi+| + (1 - p) I/4: negativity max(0, (3p - 1)/4)
  for (double p : {0.2, 1.0 / 3.0, 0.5, 0.9}) {
    const Mat4c w = p * states::bell_phi_plus().matrix() + (1 - p) * Mat4c::Identity() / 4.0;
    CHECK(negativity(DensityMatrix4(w)) == doctest::Approx(std::max(0.0, (3 * p - 1) / 4)).epsilon(1e-12));
  }
}

TEST_CASE("negativity equals (||rho^TA||_1 - 1)/2 on random states") {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 100; ++k) {
    const DensityMatrix4 r = testutil::random_state(rng);
    const auto ev = partial_transpose_spectrum(r.matrix());
    const double trace_norm = ev.cwiseAbs().sum();
    const double n = negativity(r);
    const double ref = 0.5 * (trace_norm - 1);
    CHECK(std::abs(n - (ref < negativity_floor ? 0.0 : ref)) <= 1e-14);
    CHECK(n >= 0);
    CHECK(n <= 0.5);
  }
}

TEST_CASE("invalid input") {
  Mat4c m = Mat4c::Identity() / 4.0;
  m(0, 0) += 1e-6;
  CHECK_THROWS_AS(negativity(DensityMatrix4::unchecked(m)), invalid_state);
}

TEST_CASE("series and differences") {
  const Params p{0.01, 1.0, 0.01, 2.0, 0.01};
  std::vector<double> taus;
  for (int k = 0; k < 50; ++k) taus.push_back(k * 2000.0);
  const auto a = negativity_series(markovian::evolve(p, states::bell_phi_plus(), taus, false));
  const auto b = negativity_series(markovian::evolve(p, states::bell_phi_plus(), taus, true));
  CHECK(a.values.size() == taus.size());
  CHECK(a.solver == SolverTag::markov);
  CHECK(b.solver == SolverTag::markov_rwa);
  const auto d = delta_negativity(a, a);
  for (double v : d) CHECK(v == 0.0);
  auto c = b;
  c.taus.back() += 1;
  CHECK_THROWS_AS(delta_negativity(a, c), std::invalid_argument);
}

TEST_CASE("RWA never entangles the ground state") {
  const Params p{0.01, 1.0, 0.01, 0.25, 0.01};
  std::vector<double> taus;
  for (int k = 0; k <= 400; ++k) taus.push_back(k * 20.0 / (p.g * p.g) / 400);
  const auto n = negativity_series(markovian::evolve(p, states::ground(), taus, true));
  for (double v : n.values) CHECK(v <= 1e-12);
}
