#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fowler/error.hpp"
#include "fowler/invariants.hpp"
#include "fowler/model.hpp"
#include "fowler/shooting.hpp"
#include "gen.hpp"

using namespace fowler;

namespace {

// Oracle: H written out term by term for a scalar state.
double energy_oracle(const Params& P, double v, double d1, double d2, double d3) {
  return -d3 * d1 + 0.5 * d2 * d2 + 0.5 * P.K2 * d1 * d1 - 0.5 * P.K0 * v * v +
         P.chat * std::pow(std::abs(v), P.sobolev_exp);
}

Trajectory constant_trajectory(const Params& P, double span) {
  StepperConfig c;
  c.dt = 1e-2;
  c.t_end = span;
  return integrate(P, CylState::even(0.0, P.a0, 0.0), c);
}

Trajectory synthetic(int p, double t0, double t1, int count, auto&& fill) {
  Trajectory tr;
  for (int k = 0; k < count; ++k) {
    CylState s(t0 + (t1 - t0) * k / (count - 1), p);
    fill(s);
    tr.states.push_back(s);
  }
  return tr;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("hamiltonian examples") {
  const auto P = derive_params(6, 1);
  CHECK(hamiltonian(P, CylState(0.0, 1)) == 0.0);
  CHECK(std::abs(hamiltonian(P, CylState::even(0.0, 1.0, -1.0))) <= 1e-15);
  const double hc = hamiltonian(P, CylState::even(0.0, P.a0, 0.0));
  CHECK(hc == doctest::Approx(-4.5 * std::sqrt(3.0 / 8.0) + 4.0 * std::pow(3.0 / 8.0, 1.5)).epsilon(1e-14));
  CHECK(hc == doctest::Approx(-1.837117).epsilon(1e-6));
}

TEST_CASE("pohozaev examples") {
  const auto P = derive_params(6, 1);
  const auto h = pohozaev(P, CylState::scalar(0.0, spherical_state(P, 1.0, 0.0)));
  CHECK(std::abs(h.cyl) <= 1e-15);
  CHECK(std::abs(h.sph) <= 1e-13);
  const auto c = pohozaev(P, CylState::even(0.0, P.a0, 0.0));
  CHECK(c.cyl == doctest::Approx(-1.837117).epsilon(1e-6));
  CHECK(c.sph == doctest::Approx(-56.962).epsilon(1e-5));
  CHECK(c.sph == c.cyl * P.sphere_area);
  const auto z = pohozaev(P, CylState(0.0, 1));
  CHECK(z.cyl == 0.0);
  CHECK(z.sph == 0.0);
}

TEST_CASE("bubble states have zero energy everywhere") {
  for (int n = 5; n <= 12; ++n) {
    const auto P = derive_params(n, 1);
    for (double t : {-4.0, -1.0, 0.0, 0.5, 3.0}) {
      const auto s = spherical_state(P, 1.7, t);
      CHECK(std::abs(hamiltonian(P, CylState::scalar(t, s))) <= 1e-13);
    }
  }
}

TEST_CASE("property: hamiltonian matches the term-by-term oracle") {
  gen::Rng rng(21);
  for (int k = 0; k < gen::kCases; ++k) {
    const auto P = derive_params(rng.integer(5, 12), 1);
    const double v = rng.uniform(0, 1.5), d1 = rng.uniform(-1, 1), d2 = rng.uniform(-1, 1), d3 = rng.uniform(-1, 1);
    CylState s(0.0, 1);
    s.v(0) = v;
    s.d1(0) = d1;
    s.d2(0) = d2;
    s.d3(0) = d3;
    CHECK(hamiltonian(P, s) == doctest::Approx(energy_oracle(P, v, d1, d2, d3)).epsilon(1e-13));
  }
}

TEST_CASE("property: static states follow the closed form") {
  gen::Rng rng(22);
  for (int k = 0; k < gen::kCases; ++k) {
    const int p = rng.integer(1, 4);
    const auto P = derive_params(rng.integer(5, 12), p);
    CylState s(0.0, p);
    double n2 = 0;
    for (int i = 0; i < p; ++i) {
      s.v(i) = rng.uniform(0, 1);
      n2 += s.v(i) * s.v(i);
    }
    const double quad = 0.5 * P.K0 * n2, power = P.chat * std::pow(std::sqrt(n2), P.sobolev_exp);
    const double closed = power - quad;
    // relative to the size of the terms, which cancel near a0
    CHECK(std::abs(hamiltonian(P, s) - closed) <= 1e-14 * std::max({1.0, quad, power}));
  }
}

TEST_CASE("property: energy of a proportional vector state equals the scalar energy") {
  gen::Rng rng(23);
  for (int k = 0; k < gen::kCases; ++k) {
    const int p = rng.integer(2, 5);
    const auto P = derive_params(rng.integer(5, 10), p);
    const auto lambda = rng.unit_vector(p);
    const ScalarState s{rng.uniform(0.1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK(hamiltonian(P, CylState::scaled(0.0, s, lambda)) ==
          doctest::Approx(hamiltonian(P, CylState::scalar(0.0, s))).epsilon(1e-12));
  }
}

TEST_CASE("drift examples") {
  const auto P = derive_params(6, 1);
  CHECK(drift(P, constant_trajectory(P, 50.0)) <= 1e-12);
  CHECK(drift(P, homoclinic_trajectory(P, 1.0, {1.0}, -10.0, 10.0, 1e-3)) <= 1e-8);
  const auto orbit = delaunay_orbit(P, 0.5 * P.a0);
  CHECK(drift(P, orbit.realize(0.0, 5 * orbit.period())) <= 1e-8);
  CHECK(code_of([&] { drift(P, Trajectory{}); }) == ErrorCode::EmptyTrajectory);
}

TEST_CASE("gradient monitor") {
  const auto P = derive_params(6, 1);
  CHECK(monitor_gradient_bound(P, homoclinic_trajectory(P, 1.0, {1.0}, -10.0, 10.0)).pass);
  const auto c = monitor_gradient_bound(P, constant_trajectory(P, 5.0));
  CHECK(c.pass);
  CHECK(c.worst_margin == doctest::Approx(P.gamma * P.a0).epsilon(1e-12));
  const auto bad = synthetic(1, 0.0, 1.0, 50, [&](CylState& s) {
    s.v(0) = std::exp(2 * P.gamma * s.t);
    s.d1(0) = 2 * P.gamma * s.v(0);
  });
  const auto r = monitor_gradient_bound(P, bad);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_margin < 0);
  const auto zero = synthetic(1, 0.0, 1.0, 10, [](CylState& s) { s.v(0) = s.t - 0.5; });
  CHECK(code_of([&] { monitor_gradient_bound(P, zero); }) == ErrorCode::NonPositiveComponent);
}

TEST_CASE("bound monitor") {
  const auto P = derive_params(6, 1);
  const auto h = monitor_bound(P, homoclinic_trajectory(P, 1.0, {1.0}, -10.0, 10.0));
  CHECK(h.pass);
  CHECK(h.extreme == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(P.bound_level() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(monitor_bound(P, constant_trajectory(P, 5.0)).pass);
  const auto two = synthetic(1, 0.0, 1.0, 10, [](CylState& s) { s.v(0) = 2.0; });
  CHECK_FALSE(monitor_bound(P, two).pass);
}

TEST_CASE("quotient spread") {
  const auto P3 = derive_params(6, 3);
  const std::vector<double> lambda = {1.0 / 3, 2.0 / 3, 2.0 / 3};
  CHECK(quotient_spread(homoclinic_trajectory(P3, 1.0, lambda, -10.0, 10.0)) <= 1e-9);
  CHECK(quotient_spread(constant_trajectory(derive_params(6, 1), 3.0)) == 0.0);

  CylState uneq(0.0, 2);
  uneq.v(0) = 0.3;
  uneq.v(1) = 0.5;
  uneq.d2(0) = 0.1;
  uneq.d2(1) = -0.1;
  StepperConfig c;
  c.dt = 1e-3;
  c.t_end = 1.0;
  const auto tr = integrate(derive_params(6, 2), uneq, c);
  REQUIRE(tr.terminal == Terminal::Completed);
  CHECK(quotient_spread(tr) > 1e-3);
}

TEST_CASE("asymptotic limits") {
  const auto P = derive_params(6, 1);
  // the tail window [15, 16] starts well inside the decay, where sech < 1e-6
  const auto h = asymptotic_limits(homoclinic_trajectory(P, 1.0, {1.0}, -10.0, 16.0), 1.0);
  REQUIRE(h.size() == 1);
  CHECK(h[0].converged);
  CHECK(std::abs(h[0].value) <= 1e-6);
  CHECK(h[0].derivatives_vanish);

  const auto c = asymptotic_limits(constant_trajectory(P, 20.0), 5.0);
  CHECK(c[0].converged);
  CHECK(c[0].value == doctest::Approx(P.a0).epsilon(1e-12));
  CHECK(c[0].derivatives_vanish);

  const auto orbit = delaunay_orbit(P, 0.6 * P.a0);
  const auto d = asymptotic_limits(orbit.realize(0.0, 20.0), 5.0);
  CHECK_FALSE(d[0].converged);
  CHECK(d[0].oscillation > 0.1);
}

TEST_CASE("report and classification tolerance") {
  const auto P = derive_params(6, 1);
  const auto tr = homoclinic_trajectory(P, 1.0, {1.0}, -10.0, 10.0);
  const auto rep = make_report(P, tr);
  CHECK(std::abs(rep.H0) <= 1e-12);
  CHECK(rep.max_drift <= 1e-8);
  CHECK(rep.pohozaev_sph == rep.pohozaev_cyl * P.sphere_area);
  CHECK(rep.monitors.count("bound") == 1);
  CHECK(rep.monitors.count("gradient_bound") == 1);
  CHECK(classification_tolerance(0.0) == 1e-8);
  CHECK(classification_tolerance(1e-6) == doctest::Approx(1e-4));
}

TEST_CASE("sobolev identity for the bubble") {
  for (int n : {5, 6, 8}) {
    const auto P = derive_params(n, 1);
    for (double mu : {0.5, 1.0, 2.0}) {
      const auto s = sobolev_identity(P, mu);
      CAPTURE(n);
      CHECK(s.relative_gap <= 1e-6);
      CHECK(s.dirichlet > 0);
    }
  }
  // n = 6, mu = 1 by hand: c ω5 ∫ (2/(1+r²))^6 r^5 dr = 24 π³ · 64 · B(3,3)/2 = 24 π³ · 16/15
  const auto P = derive_params(6, 1);
  CHECK(sobolev_identity(P, 1.0).potential == doctest::Approx(24.0 * std::pow(std::numbers::pi, 3) * 16.0 / 15.0).epsilon(1e-9));
}
