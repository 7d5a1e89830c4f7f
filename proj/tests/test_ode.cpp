#include <doctest.h>

#include <cmath>

#include "fowler/error.hpp"
#include "fowler/invariants.hpp"
#include "fowler/model.hpp"
#include "fowler/ode.hpp"
#include "fowler/shooting.hpp"
#include "gen.hpp"

using namespace fowler;

namespace {

// Oracle for the closed-form orbit: sech(t)^γ with derivatives by hand for n = 6.
double sech6(double t) { return 1.0 / std::cosh(t); }

StepperConfig rk4(double dt, double t_end) {
  StepperConfig c;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST_CASE("rhs examples") {
  const auto P = derive_params(6, 1);
  for (double x : rhs(P, CylState(0.0, 1))) CHECK(x == 0.0);
  for (double x : rhs(P, CylState::even(0.0, P.a0, 0.0))) CHECK(x == 0.0);
  CylState s(0.0, 1);
  s.v(0) = 1;
  s.d2(0) = -1;
  const auto f = rhs(P, s);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == -1.0);
  CHECK(f[2] == 0.0);
  CHECK(f[3] == 5.0);
  // cross-check: the fourth derivative of sech at 0 is 5
  const double h = 1e-3;
  const double fd4 = (sech6(-2 * h) - 4 * sech6(-h) + 6 * sech6(0) - 4 * sech6(h) + sech6(2 * h)) / std::pow(h, 4);
  CHECK(fd4 == doctest::Approx(5.0).epsilon(1e-4));
}

TEST_CASE("rhs couples components through the euclidean norm") {
  const auto P = derive_params(6, 2);
  CylState s(0.0, 2);
  s.v(0) = 0.3;
  s.v(1) = 0.4;
  const auto f = rhs(P, s);
  const double coupling = P.c * std::pow(0.5, P.nonlinear_exp()) - P.K0;
  CHECK(f[3 * 2 + 0] == doctest::Approx(coupling * 0.3).epsilon(1e-14));
  CHECK(f[3 * 2 + 1] == doctest::Approx(coupling * 0.4).epsilon(1e-14));
  s.y[0] = std::nan("");
  CHECK_THROWS_AS(rhs(P, s), Error);
}

TEST_CASE("zero state stays zero") {
  const auto P = derive_params(6, 1);
  const auto tr = integrate(P, CylState(0.0, 1), rk4(0.01, 5.0));
  CHECK(tr.terminal == Terminal::Completed);
  for (const auto& s : tr.states)
    for (double x : s.y) CHECK(x == 0.0);
}

TEST_CASE("constant orbit stays at a0 to t = 100") {
  // The equilibrium is a saddle, so only dimensions where (a0,0,0,0) is an
  // exact floating-point fixed point can hold it for 100 time units.
  for (int n : {6, 9, 10, 11, 12}) {
    const auto P = derive_params(n, 1);
    const auto tr = integrate(P, CylState::even(0.0, P.a0, 0.0), rk4(1e-3, 100.0));
    CHECK(tr.terminal == Terminal::Completed);
    double worst = 0;
    for (const auto& s : tr.states) worst = std::max(worst, std::abs(s.v(0) - P.a0));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("closed-form homoclinic orbit from t = -10 to 10") {
  const auto P = derive_params(6, 1);
  const auto tr = homoclinic_trajectory(P, 1.0, {1.0}, -10.0, 10.0, 1e-3);
  CHECK(tr.terminal == Terminal::Completed);
  CHECK(tr.front().t == -10.0);
  CHECK(tr.back().t == 10.0);
  double worst = 0;
  for (const auto& s : tr.states) worst = std::max(worst, std::abs(s.v(0) - sech6(s.t)));
  CHECK(worst <= 1e-6);
}

TEST_CASE("single forward pass along the homoclinic orbit leaves it") {
  // The orbit is a saddle connection of a hyperbolic equilibrium: rounding
  // seeds the unstable mode e^{3t}, which overtakes sech before t = 10.
  const auto P = derive_params(6, 1);
  for (double dt : {1e-3, 5e-4}) {
    const auto tr = integrate(P, CylState::scalar(-10.0, spherical_state(P, 1.0, -10.0)), rk4(dt, 10.0));
    CHECK(tr.terminal != Terminal::Completed);
    CHECK(tr.back().t < 5.0);
  }
}

TEST_CASE("adaptive method tracks the closed form over a short span") {
  const auto P = derive_params(6, 1);
  StepperConfig c;
  c.method = Method::AdaptiveDP45;
  c.dt = 1e-2;
  c.t_end = 1.5;
  const auto tr = integrate(P, CylState::scalar(-1.5, spherical_state(P, 1.0, -1.5)), c);
  CHECK(tr.terminal == Terminal::Completed);
  CHECK(tr.back().t == 1.5);
  double worst = 0;
  for (const auto& s : tr.states) worst = std::max(worst, std::abs(s.v(0) - sech6(s.t)));
  CHECK(worst <= 1e-7);
  CHECK(tr.states.size() < 1500);
}

TEST_CASE("events: maxima, zero hits and divergence") {
  const auto P = derive_params(6, 1);
  const auto tr = integrate(P, CylState::scalar(-3.0, spherical_state(P, 1.0, -3.0)), rk4(1e-3, 3.0));
  int maxima = 0;
  for (const auto& e : tr.events) {
    if (e.kind == EventKind::DerivZero && e.maximum) {
      ++maxima;
      CHECK(std::abs(e.t) <= 1e-8);
    }
  }
  CHECK(maxima == 1);

  auto neg = integrate(P, CylState::even(0.0, 0.5 * P.a0, -5.0), rk4(1e-3, 50.0));
  CHECK(neg.terminal == Terminal::HitZero);
  CHECK(neg.events.back().kind == EventKind::ZeroHit);
  auto up = integrate(P, CylState::even(0.0, 0.5 * P.a0, 5.0), rk4(1e-3, 50.0));
  CHECK(up.terminal == Terminal::Diverged);
  CHECK(up.events.back().kind == EventKind::Divergence);
  for (std::size_t k = 1; k < up.events.size(); ++k) CHECK(up.events[k - 1].t <= up.events[k].t);
}

TEST_CASE("stop_when ends the run at the first matching event") {
  const auto P = derive_params(6, 1);
  auto c = rk4(1e-3, 5.0);
  c.stop_when = [](const Event& e) { return e.kind == EventKind::DerivZero && e.maximum; };
  const auto tr = integrate(P, CylState::scalar(-3.0, spherical_state(P, 1.0, -3.0)), c);
  CHECK(tr.back().t == doctest::Approx(0.0).epsilon(1e-3));
  CHECK(tr.back().t < 0.01);
}

TEST_CASE("store_states=false keeps the end points") {
  const auto P = derive_params(6, 1);
  auto c = rk4(1e-2, 2.0);
  c.store_states = false;
  const auto tr = integrate(P, CylState::even(0.0, 0.7, 0.3), c);
  CHECK(tr.states.size() == 2);
  CHECK(tr.back().t == 2.0);
  const auto full = integrate(P, CylState::even(0.0, 0.7, 0.3), rk4(1e-2, 2.0));
  CHECK(full.back().y == tr.back().y);
}

TEST_CASE("invalid configurations") {
  const auto P = derive_params(6, 1);
  CHECK_THROWS_AS(integrate(P, CylState::even(0.0, 0.5, 0.0), rk4(0.0, 1.0)), Error);
  CylState bad(0.0, 1);
  bad.y[2] = std::numeric_limits<double>::infinity();
  try {
    integrate(P, bad, rk4(1e-3, 1.0));
    FAIL("expected NonFiniteState");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteState);
  }
}

TEST_CASE("adaptive step underflow is reported") {
  const auto P = derive_params(6, 1);
  StepperConfig c;
  c.method = Method::AdaptiveDP45;
  c.abs_tol = 1e-300;
  c.rel_tol = 1e-300;
  c.t_end = 1.0;
  try {
    integrate(P, CylState::even(0.0, 0.5, 0.1), c);
    FAIL("expected StepSizeUnderflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepSizeUnderflow);
  }
}

TEST_CASE("convergence order of fixed RK4") {
  const auto P = derive_params(6, 1);
  const auto homo = measure_convergence_order(P, CylState::scalar(-2.0, spherical_state(P, 1.0, -2.0)));
  REQUIRE(homo.has_value());
  CHECK(*homo >= 3.7);
  CHECK(*homo <= 4.3);
  CylState tiny(0.0, 1);
  for (double& x : tiny.y) x = 1e-6;
  const auto lin = measure_convergence_order(P, tiny);
  REQUIRE(lin.has_value());
  CHECK(*lin >= 3.7);
  CHECK(*lin <= 4.3);
  CHECK_FALSE(measure_convergence_order(P, CylState(0.0, 1)).has_value());
}

TEST_CASE("property: time reversal") {
  gen::Rng rng(3);
  int completed = 0;
  for (int k = 0; k < 40; ++k) {
    const auto P = derive_params(rng.integer(5, 9), 1);
    const double a = rng.uniform(0.3, 0.95) * P.a0;
    CylState s = CylState::even(0.0, a, rng.uniform(-0.1, 0.1));
    s.d1(0) = rng.uniform(-0.05, 0.05);
    s.d3(0) = rng.uniform(-0.05, 0.05);
    const double span = rng.uniform(0.5, 2.0);
    const auto fwd = integrate(P, s, rk4(1e-3, span));
    if (fwd.terminal != Terminal::Completed) continue;
    ++completed;
    CylState end = fwd.back();
    const auto back = integrate(P, end, rk4(1e-3, 0.0));
    REQUIRE(back.terminal == Terminal::Completed);
    for (std::size_t j = 0; j < s.y.size(); ++j) CHECK(std::abs(back.front().y[j] - s.y[j]) <= 1e-9);

    // reflected data traces the mirror image
    CylState mirrored = s;
    mirrored.d1(0) = -s.d1(0);
    mirrored.d3(0) = -s.d3(0);
    const auto mir = integrate(P, mirrored, rk4(1e-3, -span));
    REQUIRE(mir.terminal == Terminal::Completed);
    const auto& m = mir.front();
    const auto& f = fwd.back();
    CHECK(m.v(0) == doctest::Approx(f.v(0)).epsilon(1e-12));
    CHECK(m.d1(0) == doctest::Approx(-f.d1(0)).epsilon(1e-10));
    CHECK(m.d2(0) == doctest::Approx(f.d2(0)).epsilon(1e-10));
  }
  CHECK(completed >= 10);
}

TEST_CASE("property: even data gives even solutions") {
  gen::Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    const auto P = derive_params(rng.integer(5, 9), 1);
    const double a = rng.uniform(0.2, 0.99) * P.a0;
    const double b = rng.uniform(-0.3, 0.3);
    const double T = rng.uniform(0.5, 2.0);
    const auto fwd = integrate(P, CylState::even(0.0, a, b), rk4(1e-3, T));
    const auto bwd = integrate(P, CylState::even(0.0, a, b), rk4(1e-3, -T));
    if (fwd.terminal != Terminal::Completed) continue;
    REQUIRE(bwd.terminal == Terminal::Completed);
    REQUIRE(fwd.states.size() == bwd.states.size());
    const std::size_t m = fwd.states.size();
    for (std::size_t j = 0; j < m; j += 97) CHECK(fwd.states[j].v(0) == bwd.states[m - 1 - j].v(0));
  }
}

TEST_CASE("determinism: identical runs are bit-identical") {
  const auto P = derive_params(7, 2);
  CylState s = CylState::even(0.0, 0.4, 0.2, {0.6, 0.8});
  const auto a = integrate(P, s, rk4(1e-3, 5.0));
  const auto b = integrate(P, s, rk4(1e-3, 5.0));
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) CHECK(a.states[k].y == b.states[k].y);
  CHECK(a.events.size() == b.events.size());
}
