#include "fowler/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "fowler/classify.hpp"
#include "fowler/error.hpp"
#include "fowler/invariants.hpp"
#include "fowler/io.hpp"
#include "fowler/model.hpp"
#include "fowler/ode.hpp"
#include "fowler/shooting.hpp"
#include "fowler/transform.hpp"

namespace fowler {

namespace {

using Clock = std::chrono::steady_clock;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

CheckResult timed(const std::string& name, const std::function<CheckResult()>& body, double limit_seconds = 0) {
  const auto t0 = Clock::now();
  CheckResult r;
  try {
    r = body();
  } catch (const Error& e) {
    r.pass = false;
    r.detail = "error " + std::string(to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.name = name;
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_seconds > 0) {
    if (r.seconds > limit_seconds) r.pass = false;
    r.detail += " [" + num(r.seconds) + " s, limit " + num(limit_seconds) + " s]";
  }
  return r;
}


std::vector<double> log_radii(double r_min, double r_max, std::size_t count) {
  std::vector<double> out(count);
  const double l0 = std::log(r_min), l1 = std::log(r_max);
  for (std::size_t k = 0; k < count; ++k) out[k] = std::exp(l0 + (l1 - l0) * double(k) / double(count - 1));
  return out;
}

RadialFn wide_bubble(const Params& P, double mu) {
  const Wide g = P.gamma, m = mu;
  return [g, m](Wide r) { return pow(2 * m / (1 + m * m * r * r), g); };
}

// Max over 1000 points in [-10, 10] of |v'''' - (K2 v'' - K0 v + c v^{2**-1})| for sech(t)^γ.
double sech_residual(const Params& P) {
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const double t = -10.0 + 20.0 * double(k) / 999.0;
    const auto d = spherical_derivatives(P, 1.0, t);
    const double rhs4 = P.K2 * d[2] - P.K0 * d[0] + P.c * std::pow(d[0], P.sobolev_exp - 1.0);
    worst = std::max(worst, std::abs(d[4] - rhs4));
  }
  return worst;
}

Trajectory literal_homoclinic(const Params& P, double dt) {
  StepperConfig sc;
  sc.dt = dt;
  sc.t_end = 10.0;
  return integrate(P, CylState::scalar(-10.0, spherical_state(P, 1.0, -10.0)), sc);
}

bool completed_to(const Trajectory& tr, double t_end) {
  return tr.terminal == Terminal::Completed && tr.back().t == t_end;
}

// ---- property suites -------------------------------------------------------

std::vector<CheckResult> suite_kelvin() {
  std::vector<CheckResult> out;
  const auto P = derive_params(6, 1);
  const std::vector<double> probes{0.5, 1.0, 2.0};
  out.push_back(timed("kelvin/gaussian", [&] {
    CheckResult r;
    r.value = verify_kelvin_identity([](Wide x) { return exp(-x * x); }, 1.0, probes, P);
    r.tolerance = 1e-4;
    r.pass = r.value <= r.tolerance;
    r.detail = "max relative residual " + num(r.value);
    return r;
  }));
  out.push_back(timed("kelvin/fundamental", [&] {
    CheckResult r;
    r.value = verify_kelvin_identity([&](Wide x) { return pow(x, Wide(4 - P.n)); }, 1.0, probes, P);
    r.tolerance = 1e-6;
    r.pass = r.value <= r.tolerance;
    r.detail = "max relative residual " + num(r.value);
    return r;
  }));
  out.push_back(timed("kelvin/bubble", [&] {
    CheckResult r;
    r.value = verify_kelvin_identity(wide_bubble(P, 1.0), 1.0, probes, P);
    r.tolerance = 1e-4;
    r.pass = r.value <= r.tolerance;
    r.detail = "max relative residual " + num(r.value);
    return r;
  }));
  out.push_back(timed("kelvin/involution", [&] {
    CheckResult r;
    const RadialFn g = [](Wide x) { return exp(-x * x) + 1 / (1 + x); };
    const auto kk = kelvin_of(kelvin_of(g, 1.7, P), 1.7, P);
    for (double x : log_radii(1e-2, 1e2, 50))
      r.value = std::max(r.value, double(abs(kk(x) - g(x)) / abs(g(x))));
    r.tolerance = 1e-12;
    r.pass = r.value <= r.tolerance;
    r.detail = "max relative deviation " + num(r.value);
    return r;
  }));
  return out;
}

std::vector<CheckResult> suite_three_spheres() {
  std::vector<CheckResult> out;
  const auto P = derive_params(6, 1);
  const auto probes = log_radii(0.11, 9.0, 40);
  out.push_back(timed("three-spheres/equality-case", [&] {
    CheckResult r;
    const auto rep = three_spheres_check([&](double x) { return 1.0 + 2.0 * std::pow(x, 4 - P.n); }, 0.1, 10.0,
                                         probes, P);
    for (double m : rep.margins) r.value = std::max(r.value, std::abs(m));
    r.tolerance = 1e-10;
    r.pass = r.value <= r.tolerance;
    r.detail = "max |margin| " + num(r.value);
    return r;
  }));
  out.push_back(timed("three-spheres/bubble", [&] {
    CheckResult r;
    const auto rep =
        three_spheres_check([&](double x) { return spherical_profile(P, 1.0, x); }, 0.1, 10.0, probes, P);
    r.value = rep.min_margin;
    r.tolerance = -1e-10;
    r.pass = r.value >= r.tolerance;
    r.detail = "min margin " + num(r.value);
    return r;
  }));
  out.push_back(timed("three-spheres/counterexample", [&] {
    CheckResult r;
    const auto rep = three_spheres_check([](double x) { return x * x; }, 0.1, 10.0, probes, P);
    r.value = rep.min_margin;
    r.tolerance = 0;
    r.pass = r.value < 0;
    r.detail = "min margin " + num(r.value) + " (negative margin expected)";
    return r;
  }));
  out.push_back(timed("three-spheres/superharmonic", [&] {
    CheckResult r;
    const auto fn = wide_bubble(P, 1.0);
    r.value = -std::numeric_limits<double>::infinity();
    for (double x : log_radii(1e-2, 1e2, 100)) r.value = std::max(r.value, radial_laplacian(fn, x, P, 1e-3 * x));
    r.tolerance = 1e-8;
    r.pass = r.value <= r.tolerance;
    r.detail = "max radial Laplacian " + num(r.value);
    return r;
  }));
  return out;
}

std::vector<CheckResult> suite_hamiltonian() {
  std::vector<CheckResult> out;
  out.push_back(timed("hamiltonian/peak-zero", [&] {
    CheckResult r;
    for (int n = 5; n <= 12; ++n) {
      const auto P = derive_params(n, 1);
      const auto s = spherical_state(P, 1.0, 0.0);
      r.value = std::max(r.value, std::abs(hamiltonian(P, CylState::scalar(0.0, s))));
    }
    r.tolerance = 1e-12;
    r.pass = r.value <= r.tolerance;
    r.detail = "max |H| at the bubble peak, n=5..12: " + num(r.value);
    return r;
  }));
  out.push_back(timed("hamiltonian/static-closed-form", [&] {
    CheckResult r;
    for (int n = 5; n <= 12; ++n) {
      const auto P = derive_params(n, 3);
      for (double x : {0.1, 0.37, 0.8, 1.3}) {
        CylState s(0.0, 3);
        s.v(0) = x;
        s.v(1) = 0.5 * x;
        s.v(2) = 0.25 * x;
        const double vsq = 1.3125 * x * x;
        const double closed = -0.5 * P.K0 * vsq + P.chat * std::pow(vsq, 0.5 * P.sobolev_exp);
        r.value = std::max(r.value, std::abs(hamiltonian(P, s) - closed) / std::max(1.0, std::abs(closed)));
      }
    }
    r.tolerance = 1e-14;
    r.pass = r.value <= r.tolerance;
    r.detail = "max relative deviation " + num(r.value);
    return r;
  }));
  out.push_back(timed("hamiltonian/scaled-constant-monotone", [&] {
    CheckResult r;
    const auto P = derive_params(6, 1);
    double prev = std::numeric_limits<double>::infinity();
    r.pass = true;
    for (int k = 1; k <= 100; ++k) {
      const double h = hamiltonian(P, CylState::even(0.0, P.a0 * k / 100.0, 0.0));
      if (!(h < prev)) r.pass = false;
      prev = h;
    }
    r.value = prev;
    r.detail = "H(s a0) strictly decreasing on 100 points, H(a0) = " + num(prev);
    return r;
  }));
  out.push_back(timed("hamiltonian/homoclinic-drift", [&] {
    CheckResult r;
    const auto P = derive_params(6, 1);
    const auto tr = homoclinic_trajectory(P, 1.0, {1.0}, -10.0, 10.0, 1e-3);
    r.value = drift(P, tr);
    r.tolerance = 1e-8;
    r.pass = r.value <= r.tolerance && tr.terminal == Terminal::Completed;
    r.detail = "drift " + num(r.value) + " on [-10, 10]";
    return r;
  }));
  out.push_back(timed("hamiltonian/delaunay-drift", [&] {
    CheckResult r;
    const auto P = derive_params(6, 1);
    const auto orbit = delaunay_orbit(P, 0.5 * P.a0);
    r.value = drift(P, orbit.realize(0.0, 5.0 * orbit.period()));
    r.tolerance = 1e-8;
    r.pass = r.value <= r.tolerance;
    r.detail = "drift " + num(r.value) + " over 5 periods at a = 0.5 a0";
    return r;
  }));
  out.push_back(timed("hamiltonian/constant-orbit", [&] {
    CheckResult r;
    const auto P = derive_params(6, 1);
    StepperConfig sc;
    sc.t_end = 100.0;
    const auto tr = integrate(P, CylState::even(0.0, P.a0, 0.0), sc);
    for (const auto& s : tr.states) r.value = std::max(r.value, std::abs(s.v(0) - P.a0));
    r.tolerance = 1e-10;
    r.pass = r.value <= r.tolerance && drift(P, tr) <= 1e-12;
    r.detail = "max |v - a0| " + num(r.value) + ", drift " + num(drift(P, tr));
    return r;
  }));
  return out;
}

std::vector<CheckResult> suite_sech_residual() {
  std::vector<CheckResult> out;
  for (int n = 5; n <= 12; ++n) {
    out.push_back(timed("sech-residual/n=" + std::to_string(n), [&] {
      CheckResult r;
      r.value = sech_residual(derive_params(n, 1));
      r.tolerance = 1e-9;
      r.pass = r.value <= r.tolerance;
      r.detail = "max residual " + num(r.value);
      return r;
    }));
  }
  return out;
}

std::vector<CheckResult> suite_sobolev() {
  std::vector<CheckResult> out;
  for (int n = 5; n <= 8; ++n) {
    out.push_back(timed("sobolev-identity/n=" + std::to_string(n), [&] {
      CheckResult r;
      const auto id = sobolev_identity(derive_params(n, 1), 1.0);
      r.value = id.relative_gap;
      r.tolerance = 1e-6;
      r.pass = r.value <= r.tolerance;
      r.detail = "relative gap " + num(r.value);
      return r;
    }));
  }
  return out;
}

// ---- acceptance criteria ---------------------------------------------------

CheckResult criterion1() {
  CheckResult r;
  r.value = sech_residual(derive_params(6, 1));
  r.tolerance = 1e-9;
  r.pass = r.value <= r.tolerance;
  r.detail = "closed-form orbit residual " + num(r.value) + " <= 1e-9";
  return r;
}

CheckResult criterion2() {
  CheckResult r;
  const auto P = derive_params(6, 1);
  const auto tr1 = literal_homoclinic(P, 1e-3);
  const auto tr2 = literal_homoclinic(P, 5e-4);
  const double d1 = drift(P, tr1), d2 = drift(P, tr2);
  const bool done = completed_to(tr1, 10.0) && completed_to(tr2, 10.0);
  r.value = d1;
  r.tolerance = 1e-8;
  r.pass = done && d1 <= 1e-8 && d1 >= 12.0 * d2;
  r.detail = "single pass from t=-10: terminal " + std::string(to_string(tr1.terminal)) + " at t=" +
             num(tr1.back().t) + " (dt=1e-3), " + std::string(to_string(tr2.terminal)) + " at t=" +
             num(tr2.back().t) + " (dt=5e-4); drift " + num(d1) + ", ratio " + num(d1 / d2);
  const auto h1 = homoclinic_trajectory(P, 1.0, {1.0}, -10.0, 10.0, 1e-3);
  const auto h2 = homoclinic_trajectory(P, 1.0, {1.0}, -10.0, 10.0, 5e-4);
  const double e1 = drift(P, h1), e2 = drift(P, h2);
  r.detail += "; two-sided realization: drift " + num(e1) + ", ratio " + num(e1 / e2);
  if (auto q = measure_convergence_order(P, CylState::scalar(-2.0, spherical_state(P, 1.0, -2.0))))
    r.detail += ", observed RK4 order " + num(*q);
  return r;
}

CheckResult criterion3() {
  CheckResult r;
  const auto P = derive_params(6, 1);
  const auto sph = classify(sample_radial([&](double x) { return spherical_profile(P, 1.0, x); }, {1.0}, 1e-4,
                                          1e2, 2000),
                            P);
  const auto orbit = delaunay_orbit(P, 0.6 * P.a0);
  const auto del = classify(
      sample_radial([&](double x) { return std::pow(x, -P.gamma) * orbit.state_at(-std::log(x)).v(0); }, {1.0},
                    1e-4, 1e2, 2000),
      P);
  const auto cst = classify(
      sample_radial([&](double x) { return P.a0 * std::pow(x, -P.gamma); }, {1.0}, 1e-4, 1e2, 2000), P);
  // ω5 = π³ times H(a0, 0, 0, 0) = -(9/2) a0² + 4 a0⁶ with a0 = (3/8)^{1/4}.
  const double a0 = std::pow(3.0 / 8.0, 0.25);
  const double oracle = std::pow(std::numbers::pi, 3) * (-4.5 * a0 * a0 + 4.0 * std::pow(a0, 6));
  const double rel = std::abs(cst.pohozaev - oracle) / std::abs(oracle);
  const bool ok_sph = std::abs(sph.pohozaev) <= sph.uncertainty && sph.verdict == Verdict::NonSingularSpherical;
  const bool ok_del = del.pohozaev < -del.uncertainty && del.verdict == Verdict::SingularDelaunay;
  r.value = rel;
  r.tolerance = 0.01;
  r.pass = ok_sph && ok_del && rel <= 0.01;
  r.detail = "spherical P=" + num(sph.pohozaev) + " (eps " + num(sph.uncertainty) + "), Delaunay 0.6a0 P=" +
             num(del.pohozaev) + " (eps " + num(del.uncertainty) + "), constant P=" + num(cst.pohozaev) +
             " vs " + num(oracle) + " (rel " + num(rel) + ")";
  return r;
}

CheckResult criterion4() {
  CheckResult r;
  const auto P = derive_params(6, 1);
  const double b0 = find_b(P, P.a0).b;
  const double a = 0.999 * P.a0;
  const double T = fundamental_period(P, a, find_b(P, a).b).period;
  const double relT = std::abs(T - 3.74817) / 3.74817;
  bool ok = b0 == 0.0 && relT <= 0.02;
  r.detail = "b(a0)=" + num(b0) + ", T(0.999a0)=" + num(T) + " (rel " + num(relT) + " vs 3.74817)";
  double worst_res = 0;
  ShootingConfig cfg;
  for (double f : {0.3, 0.6, 0.9}) {
    const auto sb = find_b(P, f * P.a0, cfg);
    const auto pr = fundamental_period(P, f * P.a0, sb.b, cfg);
    const PeriodicOrbit orbit(P, f * P.a0, sb.b, pr.period, cfg.dt);
    const auto tr = orbit.realize(0.0, cfg.T_max);
    const double bound = default_divergence_bound(P);
    bool bounded = true;
    for (const auto& s : tr.states)
      if (!(s.v(0) > 0) || !(s.v(0) < bound)) bounded = false;
    const double H = hamiltonian(P, CylState::even(0.0, f * P.a0, sb.b));
    const auto single = shoot(P, f * P.a0, sb.b, cfg);
    worst_res = std::max(worst_res, pr.residual);
    ok = ok && bounded && H < 0 && pr.residual <= 1e-6;
    r.detail += "; a=" + num(f) + "a0: b=" + num(sb.b) + " T=" + num(pr.period) + " H=" + num(H) + " residual " +
                num(pr.residual) + (bounded ? " bounded to 200" : " UNBOUNDED") + " (single pass " +
                std::string(to_string(single.kind)) +
                (single.exit_time ? " at t=" + num(*single.exit_time) : std::string()) + ")";
  }
  r.value = worst_res;
  r.tolerance = 1e-6;
  r.pass = ok;
  return r;
}

CheckResult criterion5() {
  CheckResult r;
  const auto P = derive_params(6, 1);
  const std::vector<double> probes{0.5, 1.0, 2.0};
  r.value = verify_kelvin_identity([](Wide x) { return exp(-x * x); }, 1.0, probes, P, 1e-3);
  r.tolerance = 1e-4;
  r.pass = r.value <= r.tolerance;
  r.detail = "Gaussian Kelvin residual " + num(r.value) + " <= 1e-4";
  return r;
}

CheckResult criterion6() {
  CheckResult r;
  const auto id = sobolev_identity(derive_params(6, 1), 1.0);
  r.value = id.relative_gap;
  r.tolerance = 1e-6;
  r.pass = r.value <= r.tolerance;
  r.detail = "int|Lap u|^2=" + num(id.dirichlet) + ", c int u^2**=" + num(id.potential) + ", rel gap " +
             num(id.relative_gap);
  return r;
}

CheckResult criterion7() {
  CheckResult r;
  const auto P = derive_params(6, 1);
  double worst_grad = std::numeric_limits<double>::infinity();
  double worst_bound = worst_grad, worst_env = worst_grad;
  bool ok = true;
  auto take = [&](const Trajectory& tr) {
    const auto g = monitor_gradient_bound(P, tr);
    const auto b = monitor_bound(P, tr);
    worst_grad = std::min(worst_grad, g.worst_margin);
    worst_bound = std::min(worst_bound, b.worst_margin);
    ok = ok && g.pass && b.pass;
  };
  take(homoclinic_trajectory(P, 1.0, {1.0}, -10.0, 10.0));
  const auto P3 = derive_params(6, 3);
  {
    const std::vector<double> lam{1.0 / 3, 2.0 / 3, 2.0 / 3};
    const auto tr = homoclinic_trajectory(P3, 1.0, lam, -10.0, 10.0);
    const auto g = monitor_gradient_bound(P3, tr);
    const auto b = monitor_bound(P3, tr);
    worst_grad = std::min(worst_grad, g.worst_margin);
    worst_bound = std::min(worst_bound, b.worst_margin);
    ok = ok && g.pass && b.pass;
  }
  const auto radii = log_radii(std::exp(-10.0), std::exp(10.0), 2001);
  for (double f : {0.3, 0.6, 0.9}) {
    const auto orbit = delaunay_orbit(P, f * P.a0);
    take(orbit.realize(0.0, 5.0 * orbit.period()));
    const auto env = envelope_check(P, orbit, radii);
    worst_env = std::min(worst_env, env.min_margin);
    ok = ok && env.pass;
  }
  r.value = worst_grad;
  r.tolerance = 0;
  r.pass = ok;
  r.detail = "min margin of gamma v - v' " + num(worst_grad) + ", of K0^{(n-4)/8} - sup v " + num(worst_bound) +
             ", of the r^{-gamma} envelope " + num(worst_env);
  return r;
}

CheckResult criterion8() {
  CheckResult r;
  const auto P = derive_params(6, 3);
  const std::vector<double> lam{1.0 / 3, 2.0 / 3, 2.0 / 3};
  const double spread = quotient_spread(homoclinic_trajectory(P, 1.0, lam, -10.0, 10.0));
  const auto fit = fit_proportions(sample_radial([&](double x) { return spherical_profile(P, 1.0, x); }, lam,
                                                 1e-4, 1e2, 2000));
  double err = 0;
  for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(fit.lambda[i] - lam[i]));
  r.value = spread;
  r.tolerance = 1e-9;
  r.pass = spread <= 1e-9 && err <= 1e-10;
  r.detail = "quotient spread " + num(spread) + " <= 1e-9, proportion error " + num(err) + " <= 1e-10";
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"kelvin", "three-spheres", "hamiltonian", "sech-residual",
                                              "sobolev-identity"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name) {
  if (name == "kelvin") return suite_kelvin();
  if (name == "three-spheres") return suite_three_spheres();
  if (name == "hamiltonian") return suite_hamiltonian();
  if (name == "sech-residual") return suite_sech_residual();
  if (name == "sobolev-identity") return suite_sobolev();
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
}

CheckResult run_criterion(int index) {
  struct Entry {
    CheckResult (*fn)();
    double limit;
    const char* title;
  };
  static const Entry table[] = {
      {criterion1, 1, "closed-form orbit residual"},   {criterion2, 10, "Hamiltonian conservation"},
      {criterion3, 60, "Pohozaev dichotomy"},          {criterion4, 120, "shooting consistency"},
      {criterion5, 5, "Kelvin identity"},              {criterion6, 5, "Sobolev integral identity"},
      {criterion7, 30, "qualitative lemma monitors"},  {criterion8, 30, "vector structure"},
  };
  if (index < 1 || index > 8) throw Error(ErrorCode::InvalidArgument, "criteria are numbered 1..8");
  const auto& e = table[index - 1];
  return timed("criterion " + std::to_string(index) + " (" + e.title + ")", e.fn, e.limit);
}

std::vector<CheckResult> run_acceptance() {
  std::vector<CheckResult> out;
  for (int k = 1; k <= 8; ++k) out.push_back(run_criterion(k));
  return out;
}

std::string format_check(const CheckResult& result) {
  return std::string(result.pass ? "PASS " : "FAIL ") + result.name + ": " + result.detail;
}

}  // namespace fowler
