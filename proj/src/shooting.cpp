#include "fowler/shooting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "fowler/error.hpp"
#include "fowler/invariants.hpp"
#include "fowler/io.hpp"
#include "fowler/transform.hpp"

namespace fowler {

namespace {

void check_necksize(const Params& params, double a) {
  if (!(a > 0) || !(a <= params.a0))
    throw Error(ErrorCode::NecksizeOutOfRange,
                "necksize " + format_double(a) + " outside (0, " + format_double(params.a0) + "]");
}

ShootOutcome outcome_of(const Trajectory& tr) {
  switch (tr.terminal) {
    case Terminal::Completed: return {ShootKind::Bounded, std::nullopt};
    case Terminal::Diverged: return {ShootKind::Diverged, tr.back().t};
    case Terminal::HitZero: return {ShootKind::HitZero, tr.back().t};
  }
  return {};
}

bool opposite(ShootKind x, ShootKind y) {
  return (x == ShootKind::Diverged && y == ShootKind::HitZero) ||
         (x == ShootKind::HitZero && y == ShootKind::Diverged);
}

// Refines a bracket [lo, hi] whose outcomes differ down to adjacent doubles.
// The orbit is hyperbolic, so the bracket is carried well below the requested
// width: a defect δb in b grows by e^{λT} over one period.
double bisect(const Params& params, double a, double& lo, double& hi, ShootOutcome& olo, ShootOutcome& ohi,
              const ShootingConfig& cfg) {
  for (;;) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const auto om = shoot(params, a, mid, cfg);
    if (om.kind == ShootKind::Bounded) {
      lo = hi = mid;
      olo = ohi = om;
      return mid;
    }
    if (om.kind == olo.kind) {
      lo = mid;
      olo = om;
    } else {
      hi = mid;
      ohi = om;
    }
  }
  if (hi - lo > cfg.bracket_width)
    throw Error(ErrorCode::BracketNotFound, "bisection stalled above the requested bracket width");
  return lo + 0.5 * (hi - lo);
}

double first_maximum(const Params& params, double a, double b, double t_end, double dt) {
  StepperConfig sc;
  sc.dt = dt;
  sc.t_end = t_end;
  sc.store_states = false;
  sc.stop_when = [](const Event& e) { return e.kind == EventKind::DerivZero && e.maximum; };
  const auto tr = integrate(params, CylState::even(0.0, a, b), sc);
  const bool forward = t_end > 0;
  std::optional<double> found;
  for (const auto& e : tr.events) {
    if (e.kind != EventKind::DerivZero || !e.maximum) continue;
    if (forward && e.t > 0 && !found) found = e.t;
    if (!forward && e.t < 0) found = e.t;
  }
  if (!found)
    throw Error(ErrorCode::NoReturnDetected, "no maximum of v found before t=" + format_double(t_end));
  return *found;
}

// Fixed RK4 over [0, span] with the step adjusted to land on span exactly.
Trajectory integrate_period(const Params& params, double a, double b, double span, double dt, bool store) {
  const double steps = std::ceil(span / dt);
  StepperConfig sc;
  sc.dt = span / steps;
  sc.t_end = span;
  sc.store_states = store;
  return integrate(params, CylState::even(0.0, a, b), sc);
}

}  // namespace

ShootOutcome shoot(const Params& params, double a, double b, const ShootingConfig& cfg) {
  if (!(a >= 0)) throw Error(ErrorCode::NecksizeOutOfRange, "necksize must be nonnegative");
  StepperConfig sc;
  sc.dt = cfg.dt;
  sc.t_end = cfg.T_max;
  sc.store_states = false;
  return outcome_of(integrate(params, CylState::even(0.0, a, b), sc));
}

ShootingResult find_b(const Params& params, double a, const ShootingConfig& cfg) {
  check_necksize(params, a);
  ShootingResult res;
  if (a == params.a0) return res;

  const int m = std::max(cfg.scan_points, 2);
  const double B = params.K0 * a;
  std::vector<double> bs(m);
  std::vector<ShootOutcome> outs(m);
  for (int k = 0; k < m; ++k) {
    bs[k] = -B + 2.0 * B * double(k) / double(m - 1);
    outs[k] = shoot(params, a, bs[k], cfg);
  }
  for (int k = 0; k < m; ++k) {
    if (outs[k].kind == ShootKind::Bounded) {
      res.brackets.emplace_back(bs[k], bs[k]);
      res.candidates.push_back(bs[k]);
      continue;
    }
    if (k + 1 < m && opposite(outs[k].kind, outs[k + 1].kind)) {
      double lo = bs[k], hi = bs[k + 1];
      auto olo = outs[k], ohi = outs[k + 1];
      res.brackets.emplace_back(lo, hi);
      const double b = bisect(params, a, lo, hi, olo, ohi, cfg);
      res.candidates.push_back(b);
      if (res.candidates.size() == 1) {
        res.lo = lo;
        res.hi = hi;
        res.lo_outcome = olo;
        res.hi_outcome = ohi;
      }
    }
  }
  if (res.candidates.empty())
    throw Error(ErrorCode::BracketNotFound,
                "no Diverged/HitZero sign change for b in [" + format_double(-B) + ", " + format_double(B) + "]");
  res.b = res.candidates.front();
  if (res.brackets.front().first == res.brackets.front().second) res.lo = res.hi = res.b;
  res.multiple = res.candidates.size() > 1;
  return res;
}

PeriodResult fundamental_period(const Params& params, double a, double b, const ShootingConfig& cfg) {
  if (!(a > 0)) throw Error(ErrorCode::NecksizeOutOfRange, "necksize must be positive");
  if (a >= params.a0) throw Error(ErrorCode::DegenerateOrbit, "the constant orbit has no period");
  PeriodResult r;
  r.t_max_after = first_maximum(params, a, b, cfg.T_max, cfg.dt);
  // With v''(0) < 0 the anchor itself is a maximum.
  r.t_max_before = b < 0 ? 0.0 : first_maximum(params, a, b, -cfg.T_max, cfg.dt);
  r.period = r.t_max_after - r.t_max_before;
  const auto tr = integrate_period(params, a, b, r.period, cfg.dt, false);
  if (tr.terminal != Terminal::Completed || tr.back().t != r.period)
    throw Error(ErrorCode::NoReturnDetected, "orbit left the bounded region within one period");
  for (std::size_t j = 0; j < tr.back().y.size(); ++j)
    r.residual = std::max(r.residual, std::abs(tr.back().y[j] - tr.front().y[j]));
  return r;
}

double linearized_period(const Params& params) {
  // μ⁴ - K2 μ² - q K0 = 0 with q = 2** - 2; the negative root μ² = -ω².
  const double q = params.nonlinear_exp();
  const double disc = params.K2 * params.K2 + 4.0 * q * params.K0;
  const double omega2 = 2.0 * q * params.K0 / (params.K2 + std::sqrt(disc));
  return 2.0 * std::numbers::pi / std::sqrt(omega2);
}

PeriodicOrbit::PeriodicOrbit(const Params& params, double a, double b, double period, double dt,
                             std::vector<double> lambda)
    : params_(params), a_(a), b_(b), period_(period), lambda_(std::move(lambda)) {
  if (!(period > 0)) throw Error(ErrorCode::DegenerateOrbit, "period must be positive");
  if (!is_unit_vector(lambda_) || std::any_of(lambda_.begin(), lambda_.end(), [](double x) { return !(x > 0); }))
    throw Error(ErrorCode::InvalidArgument, "lambda must be a unit vector with positive entries");
  auto tr = integrate_period(params, a, b, 0.5 * period, dt, true);
  if (tr.terminal != Terminal::Completed || tr.back().t != 0.5 * period)
    throw Error(ErrorCode::NoReturnDetected, "orbit left the bounded region within half a period");
  states_ = std::move(tr.states);
  step_ = 0.5 * period / double(states_.size() - 1);
  symmetry_defect_ = std::max(std::abs(states_.back().d1(0)), std::abs(states_.back().d3(0)));
  min_v_ = max_v_ = states_.front().v(0);
  for (const auto& s : states_) {
    min_v_ = std::min(min_v_, s.v(0));
    max_v_ = std::max(max_v_, s.v(0));
  }
}

CylState PeriodicOrbit::state_at(double t) const {
  // Reduce to τ ∈ [-T/2, T/2) and use the even symmetry about the minimum.
  double tau = t - period_ * std::floor(t / period_ + 0.5);
  const bool mirrored = tau < 0;
  tau = std::min(std::abs(tau), 0.5 * period_);
  const auto k = std::min<std::size_t>(std::size_t(std::llround(tau / step_)), states_.size() - 1);
  CylState s = states_[k];
  const double tk = double(k) * step_;
  if (tau != tk) {
    StepperConfig sc;
    sc.dt = step_;
    sc.t_end = tau;
    sc.store_states = false;
    s.t = tk;
    const auto tr = integrate(params_, s, sc);
    s = tau > tk ? tr.back() : tr.front();
  }
  const double sign = mirrored ? -1.0 : 1.0;
  ScalarState sc{s.v(0), sign * s.d1(0), s.d2(0), sign * s.d3(0)};
  return CylState::scaled(t, sc, lambda_);
}

Trajectory PeriodicOrbit::realize(double t0, double t1) const {
  if (!(t1 > t0)) throw Error(ErrorCode::InvalidArgument, "realize needs t1 > t0");
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / step_));
  Trajectory tr;
  tr.states.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = k == n ? t1 : t0 + (t1 - t0) * double(k) / double(n);
    tr.states.push_back(state_at(t));
  }
  return tr;
}

PeriodicOrbit delaunay_orbit(const Params& params, double a, const ShootingConfig& cfg, std::vector<double> lambda) {
  const auto sb = find_b(params, a, cfg);
  const auto pr = fundamental_period(params, a, sb.b, cfg);
  return PeriodicOrbit(params, a, sb.b, pr.period, cfg.dt, std::move(lambda));
}

Trajectory homoclinic_trajectory(const Params& params, double mu, const std::vector<double>& lambda, double t0,
                                 double t1, double dt) {
  if (!(mu > 0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  if (!(t1 > t0)) throw Error(ErrorCode::InvalidArgument, "homoclinic span needs t1 > t0");
  const double peak = std::clamp(std::log(mu), t0, t1);
  StepperConfig sc;
  sc.dt = dt;
  Trajectory left, right;
  if (peak > t0) {
    sc.t_end = peak;
    left = integrate(params, CylState::scaled(t0, spherical_state(params, mu, t0), lambda), sc);
  }
  if (peak < t1) {
    sc.t_end = peak;
    right = integrate(params, CylState::scaled(t1, spherical_state(params, mu, t1), lambda), sc);
  }
  if (left.states.empty()) return right;
  if (right.states.empty()) return left;
  Trajectory out = std::move(left);
  out.states.insert(out.states.end(), right.states.begin() + 1, right.states.end());
  out.events.insert(out.events.end(), right.events.begin(), right.events.end());
  std::stable_sort(out.events.begin(), out.events.end(), [](const Event& x, const Event& y) { return x.t < y.t; });
  if (out.terminal == Terminal::Completed) out.terminal = right.terminal;
  return out;
}

EnvelopeReport envelope_check(const Params& params, const PeriodicOrbit& orbit, std::span<const double> radii) {
  EnvelopeReport rep;
  rep.C1 = orbit.min_v();
  rep.C2 = orbit.max_v();
  CylinderGrid cg;
  std::vector<double> rs(radii.begin(), radii.end());
  std::sort(rs.begin(), rs.end(), std::greater<>());
  for (double r : rs) {
    if (!(r > 0)) throw Error(ErrorCode::NonPositiveRadius, "radius must be positive");
    const double t = -std::log(r);
    cg.times.push_back(t);
    cg.values.push_back({orbit.state_at(t).v(0) / orbit.lambda().front()});
  }
  const auto rg = from_cylinder(cg, params);
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rg.size(); ++k) {
    const double scaled = rg.values[k][0] * std::pow(rg.points[k], params.gamma);
    rep.min_margin = std::min({rep.min_margin, scaled - rep.C1, rep.C2 - scaled});
  }
  // Round-off of the r^{±γ} round trip.
  rep.pass = rep.min_margin >= -1e-12 * rep.C2;
  return rep;
}

std::vector<AtlasRow> atlas(const Params& params, std::vector<double> a_values, unsigned threads,
                            const ShootingConfig& cfg) {
  std::sort(a_values.begin(), a_values.end());
  std::vector<AtlasRow> rows(a_values.size());
  auto work = [&](std::size_t k) {
    AtlasRow& row = rows[k];
    row.a = a_values[k];
    row.b = row.T_a = row.H = row.residual = std::numeric_limits<double>::quiet_NaN();
    try {
      const auto sb = find_b(params, row.a, cfg);
      row.b = sb.b;
      row.H = hamiltonian(params, CylState::even(0.0, row.a, row.b));
      const auto pr = fundamental_period(params, row.a, row.b, cfg);
      row.T_a = pr.period;
      row.residual = pr.residual;
      const PeriodicOrbit orbit(params, row.a, row.b, pr.period, cfg.dt);
      const auto tr = orbit.realize(0.0, pr.period);
      row.monitors_pass = monitor_gradient_bound(params, tr).pass && monitor_bound(params, tr).pass &&
                          drift(params, tr) <= 1e-8;
    } catch (const Error& e) {
      row.error = std::string(to_string(e.code())) + ": " + e.what();
      row.monitors_pass = false;
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, unsigned(rows.size())));
  if (workers <= 1) {
    for (std::size_t k = 0; k < rows.size(); ++k) work(k);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t k; (k = next.fetch_add(1)) < rows.size();) work(k);
    });
  for (auto& th : pool) th.join();
  return rows;
}

std::string_view to_string(ShootKind kind) {
  switch (kind) {
    case ShootKind::Bounded: return "Bounded";
    case ShootKind::Diverged: return "Diverged";
    case ShootKind::HitZero: return "HitZero";
  }
  return "?";
}

}  // namespace fowler
