#include "fowler/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "fowler/error.hpp"

namespace fowler {

double CylState::norm_v() const {
  double s = 0;
  for (int i = 0; i < p; ++i) s += y[i] * y[i];
  return std::sqrt(s);
}

CylState CylState::scaled(double t, const ScalarState& s, const std::vector<double>& lambda) {
  CylState st(t, int(lambda.size()));
  for (int i = 0; i < st.p; ++i) {
    st.v(i) = lambda[i] * s[0];
    st.d1(i) = lambda[i] * s[1];
    st.d2(i) = lambda[i] * s[2];
    st.d3(i) = lambda[i] * s[3];
  }
  return st;
}

CylState CylState::even(double t, double a, double b, const std::vector<double>& lambda) {
  return scaled(t, {a, 0.0, b, 0.0}, lambda);
}

double default_divergence_bound(const Params& params) {
  return 10.0 * std::max(1.0, params.bound_level());
}

void rhs_into(const Params& params, std::span<const double> y, std::span<double> out) {
  const std::size_t p = y.size() / 4;
  double norm2 = 0;
  for (std::size_t i = 0; i < p; ++i) norm2 += y[i] * y[i];
  // |V| first: for several n this makes the constant orbit an exact fixed point in floating point.
  const double coupling = params.c * std::pow(std::sqrt(norm2), params.nonlinear_exp()) - params.K0;
  for (std::size_t i = 0; i < p; ++i) {
    out[i] = y[p + i];
    out[p + i] = y[2 * p + i];
    out[2 * p + i] = y[3 * p + i];
    out[3 * p + i] = params.K2 * y[2 * p + i] + coupling * y[i];
  }
}

std::vector<double> rhs(const Params& params, const CylState& state) {
  for (double x : state.y)
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteState, "state contains a non-finite entry");
  std::vector<double> out(state.y.size());
  rhs_into(params, state.y, out);
  return out;
}

namespace {

// Classical RK4 step in place; work must hold 5 vectors of the state size.
struct Rk4 {
  std::vector<double> k1, k2, k3, k4, tmp;
  explicit Rk4(std::size_t m) : k1(m), k2(m), k3(m), k4(m), tmp(m) {}

  void step(const Params& P, std::vector<double>& y, double h) {
    const std::size_t m = y.size();
    rhs_into(P, y, k1);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    rhs_into(P, tmp, k2);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    rhs_into(P, tmp, k3);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + h * k3[j];
    rhs_into(P, tmp, k4);
    for (std::size_t j = 0; j < m; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
};

// Dormand–Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Dp45 {
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
  bool fsal_valid = false;
  explicit Dp45(std::size_t m) : k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), tmp(m), ynew(m) {}

  // Returns the scaled error norm of a trial step of size h; ynew holds the 5th-order result.
  double trial(const Params& P, const std::vector<double>& y, double h, double atol, double rtol) {
    const std::size_t m = y.size();
    if (!fsal_valid) rhs_into(P, y, k1);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + h * a21 * k1[j];
    rhs_into(P, tmp, k2);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + h * (a31 * k1[j] + a32 * k2[j]);
    rhs_into(P, tmp, k3);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = y[j] + h * (a41 * k1[j] + a42 * k2[j] + a43 * k3[j]);
    rhs_into(P, tmp, k4);
    for (std::size_t j = 0; j < m; ++j)
      tmp[j] = y[j] + h * (a51 * k1[j] + a52 * k2[j] + a53 * k3[j] + a54 * k4[j]);
    rhs_into(P, tmp, k5);
    for (std::size_t j = 0; j < m; ++j)
      tmp[j] = y[j] + h * (a61 * k1[j] + a62 * k2[j] + a63 * k3[j] + a64 * k4[j] + a65 * k5[j]);
    rhs_into(P, tmp, k6);
    for (std::size_t j = 0; j < m; ++j)
      ynew[j] = y[j] + h * (b1 * k1[j] + b3 * k3[j] + b4 * k4[j] + b5 * k5[j] + b6 * k6[j]);
    rhs_into(P, ynew, k7);
    double err = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const double ej = h * (e1 * k1[j] + e3 * k3[j] + e4 * k4[j] + e5 * k5[j] + e6 * k6[j] + e7 * k7[j]);
      const double sc = atol + rtol * std::max(std::abs(y[j]), std::abs(ynew[j]));
      err = std::max(err, std::abs(ej) / sc);
    }
    return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
  }

  void accept(std::vector<double>& y) {
    y.swap(ynew);
    k1.swap(k7);
    fsal_valid = true;
  }
};

// Root of the cubic Hermite interpolant of f on [0, h] (f0·f1 <= 0).
double hermite_root(double f0, double g0, double f1, double g1, double h) {
  auto eval = [&](double s) {
    const double x = s / h;
    const double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
    const double h10 = x * (1 - x) * (1 - x);
    const double h01 = x * x * (3 - 2 * x);
    const double h11 = x * x * (x - 1);
    return h00 * f0 + h10 * h * g0 + h01 * f1 + h11 * h * g1;
  };
  double lo = 0, hi = h, flo = f0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(h)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eval(mid);
    if ((fm > 0) == (flo > 0) && fm != 0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

class Integrator {
 public:
  Integrator(const Params& P, const StepperConfig& cfg, int p)
      : P_(P), cfg_(cfg), p_(p),
        bound_(cfg.divergence_bound.value_or(default_divergence_bound(P))) {}

  // Processes the step prev -> cur; returns true when integration must stop.
  bool after_step(double t_prev, const std::vector<double>& prev, double t_cur,
                  const std::vector<double>& cur, Trajectory& out) {
    bool stop = false;
    // Events are located on the interval between the two states, ordered by increasing t.
    const bool forward = t_cur > t_prev;
    const double tl = forward ? t_prev : t_cur;
    const auto& yl = forward ? prev : cur;
    const auto& yr = forward ? cur : prev;
    const double h = std::abs(t_cur - t_prev);
    std::vector<Event> found;
    for (int i = 0; i < p_; ++i) {
      // A zero of v' exactly at the step origin belongs to the previous step.
      if (prev[p_ + i] == 0) continue;
      const double fl = yl[p_ + i], fr = yr[p_ + i];
      double s;
      if (fl == 0) {
        s = 0;
      } else if (fr == 0) {
        s = h;
      } else if ((fl > 0) != (fr > 0)) {
        s = hermite_root(fl, yl[2 * p_ + i], fr, yr[2 * p_ + i], h);
      } else {
        continue;
      }
      found.push_back({tl + s, EventKind::DerivZero, i, fl > 0 || fr < 0});
    }
    std::sort(found.begin(), found.end(), [&](const Event& a, const Event& b) {
      return forward ? a.t < b.t : a.t > b.t;
    });
    for (const auto& e : found) {
      out.events.push_back(e);
      if (cfg_.stop_when && cfg_.stop_when(e)) stop = true;
    }

    for (int i = 0; i < p_; ++i) {
      if (!std::isfinite(cur[i]) || cur[i] < -cfg_.zero_tolerance) {
        if (std::isfinite(cur[i])) {
          out.events.push_back({t_cur, EventKind::ZeroHit, i, false});
          out.terminal = Terminal::HitZero;
        } else {
          out.events.push_back({t_cur, EventKind::Divergence, i, false});
          out.terminal = Terminal::Diverged;
        }
        return true;
      }
    }
    for (int i = 0; i < p_; ++i) {
      bool bad = !std::isfinite(cur[p_ + i]) || !std::isfinite(cur[2 * p_ + i]) || !std::isfinite(cur[3 * p_ + i]);
      if (std::abs(cur[i]) > bound_ || bad) {
        out.events.push_back({t_cur, EventKind::Divergence, i, false});
        out.terminal = Terminal::Diverged;
        return true;
      }
    }
    return stop;
  }

  void record(double t, const std::vector<double>& y, Trajectory& out) {
    CylState s;
    s.t = t;
    s.p = p_;
    s.y = y;
    if (cfg_.store_states || out.states.size() < 1) {
      out.states.push_back(std::move(s));
    } else if (out.states.size() == 1) {
      out.states.push_back(std::move(s));
    } else {
      out.states.back() = std::move(s);
    }
  }

  Trajectory run(const CylState& init) {
    Trajectory out;
    const double t0 = init.t;
    const double t1 = cfg_.t_end;
    std::vector<double> y = init.y;
    record(t0, y, out);
    if (t1 == t0) return out;
    const double dir = t1 > t0 ? 1.0 : -1.0;

    if (cfg_.method == Method::FixedRK4) {
      if (!(cfg_.dt > 0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
      Rk4 rk(y.size());
      const double span = std::abs(t1 - t0);
      const auto nfull = static_cast<long long>(std::floor(span / cfg_.dt));
      double t = t0;
      std::vector<double> prev;
      for (long long k = 1;; ++k) {
        double tn = k <= nfull ? t0 + dir * double(k) * cfg_.dt : t1;
        // A remainder below 1e-9 dt is absorbed into the final step.
        if (std::abs(t1 - tn) <= 1e-9 * cfg_.dt) tn = t1;
        const double h = tn - t;
        prev = y;
        rk.step(P_, y, h);
        const bool stop = after_step(t, prev, tn, y, out);
        t = tn;
        record(t, y, out);
        if (stop || t == t1) break;
      }
    } else {
      if (!(cfg_.abs_tol > 0) || !(cfg_.rel_tol > 0) || !(cfg_.dt > 0))
        throw Error(ErrorCode::InvalidArgument, "tolerances and initial step must be positive");
      Dp45 dp(y.size());
      double t = t0;
      double h = dir * std::min(cfg_.dt, std::abs(t1 - t0));
      double err_prev = 1e-4;
      constexpr double safety = 0.9, alpha = 0.7 / 5.0, beta = 0.4 / 5.0;
      std::vector<double> prev;
      while (dir * (t1 - t) > 0) {
        if (dir * (t + h - t1) > 0) h = t1 - t;
        const double err = dp.trial(P_, y, h, cfg_.abs_tol, cfg_.rel_tol);
        if (err <= 1.0) {
          prev = y;
          dp.accept(y);
          const double tn = (std::abs(t1 - (t + h)) <= 1e-14 * std::max(1.0, std::abs(t1))) ? t1 : t + h;
          const bool stop = after_step(t, prev, tn, y, out);
          t = tn;
          record(t, y, out);
          if (stop) break;
          const double e = std::max(err, 1e-10);
          double fac = safety * std::pow(e, -alpha) * std::pow(err_prev, beta);
          h *= std::clamp(fac, 0.2, 5.0);
          err_prev = e;
        } else {
          const double fac = std::isfinite(err) ? safety * std::pow(err, -alpha) : 0.2;
          h *= std::clamp(fac, 0.1, 1.0);
          dp.fsal_valid = true;  // k1 still belongs to y
        }
        if (std::abs(h) < 1e-14)
          throw Error(ErrorCode::StepSizeUnderflow, "adaptive step fell below 1e-14 at t=" + std::to_string(t));
      }
    }

    if (dir < 0) {
      std::reverse(out.states.begin(), out.states.end());
    }
    std::stable_sort(out.events.begin(), out.events.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    return out;
  }

 private:
  const Params& P_;
  const StepperConfig& cfg_;
  int p_;
  double bound_;
};

}  // namespace

Trajectory integrate(const Params& params, const CylState& init, const StepperConfig& cfg) {
  if (init.y.size() != 4 * std::size_t(init.p) || init.p < 1)
    throw Error(ErrorCode::InvalidArgument, "initial state has inconsistent size");
  for (double x : init.y)
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteState, "initial state contains a non-finite entry");
  Integrator integ(params, cfg, init.p);
  return integ.run(init);
}

std::optional<double> measure_convergence_order(const Params& params, const CylState& init, double span,
                                                double dt) {
  auto final_state = [&](double h) {
    StepperConfig cfg;
    cfg.dt = h;
    cfg.t_end = init.t + span;
    cfg.store_states = false;
    return integrate(params, init, cfg).back();
  };
  const auto y1 = final_state(dt);
  const auto y2 = final_state(dt / 2);
  const auto y4 = final_state(dt / 4);
  if (y1.t != y4.t || y2.t != y4.t) return std::nullopt;
  double e1 = 0, e2 = 0;
  for (std::size_t j = 0; j < y4.y.size(); ++j) {
    e1 = std::max(e1, std::abs(y1.y[j] - y4.y[j]));
    e2 = std::max(e2, std::abs(y2.y[j] - y4.y[j]));
  }
  if (!(e1 > 0) || !(e2 > 0)) return std::nullopt;
  // With a dt/4 reference, e1/e2 = 2^q + 1 for a method of order q.
  const double ratio = e1 / e2 - 1.0;
  if (!(ratio > 0)) return std::nullopt;
  return std::log2(ratio);
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::DerivZero: return "DerivZero";
    case EventKind::Divergence: return "Divergence";
    case EventKind::ZeroHit: return "ZeroHit";
  }
  return "?";
}

std::string_view to_string(Terminal terminal) {
  switch (terminal) {
    case Terminal::Completed: return "Completed";
    case Terminal::Diverged: return "Diverged";
    case Terminal::HitZero: return "HitZero";
  }
  return "?";
}

}  // namespace fowler
