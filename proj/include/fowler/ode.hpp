#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fowler/model.hpp"

namespace fowler {

/// One time slice of the cylinder system. The flat layout
/// [v_1..v_p, v'_1..v'_p, v''_1..v''_p, v'''_1..v'''_p] matches the trajectory CSV.
struct CylState {
  double t = 0;
  int p = 1;
  std::vector<double> y;

  CylState() = default;
  CylState(double t_, int p_) : t(t_), p(p_), y(4 * std::size_t(p_), 0.0) {}

  double v(int i) const { return y[i]; }
  double d1(int i) const { return y[p + i]; }
  double d2(int i) const { return y[2 * p + i]; }
  double d3(int i) const { return y[3 * p + i]; }
  double& v(int i) { return y[i]; }
  double& d1(int i) { return y[p + i]; }
  double& d2(int i) { return y[2 * p + i]; }
  double& d3(int i) { return y[3 * p + i]; }

  /// Euclidean norm |V| over components.
  double norm_v() const;

  /// Scalar state broadcast as Λ·s.
  static CylState scaled(double t, const ScalarState& s, const std::vector<double>& lambda);
  static CylState scalar(double t, const ScalarState& s) { return scaled(t, s, {1.0}); }
  /// Even initial data (a_i, 0, b_i, 0).
  static CylState even(double t, double a, double b, const std::vector<double>& lambda = {1.0});
};

enum class EventKind { DerivZero, Divergence, ZeroHit };
enum class Terminal { Completed, Diverged, HitZero };

struct Event {
  double t = 0;
  EventKind kind = EventKind::DerivZero;
  int component = 0;
  bool maximum = false;  ///< for DerivZero: v' changes from + to - in increasing t
};

struct Trajectory {
  std::vector<CylState> states;  ///< increasing in t
  std::vector<Event> events;     ///< sorted by t
  Terminal terminal = Terminal::Completed;

  const CylState& front() const { return states.front(); }
  const CylState& back() const { return states.back(); }
};

enum class Method { FixedRK4, AdaptiveDP45 };

struct StepperConfig {
  Method method = Method::FixedRK4;
  double dt = 1e-3;  ///< fixed step, or the initial step of the adaptive method
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double t_end = 0;
  std::optional<double> divergence_bound;  ///< default 10·max(1, K0^{(n-4)/8})
  double zero_tolerance = 1e-12;
  bool store_states = true;  ///< false keeps only the first and last state
  /// Optional early stop, checked after every recorded event.
  std::function<bool(const Event&)> stop_when;
};

double default_divergence_bound(const Params& params);

/// Right-hand side of the first-order form of v_i'''' = K2 v_i'' - K0 v_i + c|V|^{2**-2} v_i.
std::vector<double> rhs(const Params& params, const CylState& state);
void rhs_into(const Params& params, std::span<const double> y, std::span<double> out);

/// Integrates from init.t to cfg.t_end (either direction) with event detection.
Trajectory integrate(const Params& params, const CylState& init, const StepperConfig& cfg);

/// Observed RK4 order from runs at dt and dt/2 against a dt/4 reference over
/// [init.t, init.t + span]. Empty when the reference shows no signal.
std::optional<double> measure_convergence_order(const Params& params, const CylState& init,
                                                double span = 4.0, double dt = 0.02);

std::string_view to_string(EventKind kind);
std::string_view to_string(Terminal terminal);

}  // namespace fowler
