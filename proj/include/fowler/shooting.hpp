#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fowler/model.hpp"
#include "fowler/ode.hpp"

namespace fowler {

enum class ShootKind { Bounded, Diverged, HitZero };

struct ShootOutcome {
  ShootKind kind = ShootKind::Bounded;
  std::optional<double> exit_time;  ///< time of termination when not Bounded
};

struct ShootingConfig {
  double T_max = 200.0;
  double dt = 1e-3;
  int scan_points = 64;       ///< samples of b over [-K0·a, K0·a]
  double bracket_width = 1e-11;
};

/// Integrates (a, 0, b, 0) from t = 0 to T_max with fixed RK4.
ShootOutcome shoot(const Params& params, double a, double b, const ShootingConfig& cfg = {});

struct ShootingResult {
  double b = 0;
  double lo = 0;  ///< bracket end points; outcomes at lo and hi differ
  double hi = 0;
  std::vector<std::pair<double, double>> brackets;  ///< every sign change found by the scan
  std::vector<double> candidates;                   ///< refined b for each bracket
  bool multiple = false;
  ShootOutcome lo_outcome, hi_outcome;
};

/// Bisection on the Diverged / HitZero dichotomy. The returned b is the
/// refined value of the first bracket; all brackets are reported.
ShootingResult find_b(const Params& params, double a, const ShootingConfig& cfg = {});

struct PeriodResult {
  double period = 0;
  double t_max_before = 0;  ///< the two maxima of v around the anchor t = 0
  double t_max_after = 0;
  double residual = 0;      ///< max |y(T) - y(0)| over the state vector
};

/// Fundamental period from the maxima of v adjacent to the minimum at t = 0.
PeriodResult fundamental_period(const Params& params, double a, double b, const ShootingConfig& cfg = {});

/// 2π/ω for the oscillatory pair of the linearization around the constant orbit.
double linearized_period(const Params& params);

/// A Delaunay orbit stored over half a period, from the minimum at t = 0 to
/// the maximum at T/2, and extended by even reflection and periodicity.
/// The underlying solution is hyperbolic: a single pass of any integrator
/// leaves the periodic orbit within a few periods, so long spans are
/// realized from the stored arc.
class PeriodicOrbit {
 public:
  PeriodicOrbit(const Params& params, double a, double b, double period, double dt,
                std::vector<double> lambda = {1.0});

  double a() const { return a_; }
  double b() const { return b_; }
  double period() const { return period_; }
  /// max(|v'(T/2)|, |v'''(T/2)|); zero for an exactly reversible orbit.
  double symmetry_defect() const { return symmetry_defect_; }
  const std::vector<double>& lambda() const { return lambda_; }
  /// Scalar states of the integrated arc on [0, T/2].
  const std::vector<CylState>& half_period() const { return states_; }

  /// Λ-scaled state at time t (minimum of v at t = 0 mod T).
  CylState state_at(double t) const;
  /// Uniform realization over [t0, t1] with spacing close to the stored step.
  Trajectory realize(double t0, double t1) const;
  double min_v() const { return min_v_; }
  double max_v() const { return max_v_; }

 private:
  Params params_;
  double a_, b_, period_, step_;
  std::vector<double> lambda_;
  std::vector<CylState> states_;
  double symmetry_defect_ = 0;
  double min_v_ = 0, max_v_ = 0;
};

/// find_b + fundamental_period + one stored period.
PeriodicOrbit delaunay_orbit(const Params& params, double a, const ShootingConfig& cfg = {},
                             std::vector<double> lambda = {1.0});

/// Homoclinic orbit Λ·sech(t - ln μ)^γ on [t0, t1], integrated with fixed RK4
/// forward from t0 up to the peak and backward from t1 down to the peak.
Trajectory homoclinic_trajectory(const Params& params, double mu, const std::vector<double>& lambda, double t0,
                                 double t1, double dt = 1e-3);

struct EnvelopeReport {
  double C1 = 0, C2 = 0;
  double min_margin = 0;  ///< min over radii of min(u r^γ - C1, C2 - u r^γ)
  bool pass = false;
};

/// C1 r^{-γ} <= |U(r)| <= C2 r^{-γ} with C1 = min v, C2 = max v of the orbit,
/// evaluated through from_cylinder at the given radii.
EnvelopeReport envelope_check(const Params& params, const PeriodicOrbit& orbit, std::span<const double> radii);

struct AtlasRow {
  double a = 0, b = 0, T_a = 0, H = 0, residual = 0;
  bool monitors_pass = false;
  std::string error;  ///< empty on success
};

/// One row per a, computed on up to `threads` workers and returned sorted by a.
std::vector<AtlasRow> atlas(const Params& params, std::vector<double> a_values, unsigned threads = 1,
                            const ShootingConfig& cfg = {});

std::string_view to_string(ShootKind kind);

}  // namespace fowler
