#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fowler/model.hpp"
#include "fowler/ode.hpp"

namespace fowler {

/// H = -<V''',V'> + ½|V''|² + (K2/2)|V'|² - (K0/2)|V|² + ĉ|V|^{2**}.
double hamiltonian(const Params& params, const CylState& state);

struct Pohozaev {
  double cyl = 0;
  double sph = 0;
};

/// For radial solutions the cylindrical invariant is H itself and the
/// spherical one is |S^{n-1}|·H.
Pohozaev pohozaev(const Params& params, const CylState& state);

/// max_k |H(state_k) - H(state_0)|.
double drift(const Params& params, const Trajectory& traj);

struct MonitorResult {
  bool pass = true;
  double worst_margin = 0;
  double worst_t = 0;
  double extreme = 0;  ///< monitored extreme value (e.g. sup v), when meaningful
};

/// Checks v_i' < γ v_i along the trajectory. Requires v_i > 0 everywhere.
MonitorResult monitor_gradient_bound(const Params& params, const Trajectory& traj);

/// Checks v_i < K0^{(n-4)/8} along the trajectory; extreme = sup v.
MonitorResult monitor_bound(const Params& params, const Trajectory& traj);

/// max over t, i, j of |v_i/v_j(t) - v_i/v_j(t0)|; 0 when p = 1.
double quotient_spread(const Trajectory& traj);

struct AsymptoticLimit {
  bool converged = false;
  double value = 0;               ///< trailing mean
  double oscillation = 0;         ///< max - min over the window
  bool derivatives_vanish = false;  ///< |v'|,|v''|,|v'''| < 1e-6 on the window
};

/// Tail behaviour of each component over [t_end - window, t_end].
std::vector<AsymptoticLimit> asymptotic_limits(const Trajectory& traj, double window);

struct InvariantReport {
  double H0 = 0;
  double max_drift = 0;
  double pohozaev_cyl = 0;
  double pohozaev_sph = 0;
  std::map<std::string, MonitorResult> monitors;
};

/// Runs hamiltonian/drift/pohozaev and every monitor that applies to the trajectory.
InvariantReport make_report(const Params& params, const Trajectory& traj);

/// Classification tolerance for "H = 0" tied to the achieved accuracy.
double classification_tolerance(double measured_drift);

/// Both sides of ∫|Δu|² = c(n)∫u^{2**} for the bubble, by adaptive radial quadrature.
struct SobolevIdentity {
  double dirichlet = 0;   ///< ∫ |Δu|² dx
  double potential = 0;   ///< c(n) ∫ u^{2**} dx
  double relative_gap = 0;
};
SobolevIdentity sobolev_identity(const Params& params, double mu);

}  // namespace fowler
