#include "fowler/invariants.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fowler/error.hpp"

namespace fowler {

double hamiltonian(const Params& params, const CylState& s) {
  double cross = 0, d2sq = 0, d1sq = 0, vsq = 0;
  for (int i = 0; i < s.p; ++i) {
    cross += s.d3(i) * s.d1(i);
    d2sq += s.d2(i) * s.d2(i);
    d1sq += s.d1(i) * s.d1(i);
    vsq += s.v(i) * s.v(i);
  }
  return -cross + 0.5 * d2sq + 0.5 * params.K2 * d1sq - 0.5 * params.K0 * vsq +
         params.chat * std::pow(vsq, 0.5 * params.sobolev_exp);
}

Pohozaev pohozaev(const Params& params, const CylState& state) {
  const double h = hamiltonian(params, state);
  return {h, params.sphere_area * h};
}

double drift(const Params& params, const Trajectory& traj) {
  if (traj.states.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no states");
  const double h0 = hamiltonian(params, traj.states.front());
  double worst = 0;
  for (const auto& s : traj.states) worst = std::max(worst, std::abs(hamiltonian(params, s) - h0));
  return worst;
}

MonitorResult monitor_gradient_bound(const Params& params, const Trajectory& traj) {
  if (traj.states.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no states");
  MonitorResult r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.states) {
    for (int i = 0; i < s.p; ++i) {
      if (!(s.v(i) > 0))
        throw Error(ErrorCode::NonPositiveComponent,
                    "component " + std::to_string(i + 1) + " is not positive at t=" + std::to_string(s.t));
      const double margin = params.gamma * s.v(i) - s.d1(i);
      if (margin < r.worst_margin) {
        r.worst_margin = margin;
        r.worst_t = s.t;
      }
    }
  }
  r.pass = r.worst_margin > 0;
  return r;
}

MonitorResult monitor_bound(const Params& params, const Trajectory& traj) {
  if (traj.states.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no states");
  const double level = params.bound_level();
  MonitorResult r;
  r.extreme = -std::numeric_limits<double>::infinity();
  for (const auto& s : traj.states) {
    for (int i = 0; i < s.p; ++i) {
      if (s.v(i) > r.extreme) {
        r.extreme = s.v(i);
        r.worst_t = s.t;
      }
    }
  }
  r.worst_margin = level - r.extreme;
  r.pass = r.worst_margin > 0;
  return r;
}

double quotient_spread(const Trajectory& traj) {
  if (traj.states.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no states");
  const int p = traj.states.front().p;
  if (p < 2) return 0.0;
  for (const auto& s : traj.states)
    for (int i = 0; i < p; ++i)
      if (!(s.v(i) > 0))
        throw Error(ErrorCode::NonPositiveComponent,
                    "component " + std::to_string(i + 1) + " is not positive at t=" + std::to_string(s.t));
  const auto& s0 = traj.states.front();
  double worst = 0;
  for (const auto& s : traj.states)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if (i != j) worst = std::max(worst, std::abs(s.v(i) / s.v(j) - s0.v(i) / s0.v(j)));
  return worst;
}

std::vector<AsymptoticLimit> asymptotic_limits(const Trajectory& traj, double window) {
  if (traj.states.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no states");
  if (!(window > 0)) throw Error(ErrorCode::InvalidArgument, "window must be positive");
  const int p = traj.states.front().p;
  const double t_end = traj.states.back().t;
  std::vector<AsymptoticLimit> out(p);
  for (int i = 0; i < p; ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0, dmax = 0;
    std::size_t count = 0;
    for (const auto& s : traj.states) {
      if (s.t < t_end - window) continue;
      lo = std::min(lo, s.v(i));
      hi = std::max(hi, s.v(i));
      sum += s.v(i);
      dmax = std::max({dmax, std::abs(s.d1(i)), std::abs(s.d2(i)), std::abs(s.d3(i))});
      ++count;
    }
    auto& L = out[i];
    L.value = sum / double(count);
    L.oscillation = hi - lo;
    L.converged = L.oscillation < 1e-6;
    L.derivatives_vanish = L.converged && dmax < 1e-6;
  }
  return out;
}

double classification_tolerance(double measured_drift) { return std::max(1e-8, 100.0 * measured_drift); }

InvariantReport make_report(const Params& params, const Trajectory& traj) {
  InvariantReport rep;
  rep.H0 = hamiltonian(params, traj.states.front());
  rep.max_drift = drift(params, traj);
  const auto P = pohozaev(params, traj.states.front());
  rep.pohozaev_cyl = P.cyl;
  rep.pohozaev_sph = P.sph;
  rep.monitors["bound"] = monitor_bound(params, traj);
  try {
    rep.monitors["gradient_bound"] = monitor_gradient_bound(params, traj);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonPositiveComponent) throw;
  }
  return rep;
}

SobolevIdentity sobolev_identity(const Params& params, double mu) {
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  const int n = params.n;
  // The common factor |S^{n-1}| cancels in the comparison and is kept on both sides.
  auto dirichlet = [&](double r) {
    const double lap = spherical_laplacian(params, mu, r);
    return lap * lap * std::pow(r, n - 1);
  };
  auto potential = [&](double r) {
    return params.c * std::pow(spherical_profile(params, mu, r), params.sobolev_exp) * std::pow(r, n - 1);
  };
  double err = 0;
  SobolevIdentity out;
  out.dirichlet = params.sphere_area * gauss_kronrod<double, 61>::integrate(dirichlet, 0.0, inf, 20, 1e-13, &err);
  out.potential = params.sphere_area * gauss_kronrod<double, 61>::integrate(potential, 0.0, inf, 20, 1e-13, &err);
  out.relative_gap = std::abs(out.dirichlet - out.potential) / std::abs(out.potential);
  return out;
}

}  // namespace fowler
