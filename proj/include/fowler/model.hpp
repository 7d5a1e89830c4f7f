#pragma once

#include <array>
#include <optional>
#include <vector>

namespace fowler {

/// Dimension-derived constants of the critical fourth-order system
///   Δ²u_i = c(n) |U|^{2**-2} u_i   in R^n \ {0},
/// together with the coefficients of its Emden–Fowler (cylinder) form
///   v_i'''' - K2 v_i'' + K0 v_i = c(n) |V|^{2**-2} v_i.
struct Params {
  int n = 0;  ///< ambient dimension, n >= 5
  int p = 0;  ///< number of components, p >= 1
  double c = 0;            ///< n(n-4)(n²-4)/16
  double chat = 0;         ///< c / 2**
  double gamma = 0;        ///< Fowler rescaling exponent (n-4)/2
  double K0 = 0;           ///< n²(n-4)²/16
  double K2 = 0;           ///< (n²-4n+8)/2
  double J0 = 0;           ///< n(n-4)/4, angular coefficient (never evaluated)
  double sobolev_exp = 0;  ///< 2** = 2n/(n-4)
  double a0 = 0;           ///< necksize of the constant cylinder solution
  std::array<double, 4> char_roots{};  ///< {-n/2, -γ, γ, n/2}
  double sphere_area = 0;  ///< |S^{n-1}| = 2π^{n/2}/Γ(n/2)

  /// Exponent 2** - 2 = 8/(n-4) of the nonlinearity.
  double nonlinear_exp() const { return sobolev_exp - 2.0; }
  /// Scalar bound K0^{(n-4)/8} used by the boundedness monitor.
  double bound_level() const;
};

Params derive_params(int n, int p);

/// Scalar cylinder state (v, v', v'', v''').
using ScalarState = std::array<double, 4>;

/// Bubble u(r) = (2μ/(1 + μ²r²))^γ centred at the origin. Its cylinder trace
/// is v(t) = sech(t - ln μ)^γ.
struct SphericalSolution {
  double mu = 1.0;
  std::vector<double> lambda{1.0};  ///< unit vector, entries >= 0
};

/// Delaunay-type solution r^{-γ} v_a(-ln r + phase) with v_a periodic.
struct DelaunaySolution {
  double a = 0;                  ///< necksize (minimum of v_a)
  double b = 0;                  ///< v_a''(0), the shooting value
  std::optional<double> period;  ///< fundamental period; empty for the constant orbit
  std::vector<double> lambda{1.0};
  double phase = 0;
};

/// Cylinder trace of the bubble and its first three t-derivatives, exact.
ScalarState spherical_state(const Params& params, double mu, double t);

/// Same, extended with the fourth derivative (used for residual checks).
std::array<double, 5> spherical_derivatives(const Params& params, double mu, double t);

/// Radial profile of the bubble, u(r) = (2μ/(1+μ²r²))^γ.
double spherical_profile(const Params& params, double mu, double r);

/// Closed-form Δu of the bubble (radial Laplacian).
double spherical_laplacian(const Params& params, double mu, double r);

DelaunaySolution constant_solution(const Params& params);

/// Per-component value ℓ making (ℓ,…,ℓ) a fixed point of the vector system,
/// found by bracketed root finding on K0 = c (√p ℓ)^{2**-2}.
double equilibrium_component(const Params& params);

/// Closed-form level p^{-1} K0^{(n-4)/8} quoted for the asymptotic set. It does
/// not satisfy the fixed-point equation; reported for comparison only.
double quoted_asymptotic_level(const Params& params);

bool is_unit_vector(const std::vector<double>& v, double tol = 1e-12);

}  // namespace fowler
