#include "fowler/model.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "fowler/error.hpp"

namespace fowler {

namespace {

// Γ(k/2) for integer k >= 1 through Γ(x+1) = xΓ(x), seeded with Γ(1) and Γ(1/2).
double gamma_half_integer(int k) {
  double g = (k % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
  for (int j = (k % 2 == 0) ? 2 : 1; j < k; j += 2) g *= 0.5 * j;
  return g;
}

// log(sech s) without overflow for large |s|.
double log_sech(double s) {
  const double x = std::abs(s);
  return std::numbers::ln2 - x - std::log1p(std::exp(-2.0 * x));
}

}  // namespace

double Params::bound_level() const { return std::pow(K0, (n - 4) / 8.0); }

Params derive_params(int n, int p) {
  if (n < 5) throw Error(ErrorCode::DimensionTooSmall, "n must be >= 5 (got " + std::to_string(n) + ")");
  if (p < 1) throw Error(ErrorCode::InvalidComponentCount, "p must be >= 1 (got " + std::to_string(p) + ")");

  const double nd = n;
  Params P;
  P.n = n;
  P.p = p;
  P.c = nd * (nd - 4) * (nd * nd - 4) / 16.0;
  P.sobolev_exp = 2.0 * nd / (nd - 4);
  P.chat = P.c / P.sobolev_exp;
  P.gamma = (nd - 4) / 2.0;
  P.K0 = nd * nd * (nd - 4) * (nd - 4) / 16.0;
  P.K2 = (nd * nd - 4 * nd + 8) / 2.0;
  P.J0 = nd * (nd - 4) / 4.0;
  P.a0 = std::pow(nd * (nd - 4) / (nd * nd - 4), (nd - 4) / 8.0);
  P.char_roots = {-nd / 2.0, -P.gamma, P.gamma, nd / 2.0};
  P.sphere_area = 2.0 * std::pow(std::numbers::pi, nd / 2.0) / gamma_half_integer(n);
  return P;
}

std::array<double, 5> spherical_derivatives(const Params& params, double mu, double t) {
  if (!(mu > 0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  const double g = params.gamma;
  const double kappa = g * g + g;
  const double s = t - std::log(mu);
  const double T = std::tanh(s);
  const double sech2 = 1.0 - T * T;

  // v = sech^γ, v' = -γ T v, and with A = κT² - γ, B = 2κT(1-T²):
  // v'' = A v, v''' = A v' + B v, v'''' = A v'' + 2B v' + 2κ(1-3T²)(1-T²) v.
  const double v = std::exp(g * log_sech(s));
  const double d1 = -g * T * v;
  const double A = kappa * T * T - g;
  const double B = 2.0 * kappa * T * sech2;
  const double d2 = A * v;
  const double d3 = A * d1 + B * v;
  const double d4 = A * d2 + 2.0 * B * d1 + 2.0 * kappa * (1.0 - 3.0 * T * T) * sech2 * v;
  return {v, d1, d2, d3, d4};
}

ScalarState spherical_state(const Params& params, double mu, double t) {
  const auto d = spherical_derivatives(params, mu, t);
  return {d[0], d[1], d[2], d[3]};
}

double spherical_profile(const Params& params, double mu, double r) {
  return std::pow(2.0 * mu / (1.0 + mu * mu * r * r), params.gamma);
}

double spherical_laplacian(const Params& params, double mu, double r) {
  // u(r) = μ^γ A(w)^γ with w = μr, A = 2/(1+w²), so Δ_r u = μ^{γ+2} Δ_w A^γ and
  // Δ_w A^γ = γ A^{γ+1} (-n + (γ+1) w² A).
  const double g = params.gamma;
  const double w = mu * r;
  const double A = 2.0 / (1.0 + w * w);
  const double lap_w = g * std::pow(A, g + 1.0) * (-params.n + (g + 1.0) * w * w * A);
  return std::pow(mu, g) * mu * mu * lap_w;
}

DelaunaySolution constant_solution(const Params& params) {
  DelaunaySolution sol;
  sol.a = params.a0;
  sol.b = 0.0;
  sol.period.reset();
  sol.lambda = std::vector<double>(params.p, 1.0 / std::sqrt(double(params.p)));
  return sol;
}

double equilibrium_component(const Params& params) {
  const double sp = std::sqrt(double(params.p));
  const double e = params.nonlinear_exp();
  auto residual = [&](double ell) { return params.c * std::pow(sp * ell, e) - params.K0; };

  // residual is increasing in ℓ; grow the upper end until it changes sign.
  double hi = 1.0;
  while (residual(hi) < 0) hi *= 2.0;
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 200;
  const auto [lo_r, hi_r] = boost::math::tools::toms748_solve(residual, 0.0, hi, tol, iters);
  return 0.5 * (lo_r + hi_r);
}

double quoted_asymptotic_level(const Params& params) {
  return std::pow(params.K0, (params.n - 4) / 8.0) / params.p;
}

bool is_unit_vector(const std::vector<double>& v, double tol) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::abs(std::sqrt(s) - 1.0) <= tol;
}

}  // namespace fowler
