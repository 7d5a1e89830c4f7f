#include "fowler/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fowler/error.hpp"
#include "fowler/io.hpp"
#include "fowler/ode.hpp"
#include "fowler/invariants.hpp"

namespace fowler {

namespace {

constexpr std::size_t kMargin = 5;         // interior points dropped on each side
constexpr double kProportionTol = 1e-6;

double log_span(const RadialGrid& grid) { return std::log10(grid.points.back() / grid.points.front()); }

// Least-squares slope of log(value) against log r over r <= 10 r_min,
// skipping zero samples. Returns 0 when every sample is zero.
double decade_rate(const RadialGrid& grid, const std::function<double(std::size_t)>& value) {
  const double r_cut = 10.0 * grid.points.front();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < grid.size() && grid.points[k] <= r_cut * (1 + 1e-12); ++k) {
    const double u = value(k);
    if (!(u > 0)) continue;
    const double x = std::log(grid.points[k]), y = std::log(u);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n == 0) return 0.0;
  if (n < 3) throw Error(ErrorCode::InsufficientSpan, "fewer than three positive samples in the smallest decade");
  const double denom = double(n) * sxx - sx * sx;
  return -(double(n) * sxy - sx * sy) / denom;
}

void check_decade(const RadialGrid& grid) {
  validate(grid);
  if (!(grid.points.front() > 0)) throw Error(ErrorCode::NonPositiveRadius, "radii must be positive");
  if (log_span(grid) < 1.0) throw Error(ErrorCode::InsufficientSpan, "grid spans less than one decade");
}

double norm_row(const std::vector<double>& row) {
  double s = 0;
  for (double x : row) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double fit_blowup_rate(const RadialGrid& grid, const Params& params) {
  (void)params;
  check_decade(grid);
  return decade_rate(grid, [&](std::size_t k) { return norm_row(grid.values[k]); });
}

std::vector<double> component_blowup_rates(const RadialGrid& grid, const Params& params) {
  (void)params;
  check_decade(grid);
  std::vector<double> rates;
  for (int i = 0; i < grid.components(); ++i)
    rates.push_back(decade_rate(grid, [&](std::size_t k) { return grid.values[k][i]; }));
  return rates;
}

ProportionFit fit_proportions(const RadialGrid& grid) {
  validate(grid);
  const int p = grid.components();
  ProportionFit fit;
  fit.lambda.assign(p, 0.0);
  std::vector<std::vector<double>> dirs;
  for (const auto& row : grid.values) {
    const double nrm = norm_row(row);
    if (!(nrm > 0)) continue;
    std::vector<double> d(p);
    for (int i = 0; i < p; ++i) d[i] = row[i] / nrm;
    for (int i = 0; i < p; ++i) fit.lambda[i] += d[i];
    dirs.push_back(std::move(d));
  }
  if (dirs.empty()) throw Error(ErrorCode::InvalidGrid, "all samples are zero");
  const double nrm = norm_row(fit.lambda);
  for (double& x : fit.lambda) x /= nrm;
  for (const auto& d : dirs)
    for (int i = 0; i < p; ++i) fit.max_deviation = std::max(fit.max_deviation, std::abs(d[i] - fit.lambda[i]));
  return fit;
}

std::vector<double> hamiltonian_samples(const CylinderGrid& grid, const Params& params) {
  validate(grid);
  const int p = grid.components();
  const std::size_t m = grid.size();
  const double h = grid.spacing();
  std::vector<std::vector<double>> d(3 * p);
  for (int i = 0; i < p; ++i) {
    std::vector<double> col(m);
    for (std::size_t k = 0; k < m; ++k) col[k] = grid.values[k][i];
    for (int order = 1; order <= 3; ++order) d[(order - 1) * p + i] = grid_derivative(col, h, order);
  }
  std::vector<double> out;
  for (std::size_t k = kMargin; k + kMargin < m; ++k) {
    CylState s(grid.times[k], p);
    for (int i = 0; i < p; ++i) {
      s.v(i) = grid.values[k][i];
      s.d1(i) = d[i][k];
      s.d2(i) = d[p + i][k];
      s.d3(i) = d[2 * p + i][k];
    }
    out.push_back(hamiltonian(params, s));
  }
  return out;
}

ClassificationReport classify(const RadialGrid& grid, const Params& params) {
  validate(grid);
  if (log_span(grid) < 3.0)
    throw Error(ErrorCode::InsufficientSpan,
                "grid spans " + format_double(log_span(grid)) + " decades; at least 3 are required");
  if (grid.size() < 2 * kMargin + kMinGridPoints)
    throw Error(ErrorCode::InsufficientSpan, "too few samples for interior Hamiltonian estimates");
  const int p = grid.components();
  for (const auto& row : grid.values)
    for (double x : row)
      if (x < 0) throw Error(ErrorCode::InvalidGrid, "samples must be nonnegative");

  ClassificationReport rep;
  rep.gamma_hat = fit_blowup_rate(grid, params);
  rep.component_rates = component_blowup_rates(grid, params);
  bool rates_noisy = false;
  if (p >= 2) {
    bool any_singular = false, any_bounded = false;
    for (double q : rep.component_rates) {
      if (q >= params.gamma / 2) any_singular = true;
      else if (q <= params.gamma / 10) any_bounded = true;
      else rates_noisy = true;
    }
    rep.semi_singular = any_singular && any_bounded;
  }
  const auto prop = fit_proportions(grid);
  rep.lambda_hat = prop.lambda;
  rep.lambda_deviation = prop.max_deviation;

  const auto cyl = to_cylinder(grid, params);
  const auto hs = hamiltonian_samples(cyl, params);
  const double mean = std::accumulate(hs.begin(), hs.end(), 0.0) / double(hs.size());
  double var = 0;
  for (double x : hs) var += (x - mean) * (x - mean);
  rep.H_hat = mean;
  rep.H_spread = std::sqrt(var / double(hs.size()));
  rep.epsilon = std::max(1e-6, 3.0 * rep.H_spread);
  rep.pohozaev = params.sphere_area * mean;
  rep.uncertainty = params.sphere_area * rep.epsilon;

  // Auxiliary fits on |V| over the interior.
  std::vector<double> nv;
  for (std::size_t k = kMargin; k + kMargin < cyl.size(); ++k) nv.push_back(norm_row(cyl.values[k]));
  const double h = cyl.spacing();
  std::vector<double> peaks;
  for (std::size_t k = 1; k + 1 < nv.size(); ++k) {
    if (nv[k] > nv[k - 1] && nv[k] >= nv[k + 1]) {
      const double den = nv[k - 1] - 2 * nv[k] + nv[k + 1];
      const double off = den != 0 ? 0.5 * (nv[k - 1] - nv[k + 1]) / den : 0.0;
      peaks.push_back(double(k) * h + off * h);
    }
  }

  if (rep.semi_singular || prop.max_deviation > kProportionTol) {
    rep.verdict = Verdict::Inconsistent;
    return rep;
  }
  const auto [lo, hi] = std::minmax_element(hs.begin(), hs.end());
  if (*hi - *lo > 10.0 * rep.epsilon)
    throw Error(ErrorCode::NoisyData, "Hamiltonian estimates vary by " + format_double(*hi - *lo) +
                                          ", more than 10 x tolerance " + format_double(rep.epsilon));
  if (rates_noisy)
    throw Error(ErrorCode::NoisyData, "a component blow-up rate lies strictly between gamma/10 and gamma/2");

  if (mean > rep.epsilon) {
    rep.verdict = Verdict::Inconsistent;
  } else if (mean < -rep.epsilon) {
    rep.verdict = Verdict::SingularDelaunay;
    rep.necksize_hat = *std::min_element(nv.begin(), nv.end());
    if (peaks.size() >= 2) rep.period_hat = (peaks.back() - peaks.front()) / double(peaks.size() - 1);
  } else {
    rep.verdict = Verdict::NonSingularSpherical;
  }
  return rep;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::NonSingularSpherical: return "NonSingularSpherical";
    case Verdict::SingularDelaunay: return "SingularDelaunay";
    case Verdict::Inconsistent: return "Inconsistent";
  }
  return "?";
}

}  // namespace fowler
