#pragma once

#include <boost/multiprecision/float128.hpp>

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fowler/model.hpp"

namespace fowler {

/// Samples of a radial p-map: values[k][i] = u_i(points[k]).
struct RadialGrid {
  std::vector<double> points;
  std::vector<std::vector<double>> values;

  int components() const { return values.empty() ? 0 : int(values.front().size()); }
  std::size_t size() const { return points.size(); }
};

/// Samples on the cylinder: values[k][i] = v_i(times[k]), times uniform.
struct CylinderGrid {
  std::vector<double> times;
  std::vector<std::vector<double>> values;

  int components() const { return values.empty() ? 0 : int(values.front().size()); }
  std::size_t size() const { return times.size(); }
  double spacing() const { return times.size() > 1 ? (times.back() - times.front()) / double(times.size() - 1) : 0.0; }
};

inline constexpr std::size_t kMinGridPoints = 9;

void validate(const RadialGrid& grid);
void validate(const CylinderGrid& grid);

/// v_i(t) = r^γ u_i(r), t = -ln r. Non-uniform t spacing is resampled onto a
/// uniform grid of the same size with monotone (PCHIP) cubic interpolation.
CylinderGrid to_cylinder(const RadialGrid& grid, const Params& params);
RadialGrid from_cylinder(const CylinderGrid& grid, const Params& params);

/// Radial operators sample their argument in quad precision: a fourth
/// difference at h = 1e-3 divides by h⁴ = 1e-12, which leaves about three
/// significant digits in double.
using Wide = boost::multiprecision::float128;
using RadialFn = std::function<Wide(Wide)>;

inline constexpr double kDefaultStep = 1e-3;

/// (μ/r)^{n-4} fn(μ²/r).
Wide kelvin(const RadialFn& fn, Wide mu, Wide r, const Params& params);
RadialFn kelvin_of(RadialFn fn, double mu, const Params& params);

/// Radial bi-Laplacian with fourth-order central differences.
double radial_bilaplacian(const RadialFn& fn, double r, const Params& params, double h = kDefaultStep);
/// Radial Laplacian u'' + (n-1)u'/r with fourth-order central differences.
double radial_laplacian(const RadialFn& fn, double r, const Params& params, double h = kDefaultStep);

/// Fourth-order central difference of order `derivative` (1..4) at r.
double central_difference(const RadialFn& fn, double r, int derivative, double h);

/// max over samples of |Δ²(K fn)(r) - (μ/r)^{n+4}(Δ²fn)(μ²/r)| / (1 + |(Δ²fn)(μ²/r)|).
double verify_kelvin_identity(const RadialFn& fn, double mu, std::span<const double> samples,
                              const Params& params, double h = kDefaultStep);

struct ThreeSpheresReport {
  std::vector<double> margins;
  double min_margin = 0;
};

/// Margin of the three-spheres lower bound for a radial function at each probe.
ThreeSpheresReport three_spheres_check(const std::function<double(double)>& fn, double r1, double r2,
                                       std::span<const double> probes, const Params& params);

/// Derivatives of uniformly spaced samples with fourth-order central stencils;
/// entries within three points of either end are left as NaN.
std::vector<double> grid_derivative(std::span<const double> samples, double h, int derivative);

// CSV: header `r,u_1,...,u_p` or `t,v_1,...,v_p`, 17 significant digits.
void write_csv(std::ostream& os, const RadialGrid& grid);
void write_csv(std::ostream& os, const CylinderGrid& grid);
RadialGrid read_radial_csv(std::istream& is);
CylinderGrid read_cylinder_csv(std::istream& is);

/// Log-uniform radial samples of a scalar profile scaled by Λ.
RadialGrid sample_radial(const std::function<double(double)>& profile, const std::vector<double>& lambda,
                         double r_min, double r_max, std::size_t count);

}  // namespace fowler
