#include "fowler/transform.hpp"

#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "fowler/error.hpp"
#include "fowler/io.hpp"

namespace fowler {

namespace {

struct Stencil {
  int half;                 // offsets -half..half
  std::array<int, 7> num;   // indexed by offset + 3
  int den;
};

// Fourth-order central stencils for derivatives 1..4, coefficient num/den.
// Kept as integers so the weights are exact in any precision.
constexpr std::array<Stencil, 4> kStencils{{
    {2, {0, 1, -8, 0, 8, -1, 0}, 12},
    {2, {0, -1, 16, -30, 16, -1, 0}, 12},
    {3, {1, -8, 13, 0, -13, 8, -1}, 8},
    {3, {-1, 12, -39, 56, -39, 12, -1}, 6},
}};

constexpr double kUniformTol = 1e-9;  // relative to the spacing

Wide wide_difference(const RadialFn& fn, Wide r, int derivative, Wide h) {
  const auto& st = kStencils[derivative - 1];
  Wide acc = 0;
  for (int j = -st.half; j <= st.half; ++j) {
    const int c = st.num[j + 3];
    if (c != 0) acc += c * fn(r + Wide(j) * h);
  }
  return acc / (st.den * pow(h, derivative));
}

void check_stencil(double r, double h) {
  if (!(h > 0) || !(r - 3 * h > 0))
    throw Error(ErrorCode::StencilOutOfDomain,
                "stencil [r-3h, r+3h] leaves (0, inf) at r=" + format_double(r) + ", h=" + format_double(h));
}

void check_values(const std::vector<std::vector<double>>& values, std::size_t m) {
  if (values.size() != m) throw Error(ErrorCode::InvalidGrid, "value rows do not match sample count");
  const std::size_t p = values.empty() ? 0 : values.front().size();
  if (p == 0) throw Error(ErrorCode::InvalidGrid, "grid has no components");
  for (const auto& row : values) {
    if (row.size() != p) throw Error(ErrorCode::InvalidGrid, "ragged value rows");
    for (double x : row)
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidGrid, "non-finite sample value");
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

template <class Grid>
Grid read_csv(std::istream& is, char axis, char value) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::Io, "empty CSV input");
  const auto header = split(line);
  if (header.size() < 2 || header[0] != std::string(1, axis))
    throw Error(ErrorCode::Io, std::string("CSV header must start with '") + axis + "'");
  for (std::size_t i = 1; i < header.size(); ++i)
    if (header[i] != std::string(1, value) + "_" + std::to_string(i))
      throw Error(ErrorCode::Io, "unexpected CSV column '" + header[i] + "'");
  Grid g;
  auto& axis_vals = [&]() -> std::vector<double>& {
    if constexpr (std::is_same_v<Grid, RadialGrid>) return g.points;
    else return g.times;
  }();
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw Error(ErrorCode::Io, "CSV line " + std::to_string(lineno) + " has the wrong number of fields");
    std::vector<double> row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double x = parse_double(cells[i]);
      if (i == 0) axis_vals.push_back(x);
      else row.push_back(x);
    }
    g.values.push_back(std::move(row));
  }
  return g;
}

template <class Grid>
void write_grid(std::ostream& os, const Grid& g, const std::vector<double>& axis, char a, char v) {
  os << a;
  for (int i = 1; i <= g.components(); ++i) os << ',' << v << '_' << i;
  os << '\n';
  for (std::size_t k = 0; k < axis.size(); ++k) {
    os << format_double(axis[k]);
    for (double x : g.values[k]) os << ',' << format_double(x);
    os << '\n';
  }
}

}  // namespace

void validate(const RadialGrid& grid) {
  if (grid.points.size() < kMinGridPoints)
    throw Error(ErrorCode::InvalidGrid, "radial grid needs at least " + std::to_string(kMinGridPoints) + " points");
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    if (!(grid.points[k] > 0) || !std::isfinite(grid.points[k]))
      throw Error(ErrorCode::NonPositiveRadius, "radius " + format_double(grid.points[k]) + " is not positive");
    if (k > 0 && !(grid.points[k] > grid.points[k - 1]))
      throw Error(ErrorCode::InvalidGrid, "radii must be strictly increasing");
  }
  check_values(grid.values, grid.points.size());
}

void validate(const CylinderGrid& grid) {
  if (grid.times.size() < kMinGridPoints)
    throw Error(ErrorCode::InvalidGrid, "cylinder grid needs at least " + std::to_string(kMinGridPoints) + " points");
  const double h = grid.spacing();
  if (!(h > 0)) throw Error(ErrorCode::InvalidGrid, "times must be strictly increasing");
  for (std::size_t k = 1; k < grid.times.size(); ++k)
    if (std::abs((grid.times[k] - grid.times[k - 1]) - h) > kUniformTol * h)
      throw Error(ErrorCode::InvalidGrid, "cylinder grid spacing is not uniform");
  check_values(grid.values, grid.times.size());
}

CylinderGrid to_cylinder(const RadialGrid& grid, const Params& params) {
  for (double r : grid.points)
    if (!(r > 0)) throw Error(ErrorCode::NonPositiveRadius, "radius " + format_double(r) + " is not positive");
  validate(grid);
  const std::size_t m = grid.size();
  const int p = grid.components();

  CylinderGrid out;
  out.times.resize(m);
  out.values.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t src = m - 1 - k;  // ascending t is descending r
    const double r = grid.points[src];
    out.times[k] = -std::log(r);
    const double scale = std::pow(r, params.gamma);
    out.values[k].resize(p);
    for (int i = 0; i < p; ++i) out.values[k][i] = scale * grid.values[src][i];
  }

  const double h = out.spacing();
  bool uniform = true;
  for (std::size_t k = 1; k < m && uniform; ++k)
    uniform = std::abs((out.times[k] - out.times[k - 1]) - h) <= kUniformTol * h;
  if (uniform) return out;

  CylinderGrid res;
  res.times.resize(m);
  res.values.assign(m, std::vector<double>(p));
  for (std::size_t k = 0; k < m; ++k)
    res.times[k] = (k + 1 == m) ? out.times.back() : out.times.front() + double(k) * h;
  for (int i = 0; i < p; ++i) {
    std::vector<double> x = out.times, y(m);
    for (std::size_t k = 0; k < m; ++k) y[k] = out.values[k][i];
    boost::math::interpolators::pchip<std::vector<double>> interp(std::move(x), std::move(y));
    for (std::size_t k = 0; k < m; ++k) res.values[k][i] = interp(res.times[k]);
  }
  return res;
}

RadialGrid from_cylinder(const CylinderGrid& grid, const Params& params) {
  validate(grid);
  const std::size_t m = grid.size();
  const int p = grid.components();
  RadialGrid out;
  out.points.resize(m);
  out.values.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t src = m - 1 - k;
    const double r = std::exp(-grid.times[src]);
    out.points[k] = r;
    const double scale = std::pow(r, -params.gamma);
    out.values[k].resize(p);
    for (int i = 0; i < p; ++i) out.values[k][i] = scale * grid.values[src][i];
  }
  return out;
}

Wide kelvin(const RadialFn& fn, Wide mu, Wide r, const Params& params) {
  if (!(mu > 0) || !(r > 0)) throw Error(ErrorCode::InvalidArgument, "kelvin needs mu > 0 and r > 0");
  return pow(mu / r, params.n - 4) * fn(mu * mu / r);
}

RadialFn kelvin_of(RadialFn fn, double mu, const Params& params) {
  const int n = params.n;
  return [fn = std::move(fn), mu, n](Wide r) -> Wide {
    const Wide m = mu;
    return pow(m / r, n - 4) * fn(m * m / r);
  };
}

double central_difference(const RadialFn& fn, double r, int derivative, double h) {
  if (derivative < 1 || derivative > 4) throw Error(ErrorCode::InvalidArgument, "derivative order must be 1..4");
  check_stencil(r, h);
  return static_cast<double>(wide_difference(fn, Wide(r), derivative, Wide(h)));
}

double radial_bilaplacian(const RadialFn& fn, double r, const Params& params, double h) {
  check_stencil(r, h);
  const Wide R = r, H = h;
  const Wide n1 = params.n - 1, n3 = params.n - 3;
  const Wide value = wide_difference(fn, R, 4, H) + 2 * n1 / R * wide_difference(fn, R, 3, H) +
                     n1 * n3 / (R * R) * wide_difference(fn, R, 2, H) -
                     n1 * n3 / (R * R * R) * wide_difference(fn, R, 1, H);
  return static_cast<double>(value);
}

double radial_laplacian(const RadialFn& fn, double r, const Params& params, double h) {
  check_stencil(r, h);
  const Wide R = r, H = h;
  return static_cast<double>(wide_difference(fn, R, 2, H) + Wide(params.n - 1) / R * wide_difference(fn, R, 1, H));
}

double verify_kelvin_identity(const RadialFn& fn, double mu, std::span<const double> samples,
                              const Params& params, double h) {
  const auto transformed = kelvin_of(fn, mu, params);
  double worst = 0;
  for (double r : samples) {
    const double lhs = radial_bilaplacian(transformed, r, params, h);
    const double image = mu * mu / r;
    const double base = radial_bilaplacian(fn, image, params, h);
    const double rhs = std::pow(mu / r, params.n + 4) * base;
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(base)));
  }
  return worst;
}

ThreeSpheresReport three_spheres_check(const std::function<double(double)>& fn, double r1, double r2,
                                       std::span<const double> probes, const Params& params) {
  if (!(r1 > 0) || !(r2 > r1)) throw Error(ErrorCode::BadOrdering, "need 0 < r1 < r2");
  const double e = 4.0 - params.n;
  const double s1 = std::pow(r1, e), s2 = std::pow(r2, e);
  const double m1 = fn(r1), m2 = fn(r2);
  ThreeSpheresReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (double r : probes) {
    if (!(r > r1 && r < r2))
      throw Error(ErrorCode::BadOrdering, "probe " + format_double(r) + " is not inside (r1, r2)");
    const double s = std::pow(r, e);
    const double bound = (m1 * (s2 - s) + m2 * (s - s1)) / (s2 - s1);
    const double margin = fn(r) - bound;
    rep.margins.push_back(margin);
    rep.min_margin = std::min(rep.min_margin, margin);
  }
  return rep;
}

std::vector<double> grid_derivative(std::span<const double> samples, double h, int derivative) {
  if (derivative < 1 || derivative > 4) throw Error(ErrorCode::InvalidArgument, "derivative order must be 1..4");
  const std::size_t m = samples.size();
  std::vector<double> out(m, std::numeric_limits<double>::quiet_NaN());
  const auto& st = kStencils[derivative - 1];
  const double scale = st.den * std::pow(h, derivative);
  for (std::size_t k = 3; k + 3 < m; ++k) {
    double acc = 0;
    for (int j = -st.half; j <= st.half; ++j) acc += st.num[j + 3] * samples[k + j];
    out[k] = acc / scale;
  }
  return out;
}

void write_csv(std::ostream& os, const RadialGrid& grid) { write_grid(os, grid, grid.points, 'r', 'u'); }
void write_csv(std::ostream& os, const CylinderGrid& grid) { write_grid(os, grid, grid.times, 't', 'v'); }
RadialGrid read_radial_csv(std::istream& is) { return read_csv<RadialGrid>(is, 'r', 'u'); }
CylinderGrid read_cylinder_csv(std::istream& is) { return read_csv<CylinderGrid>(is, 't', 'v'); }

RadialGrid sample_radial(const std::function<double(double)>& profile, const std::vector<double>& lambda,
                         double r_min, double r_max, std::size_t count) {
  if (!(r_min > 0) || !(r_max > r_min) || count < 2)
    throw Error(ErrorCode::InvalidArgument, "need 0 < r_min < r_max and at least two samples");
  RadialGrid g;
  const double l0 = std::log(r_min), l1 = std::log(r_max);
  const double step = (l1 - l0) / double(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    const double r = std::exp(l0 + double(k) * step);
    const double u = profile(r);
    std::vector<double> row(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) row[i] = lambda[i] * u;
    g.points.push_back(r);
    g.values.push_back(std::move(row));
  }
  return g;
}

}  // namespace fowler
