#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "fowler/model.hpp"
#include "fowler/transform.hpp"

namespace fowler {

enum class Verdict { NonSingularSpherical, SingularDelaunay, Inconsistent };

struct ClassificationReport {
  double pohozaev = 0;     ///< spherical Pohozaev estimate |S^{n-1}|·Ĥ
  double uncertainty = 0;  ///< |S^{n-1}|·ε_class
  double H_hat = 0;        ///< mean of the interior Hamiltonian estimates
  double H_spread = 0;     ///< standard deviation of those estimates
  double epsilon = 0;      ///< ε_class on the cylinder scale
  Verdict verdict = Verdict::Inconsistent;
  double gamma_hat = 0;
  std::optional<double> necksize_hat;
  std::optional<double> period_hat;
  std::vector<double> lambda_hat;
  double lambda_deviation = 0;
  std::vector<double> component_rates;
  bool semi_singular = false;
};

/// Classifies sampled radial data by the sign of the Pohozaev invariant.
ClassificationReport classify(const RadialGrid& grid, const Params& params);

/// Negated least-squares slope of log|U| against log r over the smallest decade.
double fit_blowup_rate(const RadialGrid& grid, const Params& params);

/// Same fit for each component separately; identically zero components give 0.
std::vector<double> component_blowup_rates(const RadialGrid& grid, const Params& params);

struct ProportionFit {
  std::vector<double> lambda;  ///< normalized mean of U/|U| over the radii
  double max_deviation = 0;    ///< max over radii of |U/|U| - lambda|∞
};

ProportionFit fit_proportions(const RadialGrid& grid);

/// Hamiltonian estimates at the interior points of the cylinder grid.
std::vector<double> hamiltonian_samples(const CylinderGrid& grid, const Params& params);

std::string_view to_string(Verdict verdict);

}  // namespace fowler
