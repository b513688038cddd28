#pragma once

#include "mdu/types.hpp"

namespace mdu {

/// Decreasing link f(x) = 2 / (1 + exp(x + delta)), delta > 0, defined on x >= 0.
/// With delta > 0, f maps [0, inf) into (0, 1) so no likelihood term can hit
/// log(0). All evaluators use one exp and log1p-based logs for stability.
struct LinkFunction {
  double delta = 0.1;

  explicit LinkFunction(double delta_in);

  double eval(double x) const;        // f(x)
  double deriv(double x) const;       // f'(x) = -f(x) (1 - f(x)/2) < 0
  double one_minus(double x) const;   // 1 - f(x) = tanh((x+delta)/2), cancellation-free
  double log_eval(double x) const;    // log f(x)
  double log_one_minus(double x) const;  // log(1 - f(x))
};

/// A4 regularity constants over the reachable domain [0, alpha], alpha = 4M^2:
///   l_alpha    = sup |f'| / (f (1-f))
///   beta_alpha = sup f (1-f) / f'^2
struct RegularityConstants {
  double l_alpha = 0.0;
  double beta_alpha = 0.0;
  double alpha = 0.0;
};

PartialDistanceMatrix partial_distance_matrix(const Configuration& config);

/// Dense grid maximization on [0, 4M^2] (step <= 1e-3 * 4M^2) followed by
/// local ternary refinement around the best grid point.
RegularityConstants regularity_constants(const LinkFunction& link, double M);

}  // namespace mdu
