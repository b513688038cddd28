#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mdu/likelihood.hpp"
#include "mdu/rng.hpp"

namespace mdu {

struct FitOptions {
  Index dim = 2;            // latent dimension K+
  double bound = 1.5;       // ball radius M
  double delta = 0.1;       // link parameter
  int max_iters = 1000;
  double tol = 1e-6;        // relative objective change threshold
  int n_starts = 10;
  std::uint64_t seed = 0;
  double armijo_c = 1e-4;   // sufficient-increase constant
  double shrink = 0.5;      // step-shrink factor
  int max_halvings = 50;
  int threads = 1;

  LinkFunction link() const { return LinkFunction(delta); }
};

/// Throws std::invalid_argument on out-of-range options.
void validate_fit_options(const FitOptions& options);

struct FitResult {
  Configuration config;
  double final_objective = 0.0;        // neg log-likelihood at the solution
  std::vector<double> trace;           // objective per iteration, trace[0] = at start
  int iterations = 0;
  bool converged = false;
  int start_index = 0;                 // which random start won
  std::vector<double> per_start_objectives;
  std::vector<int> per_start_iterations;
  std::vector<bool> per_start_converged;
};

/// Proc_M: x if ||x|| <= M, else M x / ||x||.
Vector project_ball(const Vector& x, double M);

struct LineSearchResult {
  Vector point;
  double step = 0.0;  // accepted rho; 0 when every trial failed
};

/// Backtracking Armijo search on one block slice: tries
/// project_ball(current + rho g, M) for rho in {1, shrink, shrink^2, ...}
/// (max_halvings trials) and accepts the first point with
///   slice(new) >= slice(current) + armijo_c * <g, new - current>.
/// Falls back to `current` with step 0.
LineSearchResult block_line_search(const Vector& current, const Vector& gradient,
                                   const std::function<double(const Vector&)>& slice_objective,
                                   double M, const FitOptions& options);

/// Alternates a full sweep of person updates (all using the previous
/// iteration's items) with a full sweep of item updates (using the fresh
/// persons) until the relative objective change drops below tol.
FitResult fit_alternating(const ResponseMatrix& data, const Configuration& initial,
                          const FitOptions& options);

/// All N+J rows drawn independently and uniformly from the ball of radius M.
Configuration random_configuration(Index n_persons, Index n_items, Index dim, double M, Rng& rng);

/// Best of n_starts runs of fit_alternating from independent random starts;
/// start s uses the sub-stream mix_seed(seed, {s}).
FitResult fit_multistart(const ResponseMatrix& data, const FitOptions& options);

/// True iff the fit attains at least the generating truth's likelihood.
bool check_likelihood_dominance(const FitResult& fit, const Configuration& truth,
                                const ResponseMatrix& data, const LinkFunction& link);

}  // namespace mdu
