#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mdu/link.hpp"
#include "mdu/rng.hpp"
#include "mdu/types.hpp"

namespace mdu {

struct StudySpec {
  std::vector<Index> j_values = {200};
  Index n_rule = 20;        // persons per item: N = n_rule * J
  Index true_dim = 2;       // K
  Index fit_dim = 2;        // K+
  double m_true = 1.0;      // generation radius
  double m_fit = 1.5;       // fit constraint
  double delta = 0.1;
  int replications = 20;
  int n_starts = 5;
  std::optional<double> missing_n;     // expected observed-entry budget
  std::optional<double> missing_frac;  // convenience alias: n = frac * N * J
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_iters = 1000;
  int threads = 1;
};

struct StudyCell {
  Index j = 0;
  Index n_persons = 0;
  double observed_frac = 1.0;
  std::vector<double> distance_losses;   // per replication, unsorted
  std::vector<double> config_losses;
  std::vector<bool> dominance;
  std::array<double, 3> distance_quantiles{};  // 25% / 50% / 75%
  std::array<double, 3> config_quantiles{};
  double mean_fit_seconds = 0.0;
  double total_seconds = 0.0;
};

struct StudyReport {
  StudySpec spec;
  std::vector<StudyCell> cells;
};

/// Uniform draw from the closed ball: spherically symmetric direction,
/// radius scaled by U^(1/K).
Vector sample_uniform_ball(Index dim, double radius, Rng& rng);

/// Independent Bernoulli(f(d_ij)) responses; mask all-true.
ResponseMatrix generate_responses(const Configuration& config, const LinkFunction& link, Rng& rng);

/// i.i.d. Bernoulli(n / (N J)) observation mask; requires 0 < n <= N J.
BinaryMatrix generate_missing_mask(Index n_persons, Index n_items, double n, Rng& rng);

/// Interpolated quantile (type 7) of an unsorted sample, p in [0, 1].
double quantile(std::vector<double> values, double p);

/// Per cell: generate truth on the M_true ball, draw responses (and mask when
/// a missing budget is set), fit with fit_multistart under M_fit, and record
/// both losses plus the likelihood-dominance flag. Replication r of cell J
/// uses the sub-stream (seed, J, r), so cells can run in any order.
StudyReport run_study(const StudySpec& spec,
                      const std::function<void(const std::string&)>& log = {});

}  // namespace mdu
