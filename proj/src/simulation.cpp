#include "mdu/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mdu/alignment.hpp"
#include "mdu/optimizer.hpp"

namespace mdu {

Vector sample_uniform_ball(Index dim, double radius, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("sample_uniform_ball: dim must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("sample_uniform_ball: radius must be positive");
  Vector v(dim);
  for (;;) {
    for (Index k = 0; k < dim; ++k) v(k) = standard_normal(rng);
    double norm = v.norm();
    if (norm > 0.0) {
      double u = uniform01(rng);
      v *= radius * std::pow(u, 1.0 / static_cast<double>(dim)) / norm;
      return v;
    }
  }
}

ResponseMatrix generate_responses(const Configuration& config, const LinkFunction& link,
                                  Rng& rng) {
  const PartialDistanceMatrix d = partial_distance_matrix(config);
  BinaryMatrix values(d.rows(), d.cols());
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = 0; j < d.cols(); ++j)
      values(i, j) = uniform01(rng) < link.eval(d(i, j)) ? 1 : 0;
  return ResponseMatrix::complete(std::move(values));
}

BinaryMatrix generate_missing_mask(Index n_persons, Index n_items, double n, Rng& rng) {
  const double cells = static_cast<double>(n_persons) * static_cast<double>(n_items);
  if (!(n > 0.0) || n > cells)
    throw std::invalid_argument("generate_missing_mask: need 0 < n <= N*J");
  const double p = n / cells;
  BinaryMatrix mask(n_persons, n_items);
  for (Index i = 0; i < n_persons; ++i)
    for (Index j = 0; j < n_items; ++j) mask(i, j) = uniform01(rng) < p ? 1 : 0;
  return mask;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

StudyReport run_study(const StudySpec& spec, const std::function<void(const std::string&)>& log) {
  if (spec.j_values.empty()) throw std::invalid_argument("run_study: j_values is empty");
  if (spec.n_rule < 1) throw std::invalid_argument("run_study: n_rule must be >= 1");
  if (spec.replications < 1) throw std::invalid_argument("run_study: replications must be >= 1");
  if (spec.fit_dim < spec.true_dim)
    throw std::invalid_argument("run_study: fit_dim must be >= true_dim");
  if (spec.missing_n && spec.missing_frac)
    throw std::invalid_argument("run_study: set missing_n or missing_frac, not both");
  if (spec.missing_frac && !(*spec.missing_frac > 0.0 && *spec.missing_frac <= 1.0))
    throw std::invalid_argument("run_study: missing_frac must lie in (0, 1]");
  const LinkFunction link(spec.delta);

  StudyReport report;
  report.spec = spec;
  for (Index J : spec.j_values) {
    const Index N = spec.n_rule * J;
    const double cells = static_cast<double>(N) * static_cast<double>(J);
    double budget = cells;
    if (spec.missing_n) budget = *spec.missing_n;
    if (spec.missing_frac) budget = *spec.missing_frac * cells;

    StudyCell cell;
    cell.j = J;
    cell.n_persons = N;
    cell.observed_frac = budget / cells;
    const auto cell_start = std::chrono::steady_clock::now();

    for (int rep = 0; rep < spec.replications; ++rep) {
      const auto rep_start = std::chrono::steady_clock::now();
      Rng rng = make_rng(spec.seed,
                         {static_cast<std::uint64_t>(J), static_cast<std::uint64_t>(rep)});
      Configuration truth =
          random_configuration(N, J, spec.true_dim, spec.m_true, rng);
      ResponseMatrix data = generate_responses(truth, link, rng);
      if (budget < cells) {
        BinaryMatrix mask = generate_missing_mask(N, J, budget, rng);
        data = ResponseMatrix(std::move(data.values), std::move(mask));
      }

      FitOptions opt;
      opt.dim = spec.fit_dim;
      opt.bound = spec.m_fit;
      opt.delta = spec.delta;
      opt.max_iters = spec.max_iters;
      opt.tol = spec.tol;
      opt.n_starts = spec.n_starts;
      opt.threads = spec.threads;
      opt.seed = mix_seed(spec.seed, {static_cast<std::uint64_t>(J),
                                      static_cast<std::uint64_t>(rep), 0x5eedULL});
      FitResult fit = fit_multistart(data, opt);

      const double dist_loss = distance_matrix_loss(partial_distance_matrix(fit.config),
                                                    partial_distance_matrix(truth));
      const double config_loss = average_config_loss(truth, fit.config);
      const bool dominant = check_likelihood_dominance(fit, truth, data, link);
      cell.distance_losses.push_back(dist_loss);
      cell.config_losses.push_back(config_loss);
      cell.dominance.push_back(dominant);

      if (log) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - rep_start).count();
        std::ostringstream msg;
        msg << "J=" << J << " rep " << rep + 1 << "/" << spec.replications
            << "  distance_loss=" << dist_loss << "  config_loss=" << config_loss
            << "  dominance=" << (dominant ? 1 : 0) << "  (" << secs << " s)";
        log(msg.str());
      }
    }

    cell.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - cell_start).count();
    cell.mean_fit_seconds = cell.total_seconds / spec.replications;
    for (int q = 0; q < 3; ++q) {
      const double p = 0.25 * (q + 1);
      cell.distance_quantiles[q] = quantile(cell.distance_losses, p);
      cell.config_quantiles[q] = quantile(cell.config_losses, p);
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

}  // namespace mdu
