#include "mdu/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "kernels.hpp"
#include "mdu/parallel.hpp"
#include "mdu/simulation.hpp"

namespace mdu {

namespace {

using detail::kChunkRows;

// One full Jacobi sweep over the self side: every row takes one projected
// gradient step with its own Armijo backtracking against the fixed other
// side. `y` and `w` are the response/mask matrices oriented self-major.
// Updates `self` in place and returns the total slice value at the accepted
// points, summed in fixed chunk order so the result ignores the thread count.
double sweep_block(Matrix& self, const Matrix& other, const BinaryMatrix& y,
                   const BinaryMatrix& w, const FitOptions& opt) {
  const Vector other_sq = other.rowwise().squaredNorm();
  const Index rows = self.rows();
  const Index n_chunks = detail::chunk_count(rows);
  std::vector<double> chunk_sums(static_cast<std::size_t>(n_chunks), 0.0);

  parallel_chunks(n_chunks, opt.threads, [&](Index chunk_begin, Index chunk_end) {
    for (Index c = chunk_begin; c < chunk_end; ++c) {
      const Index b = c * kChunkRows;
      const Index m = std::min<Index>(kChunkRows, rows - b);
      const Matrix cur = self.middleRows(b, m);
      const auto y_block = y.middleRows(b, m);
      const auto w_block = w.middleRows(b, m);

      detail::ChunkEval ev =
          detail::slice_values_and_grads(cur, other, other_sq, y_block, w_block, opt.delta);

      Matrix accepted = cur;
      Vector accepted_value = ev.value;
      std::vector<Index> active(static_cast<std::size_t>(m));
      std::iota(active.begin(), active.end(), Index{0});

      double rho = 1.0;
      for (int trial = 0; trial <= opt.max_halvings && !active.empty(); ++trial) {
        const bool all = static_cast<Index>(active.size()) == m;
        Matrix trial_cur, trial_grad;
        BinaryMatrix trial_y, trial_w;
        if (!all) {
          const Index a = static_cast<Index>(active.size());
          trial_cur.resize(a, cur.cols());
          trial_grad.resize(a, cur.cols());
          trial_y.resize(a, y.cols());
          trial_w.resize(a, w.cols());
          for (Index i = 0; i < a; ++i) {
            trial_cur.row(i) = cur.row(active[static_cast<std::size_t>(i)]);
            trial_grad.row(i) = ev.grad.row(active[static_cast<std::size_t>(i)]);
            trial_y.row(i) = y_block.row(active[static_cast<std::size_t>(i)]);
            trial_w.row(i) = w_block.row(active[static_cast<std::size_t>(i)]);
          }
        }
        const Matrix& tc = all ? cur : trial_cur;
        const Matrix& tg = all ? ev.grad : trial_grad;

        Matrix point = tc + rho * tg;
        detail::project_rows(point, opt.bound);
        Matrix d = detail::cross_distances(point, other, other_sq);
        Vector value = all ? detail::slice_values(d, y_block, w_block, opt.delta)
                           : detail::slice_values(d, trial_y, trial_w, opt.delta);

        std::vector<Index> still;
        for (std::size_t i = 0; i < active.size(); ++i) {
          const Index r = active[i];
          const Index ti = static_cast<Index>(i);
          double inner = (point.row(ti) - tc.row(ti)).dot(tg.row(ti));
          if (value(ti) >= ev.value(r) + opt.armijo_c * inner) {
            accepted.row(r) = point.row(ti);
            accepted_value(r) = value(ti);
          } else {
            still.push_back(r);
          }
        }
        active.swap(still);
        rho *= opt.shrink;
      }

      self.middleRows(b, m) = accepted;
      chunk_sums[static_cast<std::size_t>(c)] = accepted_value.sum();
    }
  });

  double total = 0.0;
  for (double s : chunk_sums) total += s;
  return total;
}

void require_feasible(const Matrix& rows, double bound, const char* what) {
  for (Index r = 0; r < rows.rows(); ++r)
    if (rows.row(r).norm() > bound + kBoundTol)
      throw std::invalid_argument(std::string("fit: initial ") + what +
                                  " configuration violates the ball constraint");
}

}  // namespace

void validate_fit_options(const FitOptions& options) {
  if (options.dim < 1) throw std::invalid_argument("FitOptions: dim must be >= 1");
  if (!(options.bound > 0.0)) throw std::invalid_argument("FitOptions: bound must be positive");
  if (!(options.delta > 0.0)) throw std::invalid_argument("FitOptions: delta must be positive");
  if (options.max_iters < 1) throw std::invalid_argument("FitOptions: max_iters must be >= 1");
  if (!(options.tol > 0.0)) throw std::invalid_argument("FitOptions: tol must be positive");
  if (options.n_starts < 1) throw std::invalid_argument("FitOptions: n_starts must be >= 1");
  if (!(options.armijo_c > 0.0 && options.armijo_c < 1.0))
    throw std::invalid_argument("FitOptions: armijo_c must lie in (0, 1)");
  if (!(options.shrink > 0.0 && options.shrink < 1.0))
    throw std::invalid_argument("FitOptions: shrink must lie in (0, 1)");
  if (options.max_halvings < 0) throw std::invalid_argument("FitOptions: max_halvings must be >= 0");
  if (options.threads < 0) throw std::invalid_argument("FitOptions: threads must be >= 0");
}

Vector project_ball(const Vector& x, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("project_ball: M must be positive");
  double n = x.norm();
  if (n <= M) return x;
  return (M / n) * x;
}

LineSearchResult block_line_search(const Vector& current, const Vector& gradient,
                                   const std::function<double(const Vector&)>& slice_objective,
                                   double M, const FitOptions& options) {
  const double g0 = slice_objective(current);
  double rho = 1.0;
  for (int trial = 0; trial <= options.max_halvings; ++trial) {
    Vector point = project_ball(current + rho * gradient, M);
    double inner = gradient.dot(point - current);
    if (slice_objective(point) >= g0 + options.armijo_c * inner) return {std::move(point), rho};
    rho *= options.shrink;
  }
  return {current, 0.0};
}

FitResult fit_alternating(const ResponseMatrix& data, const Configuration& initial,
                          const FitOptions& options) {
  validate_fit_options(options);
  if (initial.n_persons() != data.n_persons() || initial.n_items() != data.n_items())
    throw std::invalid_argument("fit_alternating: data and configuration shapes disagree");
  require_feasible(initial.persons, options.bound, "person");
  require_feasible(initial.items, options.bound, "item");

  Matrix P = initial.persons;
  Matrix A = initial.items;
  const BinaryMatrix y_items = data.values.transpose();
  const BinaryMatrix w_items = data.mask.transpose();
  const LinkFunction link = options.link();

  FitResult res;
  double obj =
      neg_log_likelihood(Configuration(P, A, options.bound), data, link, options.threads);
  res.trace.push_back(obj);

  bool converged = false;
  for (int m = 1; m <= options.max_iters; ++m) {
    sweep_block(P, A, data.values, data.mask, options);   // step (a): persons vs old items
    double loglik = sweep_block(A, P, y_items, w_items, options);  // step (b): items vs new persons
    double next = -loglik;
    res.trace.push_back(next);
    double rel = std::abs(obj - next) / (1.0 + std::abs(next));
    obj = next;
    if (rel < options.tol) {
      converged = true;
      break;
    }
  }

  res.iterations = static_cast<int>(res.trace.size()) - 1;
  res.converged = converged;
  res.final_objective = obj;
  res.config = Configuration(std::move(P), std::move(A), options.bound);
  res.start_index = 0;
  res.per_start_objectives = {res.final_objective};
  res.per_start_iterations = {res.iterations};
  res.per_start_converged = {converged};
  return res;
}

Configuration random_configuration(Index n_persons, Index n_items, Index dim, double M,
                                   Rng& rng) {
  Matrix P(n_persons, dim);
  for (Index i = 0; i < n_persons; ++i) P.row(i) = sample_uniform_ball(dim, M, rng);
  Matrix A(n_items, dim);
  for (Index j = 0; j < n_items; ++j) A.row(j) = sample_uniform_ball(dim, M, rng);
  return Configuration(std::move(P), std::move(A), M);
}

FitResult fit_multistart(const ResponseMatrix& data, const FitOptions& options) {
  validate_fit_options(options);
  FitResult best;
  std::vector<double> objectives;
  std::vector<int> iterations;
  std::vector<bool> converged;
  for (int s = 0; s < options.n_starts; ++s) {
    Rng rng = make_rng(options.seed, {static_cast<std::uint64_t>(s)});
    Configuration init =
        random_configuration(data.n_persons(), data.n_items(), options.dim, options.bound, rng);
    FitResult run = fit_alternating(data, init, options);
    objectives.push_back(run.final_objective);
    iterations.push_back(run.iterations);
    converged.push_back(run.converged);
    if (s == 0 || run.final_objective < best.final_objective) {
      best = std::move(run);
      best.start_index = s;
    }
  }
  best.per_start_objectives = std::move(objectives);
  best.per_start_iterations = std::move(iterations);
  best.per_start_converged = std::move(converged);
  return best;
}

bool check_likelihood_dominance(const FitResult& fit, const Configuration& truth,
                                const ResponseMatrix& data, const LinkFunction& link) {
  if (truth.n_persons() != data.n_persons() || truth.n_items() != data.n_items() ||
      fit.config.n_persons() != data.n_persons() || fit.config.n_items() != data.n_items())
    throw std::invalid_argument("check_likelihood_dominance: shape mismatch");
  return neg_log_likelihood(fit.config, data, link) <= neg_log_likelihood(truth, data, link);
}

}  // namespace mdu
