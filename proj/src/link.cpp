#include "mdu/link.hpp"

#include <cmath>
#include <stdexcept>

namespace mdu {

namespace {
void require_nonnegative(double x) {
  if (!(x >= 0.0))
    throw std::domain_error("link: squared distance must be non-negative, got " +
                            std::to_string(x));
}
}  // namespace

LinkFunction::LinkFunction(double delta_in) : delta(delta_in) {
  if (!(delta > 0.0)) throw std::invalid_argument("LinkFunction: delta must be positive");
}

double LinkFunction::eval(double x) const {
  require_nonnegative(x);
  double e = std::exp(-(x + delta));
  return 2.0 * e / (1.0 + e);
}

double LinkFunction::deriv(double x) const {
  double f = eval(x);
  return -f * (1.0 - 0.5 * f);
}

double LinkFunction::one_minus(double x) const {
  require_nonnegative(x);
  // 1 - 2e/(1+e) = (1-e)/(1+e) = tanh(t/2); avoids cancellation at small x.
  return std::tanh(0.5 * (x + delta));
}

double LinkFunction::log_eval(double x) const {
  require_nonnegative(x);
  double t = x + delta;
  return std::log(2.0) - t - std::log1p(std::exp(-t));
}

double LinkFunction::log_one_minus(double x) const {
  require_nonnegative(x);
  double e = std::exp(-(x + delta));
  return std::log1p(-e) - std::log1p(e);
}

PartialDistanceMatrix partial_distance_matrix(const Configuration& config) {
  const Matrix& P = config.persons;
  const Matrix& A = config.items;
  Vector sp = P.rowwise().squaredNorm();
  Vector sa = A.rowwise().squaredNorm();
  PartialDistanceMatrix d = (-2.0 * P * A.transpose()).eval();
  d.colwise() += sp;
  d.rowwise() += sa.transpose();
  // Squared distances: clamp the tiny negatives produced by cancellation.
  return d.cwiseMax(0.0);
}

RegularityConstants regularity_constants(const LinkFunction& link, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("regularity_constants: M must be positive");
  const double alpha = 4.0 * M * M;

  auto steepness = [&](double x) {
    double f = link.eval(x);
    return -link.deriv(x) / (f * link.one_minus(x));
  };
  auto flatness = [&](double x) {
    double fp = link.deriv(x);
    return link.eval(x) * link.one_minus(x) / (fp * fp);
  };

  auto maximize = [&](auto&& fn) {
    const int cells = 1000;  // grid step = 1e-3 * alpha
    double best_x = 0.0, best = fn(0.0);
    for (int i = 1; i <= cells; ++i) {
      double x = alpha * i / cells;
      double v = fn(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    // Ternary refinement on the bracketing cells around the best grid point.
    double lo = std::max(0.0, best_x - alpha / cells);
    double hi = std::min(alpha, best_x + alpha / cells);
    for (int it = 0; it < 200; ++it) {
      double m1 = lo + (hi - lo) / 3.0;
      double m2 = hi - (hi - lo) / 3.0;
      if (fn(m1) < fn(m2))
        lo = m1;
      else
        hi = m2;
    }
    return std::max(best, fn(0.5 * (lo + hi)));
  };

  RegularityConstants out;
  out.alpha = alpha;
  out.l_alpha = maximize(steepness);
  out.beta_alpha = maximize(flatness);
  return out;
}

}  // namespace mdu
