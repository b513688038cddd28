#include "mdu/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mdu {

namespace {

std::vector<int> assign_nearest(const Matrix& points, const Matrix& centroids) {
  std::vector<int> labels(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = (points.row(i) - centroids.row(0)).squaredNorm();
    for (Index c = 1; c < centroids.rows(); ++c) {
      double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

double within_sum(const Matrix& points, const Matrix& centroids, const std::vector<int>& labels) {
  double ss = 0.0;
  for (Index i = 0; i < points.rows(); ++i)
    ss += (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  return ss;
}

Matrix kmeanspp_seed(const Matrix& points, int k, Rng& rng) {
  const Index n = points.rows();
  Matrix centroids(k, points.cols());
  Index first = static_cast<Index>(uniform01(rng) * static_cast<double>(n));
  first = std::min(first, n - 1);
  centroids.row(0) = points.row(first);
  Vector dist2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    double total = dist2.sum();
    Index pick = 0;
    if (total > 0.0) {
      double r = uniform01(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += dist2(i);
        if (acc > r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::min(static_cast<Index>(uniform01(rng) * static_cast<double>(n)), n - 1);
    }
    centroids.row(c) = points.row(pick);
    dist2 = dist2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

/// Max-sum assignment on a k x k count matrix (Hungarian with potentials).
std::int64_t best_assignment_sum(const std::vector<std::vector<std::int64_t>>& counts) {
  const int n = static_cast<int>(counts.size());
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  // Minimize the negated counts.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      std::int64_t delta = inf;
      for (int j = 1; j <= n; ++j)
        if (!used[j]) {
          std::int64_t cur = -counts[i0 - 1][j - 1] - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
      for (int j = 0; j <= n; ++j)
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::int64_t total = 0;
  for (int j = 1; j <= n; ++j) total += counts[p[j] - 1][j - 1];
  return total;
}

/// Counts strict inversions (left > right) by iterative merge sort.
std::int64_t count_inversions(std::vector<double>& a) {
  const std::size_t n = a.size();
  std::vector<double> buf(n);
  std::int64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      std::size_t mid = lo + width;
      std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, out = lo;
      while (i < mid && j < hi) {
        if (a[i] <= a[j]) {
          buf[out++] = a[i++];
        } else {
          inversions += static_cast<std::int64_t>(mid - i);
          buf[out++] = a[j++];
        }
      }
      while (i < mid) buf[out++] = a[i++];
      while (j < hi) buf[out++] = a[j++];
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                buf.begin() + static_cast<std::ptrdiff_t>(hi),
                a.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return inversions;
}

std::int64_t tied_pairs(std::vector<double> sorted) {
  std::sort(sorted.begin(), sorted.end());
  std::int64_t ties = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      ties += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
      run = 1;
    }
  }
  return ties;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, int restarts, Rng& rng) {
  const Index n = points.rows();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > n) throw std::invalid_argument("kmeans: k exceeds the number of points");
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");

  KMeansResult best;
  best.within_ss = std::numeric_limits<double>::infinity();
  for (int rs = 0; rs < restarts; ++rs) {
    Matrix centroids = kmeanspp_seed(points, k, rng);
    std::vector<int> labels = assign_nearest(points, centroids);
    for (int iter = 0; iter < 100; ++iter) {
      // Reseed empty clusters to the point farthest from its centroid.
      std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
      for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
      Vector dist2(n);
      for (Index i = 0; i < n; ++i)
        dist2(i) = (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)]))
                       .squaredNorm();
      for (int c = 0; c < k; ++c) {
        if (sizes[static_cast<std::size_t>(c)] > 0) continue;
        Index far = 0;
        dist2.maxCoeff(&far);
        --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
        labels[static_cast<std::size_t>(far)] = c;
        sizes[static_cast<std::size_t>(c)] = 1;
        centroids.row(c) = points.row(far);
        dist2(far) = 0.0;
      }

      Matrix means = Matrix::Zero(k, points.cols());
      for (Index i = 0; i < n; ++i)
        means.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
      for (int c = 0; c < k; ++c) means.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
      centroids = means;

      std::vector<int> next = assign_nearest(points, centroids);
      if (next == labels) break;
      labels = std::move(next);
    }
    double ss = within_sum(points, centroids, labels);
    if (ss < best.within_ss) {
      best.within_ss = ss;
      best.centroids = std::move(centroids);
      best.labels = std::move(labels);
    }
  }
  for (int& l : best.labels) ++l;  // 1-based labels
  return best;
}

BiClustering bicluster(const Configuration& fit, int k1, int k2, int restarts, Rng& rng) {
  KMeansResult persons = kmeans(fit.persons, k1, restarts, rng);
  KMeansResult items = kmeans(fit.items, k2, restarts, rng);
  BiClustering out;
  out.person_labels = std::move(persons.labels);
  out.item_labels = std::move(items.labels);
  out.person_centroids = std::move(persons.centroids);
  out.item_centroids = std::move(items.centroids);
  return out;
}

double cluster_agreement(const std::vector<int>& true_labels, const std::vector<int>& est_labels,
                         int k) {
  if (true_labels.size() != est_labels.size())
    throw std::invalid_argument("cluster_agreement: label vectors differ in length");
  if (true_labels.empty()) throw std::invalid_argument("cluster_agreement: empty labels");
  if (k < 1) throw std::invalid_argument("cluster_agreement: k must be >= 1");
  std::vector<std::vector<std::int64_t>> counts(
      static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    int t = true_labels[i], e = est_labels[i];
    if (t < 1 || t > k || e < 1 || e > k)
      throw std::invalid_argument("cluster_agreement: labels must lie in [1..k]");
    ++counts[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(e - 1)];
  }
  return static_cast<double>(best_assignment_sum(counts)) /
         static_cast<double>(true_labels.size());
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall_tau: lengths differ");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("kendall_tau: need at least two observations");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  // Tie counts among x, among y, and among (x, y) pairs.
  std::int64_t xtie = 0, ntie = 0;
  {
    std::int64_t run = 1, run_xy = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      const bool same_x = i < n && x[order[i]] == x[order[i - 1]];
      const bool same_xy = same_x && y[order[i]] == y[order[i - 1]];
      if (same_xy) {
        ++run_xy;
      } else {
        ntie += run_xy * (run_xy - 1) / 2;
        run_xy = 1;
      }
      if (same_x) {
        ++run;
      } else {
        xtie += run * (run - 1) / 2;
        run = 1;
      }
    }
  }
  std::int64_t ytie = tied_pairs(y);

  std::vector<double> y_by_x(n);
  for (std::size_t i = 0; i < n; ++i) y_by_x[i] = y[order[i]];
  const std::int64_t discordant = count_inversions(y_by_x);

  const std::int64_t tot = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t con_x = tot - xtie;
  const std::int64_t con_y = tot - ytie;
  if (con_x == 0 || con_y == 0)
    throw std::domain_error("kendall_tau: undefined for a constant input");
  const std::int64_t num = tot - xtie - ytie + ntie - 2 * discordant;
  return static_cast<double>(num) /
         (std::sqrt(static_cast<double>(con_x)) * std::sqrt(static_cast<double>(con_y)));
}

double cross_entropy_heterogeneity(double p_yea, double p_nay, double p_missing) {
  const double ps[3] = {p_yea, p_nay, p_missing};
  double sum = 0.0;
  for (double p : ps) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("cross_entropy_heterogeneity: proportions must lie in [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("cross_entropy_heterogeneity: proportions must sum to 1");
  double ce = 0.0;
  for (double p : ps)
    if (p > 0.0) ce -= p * std::log(p);
  return ce;
}

}  // namespace mdu
