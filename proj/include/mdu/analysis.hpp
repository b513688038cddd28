#pragma once

#include <vector>

#include "mdu/rng.hpp"
#include "mdu/types.hpp"

namespace mdu {

// Cluster labels throughout this module are 1-based: values in [1..k].

struct KMeansResult {
  std::vector<int> labels;
  Matrix centroids;  // k x dim
  double within_ss = 0.0;
};

/// Lloyd iterations from k-means++ seeding, best of `restarts` seedings by
/// within-cluster sum of squares. Empty clusters are reseeded to the point
/// farthest from its assigned centroid.
KMeansResult kmeans(const Matrix& points, int k, int restarts, Rng& rng);

struct BiClustering {
  std::vector<int> person_labels;
  std::vector<int> item_labels;
  Matrix person_centroids;
  Matrix item_centroids;
};

/// K-means on person rows and item rows independently.
BiClustering bicluster(const Configuration& fit, int k1, int k2, int restarts, Rng& rng);

/// Max over label permutations of the matched fraction, computed exactly via
/// optimal assignment on the k x k contingency matrix.
double cluster_agreement(const std::vector<int>& true_labels, const std::vector<int>& est_labels,
                         int k);

/// Tie-corrected tau-b over all pairs. Throws std::domain_error when either
/// input is constant (tau undefined).
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

/// CE = -sum p log p with 0 log 0 = 0; inputs must lie on the 3-simplex.
double cross_entropy_heterogeneity(double p_yea, double p_nay, double p_missing);

}  // namespace mdu
