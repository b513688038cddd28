#pragma once

#include "mdu/types.hpp"

namespace mdu {

/// Distance-preserving map F(x) = rotation * x + translation;
/// rotation is orthogonal, reflections allowed.
struct Isometry {
  Matrix rotation;
  Vector translation;

  static Isometry identity(Index dim);
  Matrix apply(const Matrix& points) const;  // row-wise
};

struct AlignmentResult {
  Isometry isometry;
  double loss = 0.0;
};

/// Appends zero coordinates to reach target_dim; distances unchanged.
Configuration embed_zero_pad(const Configuration& config, Index target_dim);

/// Weighted orthogonal Procrustes for arbitrary point rows: finds the isometry
/// F minimizing sum_r weights(r) ||reference_r - F(estimate_r)||^2 over the
/// full orthogonal group (no determinant correction).
AlignmentResult weighted_procrustes(const Matrix& reference, const Matrix& estimate,
                                    const Vector& weights);

/// Minimizes (1/N) sum_i ||theta*_i - F(theta^_i)||^2
///         + (1/J) sum_j ||a*_j - F(a^_j)||^2 over isometries F.
AlignmentResult align_isometry(const Configuration& reference, const Configuration& estimate);

/// embed_zero_pad(truth, estimate.dim()) then align_isometry; returns the loss.
double average_config_loss(const Configuration& truth, const Configuration& estimate);

/// Mean squared entrywise difference ||D^ - D*||_F^2 / (N J).
double distance_matrix_loss(const PartialDistanceMatrix& estimate_d,
                            const PartialDistanceMatrix& truth_d);

enum class PointSet { persons, items };

/// Applies one isometry to all points: center on the selected set's mean,
/// rotate onto the eigenvector basis of the selected set's covariance
/// (eigenvalues descending), then flip each axis so the selected set's
/// largest-|coordinate| entry on that axis is positive.
Configuration rotate_to_principal_axes(const Configuration& config, PointSet which);

}  // namespace mdu
