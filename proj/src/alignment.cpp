#include "mdu/alignment.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace mdu {

Isometry Isometry::identity(Index dim) {
  return {Matrix::Identity(dim, dim), Vector::Zero(dim)};
}

Matrix Isometry::apply(const Matrix& points) const {
  Matrix out = points * rotation.transpose();
  out.rowwise() += translation.transpose();
  return out;
}

Configuration embed_zero_pad(const Configuration& config, Index target_dim) {
  if (target_dim < config.dim())
    throw std::invalid_argument("embed_zero_pad: target_dim is below the current dimension");
  if (target_dim == config.dim()) return config;
  Matrix P = Matrix::Zero(config.n_persons(), target_dim);
  P.leftCols(config.dim()) = config.persons;
  Matrix A = Matrix::Zero(config.n_items(), target_dim);
  A.leftCols(config.dim()) = config.items;
  return Configuration(std::move(P), std::move(A), config.bound);
}

AlignmentResult weighted_procrustes(const Matrix& reference, const Matrix& estimate,
                                    const Vector& weights) {
  if (reference.rows() != estimate.rows() || reference.cols() != estimate.cols())
    throw std::invalid_argument("weighted_procrustes: point sets differ in shape");
  if (weights.size() != reference.rows())
    throw std::invalid_argument("weighted_procrustes: one weight per row required");
  if (reference.rows() == 0) throw std::invalid_argument("weighted_procrustes: empty input");
  const double total = weights.sum();
  if (!(total > 0.0) || weights.minCoeff() < 0.0)
    throw std::invalid_argument("weighted_procrustes: weights must be non-negative, not all zero");

  const Vector ref_mean = reference.transpose() * weights / total;
  const Vector est_mean = estimate.transpose() * weights / total;
  Matrix ref_c = reference.rowwise() - ref_mean.transpose();
  Matrix est_c = estimate.rowwise() - est_mean.transpose();

  // Weighted cross-covariance sum_r w_r (ref_r - r_mean)(est_r - e_mean)^T.
  Matrix cross = ref_c.transpose() * (est_c.array().colwise() * weights.array()).matrix();
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix rotation = svd.matrixU() * svd.matrixV().transpose();
  Vector translation = ref_mean - rotation * est_mean;

  Vector residual_sq = (ref_c - est_c * rotation.transpose()).rowwise().squaredNorm();
  AlignmentResult out;
  out.isometry = {std::move(rotation), std::move(translation)};
  out.loss = residual_sq.dot(weights);
  return out;
}

AlignmentResult align_isometry(const Configuration& reference, const Configuration& estimate) {
  if (reference.dim() != estimate.dim())
    throw std::invalid_argument("align_isometry: dimensions disagree (embed_zero_pad first)");
  if (reference.n_persons() != estimate.n_persons() || reference.n_items() != estimate.n_items())
    throw std::invalid_argument("align_isometry: point counts disagree");
  const Index N = reference.n_persons();
  const Index J = reference.n_items();
  const Index K = reference.dim();
  Matrix ref_all(N + J, K), est_all(N + J, K);
  ref_all << reference.persons, reference.items;
  est_all << estimate.persons, estimate.items;
  Vector weights(N + J);
  weights.head(N).setConstant(1.0 / static_cast<double>(N));
  weights.tail(J).setConstant(1.0 / static_cast<double>(J));
  return weighted_procrustes(ref_all, est_all, weights);
}

double average_config_loss(const Configuration& truth, const Configuration& estimate) {
  return align_isometry(embed_zero_pad(truth, estimate.dim()), estimate).loss;
}

double distance_matrix_loss(const PartialDistanceMatrix& estimate_d,
                            const PartialDistanceMatrix& truth_d) {
  if (estimate_d.rows() != truth_d.rows() || estimate_d.cols() != truth_d.cols())
    throw std::invalid_argument("distance_matrix_loss: shape mismatch");
  const double cells = static_cast<double>(estimate_d.rows()) * estimate_d.cols();
  return (estimate_d - truth_d).squaredNorm() / cells;
}

Configuration rotate_to_principal_axes(const Configuration& config, PointSet which) {
  const Matrix& selected = which == PointSet::persons ? config.persons : config.items;
  if (selected.rows() < 2)
    throw std::invalid_argument("rotate_to_principal_axes: need at least two points");
  const Index K = config.dim();
  const Vector mean = selected.colwise().mean();
  Matrix centered = selected.rowwise() - mean.transpose();
  Matrix cov = centered.transpose() * centered / static_cast<double>(selected.rows());

  Matrix basis = Matrix::Identity(K, K);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() == Eigen::Success && eig.eigenvalues().maxCoeff() > 1e-12) {
    // Eigen orders eigenvalues ascending; reverse for variance-descending axes.
    for (Index k = 0; k < K; ++k) basis.col(k) = eig.eigenvectors().col(K - 1 - k);
  }

  Matrix persons = (config.persons.rowwise() - mean.transpose()) * basis;
  Matrix items = (config.items.rowwise() - mean.transpose()) * basis;
  Matrix sel_rot = (selected.rowwise() - mean.transpose()) * basis;
  for (Index k = 0; k < K; ++k) {
    Index arg = 0;
    sel_rot.col(k).cwiseAbs().maxCoeff(&arg);
    if (sel_rot(arg, k) < 0.0) {
      persons.col(k) = -persons.col(k);
      items.col(k) = -items.col(k);
    }
  }

  double bound = 0.0;
  for (Index r = 0; r < persons.rows(); ++r) bound = std::max(bound, persons.row(r).norm());
  for (Index r = 0; r < items.rows(); ++r) bound = std::max(bound, items.row(r).norm());
  return Configuration(std::move(persons), std::move(items), bound);
}

}  // namespace mdu
