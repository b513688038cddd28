#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

namespace mdu {

// Row-major so that person/item rows are contiguous and numpy views are copy-free.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

// Squared person-item distances d_ij = ||theta_i - a_j||^2, N x J.
using PartialDistanceMatrix = Matrix;

inline constexpr double kBoundTol = 1e-9;

/// Binary responses with an observation mask (mask != 0 means observed).
/// Values at unobserved positions are ignored by every operation.
struct ResponseMatrix {
  BinaryMatrix values;
  BinaryMatrix mask;

  ResponseMatrix() = default;
  ResponseMatrix(BinaryMatrix values_in, BinaryMatrix mask_in);

  /// Fully observed matrix (all-true mask).
  static ResponseMatrix complete(BinaryMatrix values_in);

  Index n_persons() const { return values.rows(); }
  Index n_items() const { return values.cols(); }
  std::int64_t observed_count() const;
  bool fully_observed() const;
};

/// Joint ideal-point configuration: N person rows and J item rows in R^K,
/// every row inside the centered ball of radius `bound`.
struct Configuration {
  Matrix persons;
  Matrix items;
  double bound = 0.0;

  Configuration() = default;
  Configuration(Matrix persons_in, Matrix items_in, double bound_in);

  Index n_persons() const { return persons.rows(); }
  Index n_items() const { return items.rows(); }
  Index dim() const { return persons.cols(); }
};

}  // namespace mdu
