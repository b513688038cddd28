#pragma once

// Chunked slice kernels shared by neg_log_likelihood and the optimizer sweeps.
// One "self" side (the rows being evaluated or updated) is played against the
// fixed "other" side; persons and items use the same kernel with the data
// matrix transposed. Everything is evaluated on fixed 128-row chunks so that
// results are independent of the thread count, and temporaries stay small.

#include <cmath>

#include "mdu/types.hpp"

namespace mdu::detail {

inline constexpr Index kChunkRows = 128;
inline const double kLog2 = std::log(2.0);

using Array2D = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Index chunk_count(Index rows) { return (rows + kChunkRows - 1) / kChunkRows; }

/// D(r, c) = ||self_r - other_c||^2, clamped at zero against cancellation.
inline Matrix cross_distances(const Matrix& self, const Matrix& other, const Vector& other_sq) {
  Matrix d = -2.0 * (self * other.transpose());
  d.colwise() += self.rowwise().squaredNorm().eval();
  d.rowwise() += other_sq.transpose();
  return d.cwiseMax(0.0);
}

/// Per-row log-likelihood slice: sum_c w [ y log f(d) + (1-y) log(1-f(d)) ].
/// Uses y (log2 - t) + (1-y) log1p(-e) - log1p(e) with e = exp(-t), t = d + delta.
inline Vector slice_values(const Matrix& d, const Eigen::Ref<const BinaryMatrix>& y_block,
                           const Eigen::Ref<const BinaryMatrix>& w_block, double delta) {
  Array2D t = d.array() + delta;
  Array2D e = (-t).exp();
  Array2D y = y_block.cast<double>();
  Array2D w = w_block.cast<double>();
  return (w * (y * (kLog2 - t) + (1.0 - y) * (-e).log1p() - e.log1p())).rowwise().sum();
}

struct ChunkEval {
  Vector value;  // per-row slice value
  Matrix grad;   // per-row slice gradient w.r.t. the self point
};

/// Slice values plus gradients 2 [ (sum_c c) p - sum_c c other_c ] where the
/// per-entry coefficient is c = w [ -y / (1+e) + (1-y) 2e / ((1-e)(1+e)) ].
inline ChunkEval slice_values_and_grads(const Matrix& self, const Matrix& other,
                                        const Vector& other_sq,
                                        const Eigen::Ref<const BinaryMatrix>& y_block,
                                        const Eigen::Ref<const BinaryMatrix>& w_block,
                                        double delta) {
  Matrix d = cross_distances(self, other, other_sq);
  Array2D t = d.array() + delta;
  Array2D e = (-t).exp();
  Array2D y = y_block.cast<double>();
  Array2D w = w_block.cast<double>();
  ChunkEval out;
  out.value = (w * (y * (kLog2 - t) + (1.0 - y) * (-e).log1p() - e.log1p())).rowwise().sum();
  Array2D one_plus_e = 1.0 + e;
  Array2D c = w * ((1.0 - y) * 2.0 * e / ((1.0 - e) * one_plus_e) - y / one_plus_e);
  Vector row_sum = c.rowwise().sum();
  out.grad = 2.0 * (self.array().colwise() * row_sum.array()).matrix() - 2.0 * (c.matrix() * other);
  return out;
}

/// Radial projection of every row onto the closed ball of radius M.
inline void project_rows(Matrix& rows, double M) {
  for (Index r = 0; r < rows.rows(); ++r) {
    double n = rows.row(r).norm();
    if (n > M) rows.row(r) *= M / n;
  }
}

}  // namespace mdu::detail
