#include "mdu/likelihood.hpp"

#include <stdexcept>
#include <vector>

#include "kernels.hpp"
#include "mdu/parallel.hpp"

namespace mdu {

namespace {

void require_shapes(const Configuration& config, const ResponseMatrix& data) {
  if (config.n_persons() != data.n_persons() || config.n_items() != data.n_items())
    throw std::invalid_argument("likelihood: configuration and data shapes disagree");
}

}  // namespace

double neg_log_likelihood(const Configuration& config, const ResponseMatrix& data,
                          const LinkFunction& link, int threads) {
  require_shapes(config, data);
  const Matrix& P = config.persons;
  const Matrix& A = config.items;
  const Vector sq_items = A.rowwise().squaredNorm();
  const Index n_chunks = detail::chunk_count(P.rows());
  std::vector<double> chunk_sums(static_cast<std::size_t>(n_chunks), 0.0);
  parallel_chunks(n_chunks, threads, [&](Index cb, Index ce) {
    for (Index c = cb; c < ce; ++c) {
      Index b = c * detail::kChunkRows;
      Index m = std::min(detail::kChunkRows, P.rows() - b);
      Matrix d = detail::cross_distances(P.middleRows(b, m), A, sq_items);
      chunk_sums[static_cast<std::size_t>(c)] =
          detail::slice_values(d, data.values.middleRows(b, m), data.mask.middleRows(b, m),
                               link.delta)
              .sum();
    }
  });
  double loglik = 0.0;
  for (double s : chunk_sums) loglik += s;  // fixed order: thread-count invariant
  return -loglik;
}

Vector person_gradient(Index i, const Configuration& config, const ResponseMatrix& data,
                       const LinkFunction& link) {
  require_shapes(config, data);
  if (i < 0 || i >= config.n_persons())
    throw std::out_of_range("person_gradient: person index out of range");
  const Vector sq_items = config.items.rowwise().squaredNorm();
  detail::ChunkEval eval = detail::slice_values_and_grads(
      config.persons.middleRows(i, 1), config.items, sq_items, data.values.middleRows(i, 1),
      data.mask.middleRows(i, 1), link.delta);
  return eval.grad.row(0);
}

Vector item_gradient(Index j, const Configuration& config, const ResponseMatrix& data,
                     const LinkFunction& link) {
  require_shapes(config, data);
  if (j < 0 || j >= config.n_items())
    throw std::out_of_range("item_gradient: item index out of range");
  const Vector sq_persons = config.persons.rowwise().squaredNorm();
  const BinaryMatrix y_col = data.values.col(j).transpose();
  const BinaryMatrix w_col = data.mask.col(j).transpose();
  detail::ChunkEval eval = detail::slice_values_and_grads(
      config.items.middleRows(j, 1), config.persons, sq_persons, y_col, w_col, link.delta);
  return eval.grad.row(0);
}

}  // namespace mdu
