#pragma once

#include "mdu/link.hpp"
#include "mdu/types.hpp"

namespace mdu {

/// -sum over observed (i,j) of [ y log f(d_ij) + (1-y) log(1-f(d_ij)) ].
/// Empty mask yields 0. `threads` > 1 splits person rows; the reduction order
/// is fixed (per-row partials summed sequentially) so results are
/// thread-count-invariant bit for bit.
double neg_log_likelihood(const Configuration& config, const ResponseMatrix& data,
                          const LinkFunction& link, int threads = 1);

/// Gradient of the person-i slice of the LOG-likelihood:
///   sum over observed j of [ y f'/f - (1-y) f'/(1-f) ] (d_ij) * 2 (theta_i - a_j).
Vector person_gradient(Index i, const Configuration& config, const ResponseMatrix& data,
                       const LinkFunction& link);

/// Same kernel with roles exchanged: sum over observed i of [...] * 2 (a_j - theta_i).
Vector item_gradient(Index j, const Configuration& config, const ResponseMatrix& data,
                     const LinkFunction& link);

}  // namespace mdu
