#include "mdu/types.hpp"

#include <string>

namespace mdu {

ResponseMatrix::ResponseMatrix(BinaryMatrix values_in, BinaryMatrix mask_in)
    : values(std::move(values_in)), mask(std::move(mask_in)) {
  if (values.rows() < 1 || values.cols() < 1)
    throw std::invalid_argument("ResponseMatrix: need N >= 1 and J >= 1");
  if (mask.rows() != values.rows() || mask.cols() != values.cols())
    throw std::invalid_argument("ResponseMatrix: mask shape differs from values");
  for (Index i = 0; i < values.rows(); ++i)
    for (Index j = 0; j < values.cols(); ++j) {
      if (values(i, j) > 1)
        throw std::invalid_argument("ResponseMatrix: values must be 0 or 1 (row " +
                                    std::to_string(i) + ", col " + std::to_string(j) + ")");
      if (mask(i, j) > 1) throw std::invalid_argument("ResponseMatrix: mask must be 0 or 1");
    }
}

ResponseMatrix ResponseMatrix::complete(BinaryMatrix values_in) {
  BinaryMatrix all = BinaryMatrix::Ones(values_in.rows(), values_in.cols());
  return ResponseMatrix(std::move(values_in), std::move(all));
}

std::int64_t ResponseMatrix::observed_count() const {
  std::int64_t n = 0;
  for (Index i = 0; i < mask.rows(); ++i)
    for (Index j = 0; j < mask.cols(); ++j) n += mask(i, j) != 0;
  return n;
}

bool ResponseMatrix::fully_observed() const {
  return observed_count() == static_cast<std::int64_t>(mask.rows()) * mask.cols();
}

Configuration::Configuration(Matrix persons_in, Matrix items_in, double bound_in)
    : persons(std::move(persons_in)), items(std::move(items_in)), bound(bound_in) {
  if (persons.cols() < 1) throw std::invalid_argument("Configuration: dim must be >= 1");
  if (items.cols() != persons.cols())
    throw std::invalid_argument("Configuration: persons and items disagree on dim");
  if (persons.rows() < 1 || items.rows() < 1)
    throw std::invalid_argument("Configuration: need at least one person and one item");
  if (!(bound >= 0.0)) throw std::invalid_argument("Configuration: bound must be non-negative");
  auto check = [&](const Matrix& m, const char* what) {
    for (Index r = 0; r < m.rows(); ++r) {
      if (m.row(r).norm() > bound + kBoundTol)
        throw std::invalid_argument(std::string("Configuration: ") + what + " row " +
                                    std::to_string(r) + " lies outside the radius-" +
                                    std::to_string(bound) + " ball");
    }
  };
  check(persons, "person");
  check(items, "item");
}

}  // namespace mdu
