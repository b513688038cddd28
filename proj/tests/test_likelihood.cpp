#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mdu/likelihood.hpp"
#include "mdu/link.hpp"
#include "test_util.hpp"

using namespace mdu;
using namespace mdu::testing;

namespace {

Configuration one_pair(double px, double py, double ax, double ay, double bound) {
  Matrix persons(1, 2), items(1, 2);
  persons << px, py;
  items << ax, ay;
  return Configuration(persons, items, bound);
}

ResponseMatrix single(int y) {
  BinaryMatrix values(1, 1);
  values << y;
  return ResponseMatrix::complete(values);
}

}  // namespace

TEST_CASE("neg_log_likelihood closed-form single-cell values") {
  LinkFunction link(0.1);
  Configuration coincident = one_pair(0, 0, 0, 0, 1.0);
  CHECK(neg_log_likelihood(coincident, single(1), link) ==
        doctest::Approx(0.051249).epsilon(1e-4));
  CHECK(neg_log_likelihood(coincident, single(0), link) ==
        doctest::Approx(2.99654).epsilon(1e-5));
  // exact closed forms
  CHECK(neg_log_likelihood(coincident, single(1), link) ==
        doctest::Approx(-std::log(link.eval(0.0))).epsilon(1e-12));
  CHECK(neg_log_likelihood(coincident, single(0), link) ==
        doctest::Approx(-std::log1p(-link.eval(0.0))).epsilon(1e-12));
}

TEST_CASE("neg_log_likelihood: empty mask gives zero, masking is per-term") {
  LinkFunction link(0.1);
  Rng rng = make_rng(21);
  Configuration config = random_test_config(6, 5, 2, 1.0, rng);
  BinaryMatrix values(6, 5);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 5; ++j) values(i, j) = uniform01(rng) < 0.5;

  BinaryMatrix none(6, 5);
  none.setZero();
  CHECK(neg_log_likelihood(config, ResponseMatrix(values, none), link) == 0.0);

  // dropping one observed entry removes exactly that entry's term
  Matrix d = partial_distance_matrix(config);
  BinaryMatrix mask(6, 5);
  mask.setOnes();
  double full = neg_log_likelihood(config, ResponseMatrix(values, mask), link);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 5; ++j) {
      BinaryMatrix dropped = mask;
      dropped(i, j) = 0;
      double without = neg_log_likelihood(config, ResponseMatrix(values, dropped), link);
      double term = values(i, j) ? -link.log_eval(d(i, j)) : -link.log_one_minus(d(i, j));
      CHECK(full - without == doctest::Approx(term).epsilon(1e-9));
    }
}

TEST_CASE("neg_log_likelihood symmetric under person/item exchange") {
  LinkFunction link(0.1);
  Rng rng = make_rng(22);
  Configuration config = random_test_config(8, 5, 3, 1.2, rng);
  ResponseMatrix data = random_responses(8, 5, 0.5, 0.8, rng);

  Configuration swapped(config.items, config.persons, config.bound);
  ResponseMatrix transposed(data.values.transpose(), data.mask.transpose());
  CHECK(neg_log_likelihood(config, data, link) ==
        doctest::Approx(neg_log_likelihood(swapped, transposed, link)).epsilon(1e-12));
}

TEST_CASE("neg_log_likelihood shape validation and threading") {
  LinkFunction link(0.1);
  Rng rng = make_rng(23);
  Configuration config = random_test_config(4, 3, 2, 1.0, rng);
  ResponseMatrix wrong = random_responses(5, 3, 0.5, 1.0, rng);
  CHECK_THROWS_AS(neg_log_likelihood(config, wrong, link), std::invalid_argument);

  Configuration big = random_test_config(300, 40, 2, 1.0, rng);
  ResponseMatrix data = random_responses(300, 40, 0.5, 0.9, rng);
  double single_thread = neg_log_likelihood(big, data, link, 1);
  double multi_thread = neg_log_likelihood(big, data, link, 4);
  CHECK(single_thread == multi_thread);  // fixed chunking: bit-identical
}

TEST_CASE("person_gradient closed-form example") {
  LinkFunction link(0.1);
  Configuration config = one_pair(1, 0, 0, 0, 1.0);
  Vector g = person_gradient(0, config, single(1), link);
  CHECK(g[0] == doctest::Approx(-1.50052).epsilon(1e-5));
  CHECK(g[1] == doctest::Approx(0.0));
  // f'/f = -(1 - f/2) at d = 1, times 2(theta - a)
  double want = -(1.0 - link.eval(1.0) / 2.0) * 2.0;
  CHECK(g[0] == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("item_gradient mirrored example") {
  LinkFunction link(0.1);
  Configuration config = one_pair(0, 0, 1, 0, 1.0);
  Vector g = item_gradient(0, config, single(1), link);
  CHECK(g[0] == doctest::Approx(-1.50052).epsilon(1e-5));
  CHECK(g[1] == doctest::Approx(0.0));
}

TEST_CASE("gradients vanish at coincident points") {
  LinkFunction link(0.1);
  Configuration config = one_pair(0.3, -0.2, 0.3, -0.2, 1.0);
  CHECK(person_gradient(0, config, single(1), link).norm() == 0.0);
  CHECK(item_gradient(0, config, single(0), link).norm() == 0.0);
}

TEST_CASE("gradients match central finite differences on random instances") {
  LinkFunction link(0.1);
  Rng rng = make_rng(24);
  for (int trial = 0; trial < 25; ++trial) {
    Index n = 2 + static_cast<Index>(uniform01(rng) * 8);
    Index j = 2 + static_cast<Index>(uniform01(rng) * 6);
    Index k = 1 + static_cast<Index>(uniform01(rng) * 3);
    Configuration config = random_test_config(n, j, k, 1.3, rng);
    ResponseMatrix data = random_responses(n, j, 0.5, 0.8, rng);
    for (Index i = 0; i < n; ++i) {
      Vector got = person_gradient(i, config, data, link);
      Vector want = fd_gradient(true, i, config, data, link);
      CHECK(rel_vec_error(got, want) < 1e-5);
    }
    for (Index c = 0; c < j; ++c) {
      Vector got = item_gradient(c, config, data, link);
      Vector want = fd_gradient(false, c, config, data, link);
      CHECK(rel_vec_error(got, want) < 1e-5);
    }
  }
}

TEST_CASE("gradient index validation") {
  LinkFunction link(0.1);
  Rng rng = make_rng(25);
  Configuration config = random_test_config(3, 2, 2, 1.0, rng);
  ResponseMatrix data = random_responses(3, 2, 0.5, 1.0, rng);
  CHECK_THROWS_AS(person_gradient(3, config, data, link), std::out_of_range);
  CHECK_THROWS_AS(person_gradient(-1, config, data, link), std::out_of_range);
  CHECK_THROWS_AS(item_gradient(2, config, data, link), std::out_of_range);
}

TEST_CASE("unobserved values are ignored entirely") {
  LinkFunction link(0.1);
  Rng rng = make_rng(26);
  Configuration config = random_test_config(5, 4, 2, 1.0, rng);
  ResponseMatrix data = random_responses(5, 4, 0.5, 0.6, rng);
  // flip every masked-out value; nothing may change
  BinaryMatrix flipped = data.values;
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 4; ++j)
      if (!data.mask(i, j)) flipped(i, j) = 1 - flipped(i, j);
  ResponseMatrix other(flipped, data.mask);
  CHECK(neg_log_likelihood(config, data, link) ==
        neg_log_likelihood(config, other, link));
  for (Index i = 0; i < 5; ++i)
    CHECK((person_gradient(i, config, data, link) -
           person_gradient(i, config, other, link))
              .norm() == 0.0);
}
