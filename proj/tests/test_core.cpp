#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mdu/link.hpp"
#include "mdu/types.hpp"
#include "test_util.hpp"

using namespace mdu;
using namespace mdu::testing;

TEST_CASE("link_eval closed-form values and monotone limit") {
  LinkFunction link(0.1);
  CHECK(link.eval(0.0) == doctest::Approx(0.950042).epsilon(1e-5));
  CHECK(link.eval(1.0) == doctest::Approx(0.499480).epsilon(1e-5));
  // direct closed form at a few points
  for (double x : {0.0, 0.3, 1.0, 2.5, 9.0})
    CHECK(link.eval(x) == doctest::Approx(2.0 / (1.0 + std::exp(x + 0.1))).epsilon(1e-14));
  CHECK(link.eval(745.0) < 1e-300);
  CHECK(link.eval(745.0) >= 0.0);
  // strictly decreasing
  double prev = link.eval(0.0);
  for (double x = 0.25; x <= 9.0; x += 0.25) {
    double cur = link.eval(x);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("link_eval stays inside (0,1) and rejects negative input") {
  for (double delta : {0.05, 0.1, 0.2, 1.0, 5.0}) {
    LinkFunction link(delta);
    for (double x = 0.0; x <= 9.0; x += 0.01) {
      double f = link.eval(x);
      CHECK(f > 0.0);
      CHECK(f < 1.0);
    }
  }
  LinkFunction link(0.1);
  CHECK_THROWS_AS((void)link.eval(-1e-9), std::domain_error);
  CHECK_THROWS_AS((void)link.deriv(-0.5), std::domain_error);
}

TEST_CASE("link_deriv matches closed form and finite differences") {
  LinkFunction link(0.1);
  CHECK(link.deriv(0.0) == doctest::Approx(-0.498752).epsilon(1e-5));
  CHECK(link.deriv(1.0) == doctest::Approx(-0.374742).epsilon(1e-5));

  const double h = 1e-6;
  for (double x = h; x <= 9.0; x += 0.045) {
    double fd = (link.eval(x + h) - link.eval(x - h)) / (2.0 * h);
    CHECK(link.deriv(x) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(link.deriv(x) < 0.0);
  }
}

TEST_CASE("link log forms agree with naive evaluation") {
  LinkFunction link(0.1);
  for (double x : {0.0, 0.1, 1.0, 4.0, 9.0, 40.0}) {
    CHECK(link.log_eval(x) == doctest::Approx(std::log(link.eval(x))).epsilon(1e-12));
    CHECK(link.log_one_minus(x) ==
          doctest::Approx(std::log1p(-link.eval(x))).epsilon(1e-12));
    CHECK(link.one_minus(x) == doctest::Approx(1.0 - link.eval(x)).epsilon(1e-12));
  }
  // deep tail: naive log(f) would underflow to log(0); the stable form cannot
  CHECK(std::isfinite(link.log_eval(800.0)));
  CHECK(link.log_eval(800.0) == doctest::Approx(std::log(2.0) - 800.1).epsilon(1e-12));
}

TEST_CASE("LinkFunction requires positive delta") {
  CHECK_THROWS_AS(LinkFunction(0.0), std::invalid_argument);
  CHECK_THROWS_AS(LinkFunction(-0.1), std::invalid_argument);
}

TEST_CASE("partial_distance_matrix simple examples") {
  Matrix persons(1, 2), items(1, 2);
  persons << 0.0, 0.0;
  items << 3.0, 4.0;
  Configuration config(persons, items, 5.0);
  Matrix d = partial_distance_matrix(config);
  CHECK(d.rows() == 1);
  CHECK(d.cols() == 1);
  CHECK(d(0, 0) == doctest::Approx(25.0).epsilon(1e-14));

  Matrix same(1, 2);
  same << 1.0, -0.5;
  Configuration coincident(same, same, 2.0);
  CHECK(partial_distance_matrix(coincident)(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("partial_distance_matrix matches per-pair loop oracle") {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Configuration config = random_test_config(13, 7, 3, 1.5, rng);
    Matrix d = partial_distance_matrix(config);
    for (Index i = 0; i < 13; ++i)
      for (Index j = 0; j < 7; ++j) {
        double want = (config.persons.row(i) - config.items.row(j)).squaredNorm();
        CHECK(d(i, j) == doctest::Approx(want).epsilon(1e-12));
        CHECK(d(i, j) >= 0.0);
        CHECK(d(i, j) <= 4.0 * 1.5 * 1.5 + 1e-9);
      }
  }
}

TEST_CASE("partial_distance_matrix invariant under joint isometry") {
  Rng rng = make_rng(12);
  Configuration config = random_test_config(20, 9, 2, 1.0, rng);
  Matrix d0 = partial_distance_matrix(config);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix q = random_orthogonal(2, rng);
    Vector t(2);
    t << 3.0 * uniform01(rng) - 1.5, 3.0 * uniform01(rng) - 1.5;
    Matrix persons = config.persons * q.transpose();
    Matrix items = config.items * q.transpose();
    persons.rowwise() += t.transpose();
    items.rowwise() += t.transpose();
    Configuration moved(persons, items, config.bound + t.norm() + 1e-6);
    Matrix d1 = partial_distance_matrix(moved);
    CHECK((d1 - d0).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("regularity_constants against an independent fine grid") {
  LinkFunction link(0.1);
  const double m = 1.5;
  RegularityConstants got = regularity_constants(link, m);
  CHECK(got.alpha == doctest::Approx(4.0 * m * m));

  // independent oracle: brute-force maxima of both ratios on a finer grid
  const double hi = 4.0 * m * m;
  double steep = 0.0, flat = 0.0;
  const int cells = 200000;
  for (int i = 0; i <= cells; ++i) {
    double x = hi * static_cast<double>(i) / cells;
    double f = link.eval(x), fp = link.deriv(x);
    steep = std::max(steep, std::abs(fp) / (f * (1.0 - f)));
    flat = std::max(flat, f * (1.0 - f) / (fp * fp));
  }
  CHECK(got.l_alpha == doctest::Approx(steep).epsilon(1e-6));
  CHECK(got.beta_alpha == doctest::Approx(flat).epsilon(1e-6));

  // stated magnitudes: steepness peaks near x=0, flatness near x=4M^2
  CHECK(got.l_alpha == doctest::Approx(10.51).epsilon(2e-3));
  double inv_f_hi = 1.0 / link.eval(hi);
  CHECK(got.beta_alpha > 0.5 * inv_f_hi);
  CHECK(got.beta_alpha < 2.0 * inv_f_hi);
  CHECK(std::isfinite(got.l_alpha));
  CHECK(std::isfinite(got.beta_alpha));
}

TEST_CASE("regularity_constants monotone in M and validated") {
  LinkFunction link(0.1);
  double prev_l = 0.0, prev_b = 0.0;
  for (double m : {0.5, 1.0, 1.5, 2.5}) {
    RegularityConstants c = regularity_constants(link, m);
    CHECK(c.l_alpha >= prev_l);
    CHECK(c.beta_alpha >= prev_b);
    prev_l = c.l_alpha;
    prev_b = c.beta_alpha;
  }
  CHECK_THROWS_AS(regularity_constants(link, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(regularity_constants(link, -1.0), std::invalid_argument);
}

TEST_CASE("ResponseMatrix validation and observed_count") {
  BinaryMatrix values(2, 3), mask(2, 3);
  values << 1, 0, 1, 0, 1, 1;
  mask << 1, 1, 0, 1, 0, 1;
  ResponseMatrix data(values, mask);
  CHECK(data.n_persons() == 2);
  CHECK(data.n_items() == 3);
  CHECK(data.observed_count() == 4);
  CHECK_FALSE(data.fully_observed());

  ResponseMatrix full = ResponseMatrix::complete(values);
  CHECK(full.observed_count() == 6);
  CHECK(full.fully_observed());

  BinaryMatrix bad = values;
  bad(0, 0) = 2;
  CHECK_THROWS_AS(ResponseMatrix::complete(bad), std::invalid_argument);
  BinaryMatrix short_mask(1, 3);
  short_mask.setOnes();
  CHECK_THROWS_AS(ResponseMatrix(values, short_mask), std::invalid_argument);
  CHECK_THROWS_AS(ResponseMatrix(BinaryMatrix(0, 3), BinaryMatrix(0, 3)),
                  std::invalid_argument);
}

TEST_CASE("Configuration validates the ball constraint") {
  Matrix persons(2, 2), items(1, 2);
  persons << 0.3, 0.4, -1.0, 0.0;
  items << 0.0, 1.0;
  CHECK_NOTHROW(Configuration(persons, items, 1.0));
  // norm 1 row passes exactly at the bound, fails below it
  CHECK_THROWS_AS(Configuration(persons, items, 0.9), std::invalid_argument);
  // within absolute tolerance 1e-9 of the bound still passes
  Matrix hairline(1, 2);
  hairline << 1.0 + 5e-10, 0.0;
  CHECK_NOTHROW(Configuration(hairline, items, 1.0));
  CHECK_THROWS_AS(Configuration(Matrix(0, 2), items, 1.0), std::invalid_argument);
}
