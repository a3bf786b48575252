#include "doctest.h"

#include <cmath>

#include "gos/cqpoints.hpp"
#include "gos/numerics.hpp"
#include "gos/rng.hpp"

using gos::CQPointSet;
using gos::Matrix;
using gos::Vector;

namespace {

void check_moments(const CQPointSet& set, double tol_mean, double tol_cov) {
  const std::size_t m = set.dim;
  CHECK(set.count() == 2 * m * set.order);
  CHECK(gos::sum(set.weights) == doctest::Approx(1.0).epsilon(1e-10));
  Vector mean(m, 0.0);
  Matrix second(m, m);
  for (std::size_t i = 0; i < set.count(); ++i) {
    Vector xi(set.points.row(i), set.points.row(i) + m);
    gos::axpy(set.weights[i], xi, mean);
    rank1_update(second, set.weights[i], xi, xi);
  }
  for (std::size_t j = 0; j < m; ++j) CHECK(std::abs(mean[j]) < tol_mean);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      CHECK(std::abs(second(i, j) - (i == j ? 1.0 : 0.0)) < tol_cov);
}

}  // namespace

TEST_CASE("M=1 n'=1: two unit points with weight one half") {
  const CQPointSet set = gos::generate_cq_points(1, 1);
  REQUIRE(set.count() == 2);
  CHECK(set.points(0, 0) == doctest::Approx(1.0));
  CHECK(set.points(1, 0) == doctest::Approx(-1.0));
  CHECK(set.weights[0] == doctest::Approx(0.5));
  CHECK(set.weights[1] == doctest::Approx(0.5));
}

TEST_CASE("M=2 n'=1: four axis points at sqrt(2), weight 0.25") {
  const CQPointSet set = gos::generate_cq_points(2, 1);
  REQUIRE(set.count() == 4);
  const double r = std::sqrt(2.0);
  CHECK(set.points(0, 0) == doctest::Approx(r));
  CHECK(set.points(0, 1) == doctest::Approx(0.0));
  CHECK(set.points(1, 1) == doctest::Approx(r));
  CHECK(set.points(2, 0) == doctest::Approx(-r));
  CHECK(set.points(3, 1) == doctest::Approx(-r));
  for (double w : set.weights) CHECK(w == doctest::Approx(0.25));
}

TEST_CASE("moment suite across M and n'") {
  for (std::size_t m : {1u, 2u, 5u, 20u})
    for (std::size_t np : {1u, 2u, 3u}) check_moments(gos::generate_cq_points(m, np), 1e-9, 1e-8);
}

TEST_CASE("points come in +/- pairs with equal weights") {
  const CQPointSet set = gos::generate_cq_points(5, 2);
  const std::size_t half = set.count() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    CHECK(set.weights[i] == set.weights[i + half]);
    for (std::size_t j = 0; j < set.dim; ++j)
      CHECK(set.points(i, j) == doctest::Approx(-set.points(i + half, j)));
  }
}

TEST_CASE("index layout follows j' + (j-1)n'") {
  const CQPointSet set = gos::generate_cq_points(3, 2);
  // direction j (1-based) occupies rows (j-1)n' .. j*n'-1, all on axis j-1
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t jp = 0; jp < 2; ++jp) {
      const std::size_t idx = j * 2 + jp;
      for (std::size_t col = 0; col < 3; ++col) {
        if (col == j)
          CHECK(set.points(idx, col) > 0.0);
        else
          CHECK(set.points(idx, col) == 0.0);
      }
    }
}

TEST_CASE("transform property reproduces mean and covariance") {
  gos::RngStream rng(21, 0);
  const std::size_t m = 4;
  Matrix r(m, m);
  for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] = 2.0 * rng.uniform() - 1.0;
  Matrix psi = matmul_nt(r, r);
  for (std::size_t i = 0; i < m; ++i) psi(i, i) += 0.3;
  const Vector center = {0.5, -1.0, 2.0, 0.0};
  const Matrix l = gos::cholesky(psi);

  const CQPointSet set = gos::generate_cq_points(m, 2);
  Vector mean(m, 0.0);
  Matrix cov(m, m);
  for (std::size_t i = 0; i < set.count(); ++i) {
    Vector x = center;
    for (std::size_t row = 0; row < m; ++row)
      for (std::size_t col = 0; col <= row; ++col) x[row] += l(row, col) * set.points(i, col);
    gos::axpy(set.weights[i], x, mean);
    rank1_update(cov, set.weights[i], x, x);
  }
  rank1_update(cov, -1.0, mean, mean);
  for (std::size_t i = 0; i < m; ++i) {
    CHECK(mean[i] == doctest::Approx(center[i]).epsilon(1e-9));
    for (std::size_t j = 0; j < m; ++j)
      CHECK(std::abs(cov(i, j) - psi(i, j)) < 1e-8);
  }
}

TEST_CASE("invalid sizes rejected") {
  CHECK_THROWS(gos::generate_cq_points(0, 1));
  CHECK_THROWS(gos::generate_cq_points(1, 0));
}
