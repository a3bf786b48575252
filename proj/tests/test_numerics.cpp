#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "gos/matrix.hpp"
#include "gos/numerics.hpp"
#include "gos/rng.hpp"

using gos::Matrix;
using gos::Vector;

namespace {

Matrix random_spd(std::size_t n, gos::RngStream& rng) {
  Matrix r(n, n);
  for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] = 2.0 * rng.uniform() - 1.0;
  Matrix spd = matmul_nt(r, r);
  for (std::size_t i = 0; i < n; ++i) spd(i, i) += 0.5;
  return spd;
}

double reconstruction_error(const Matrix& m, const Matrix& l) {
  const Matrix llt = matmul_nt(l, l);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double d = llt.data()[i] - m.data()[i];
    num += d * d;
    den += m.data()[i] * m.data()[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("cholesky identity and diagonal") {
  const Matrix i2 = Matrix::identity(2);
  CHECK(cholesky(i2) == i2);
  const Matrix d = Matrix::diag({4.0, 9.0});
  const Matrix l = cholesky(d);
  CHECK(l(0, 0) == doctest::Approx(2.0));
  CHECK(l(1, 1) == doctest::Approx(3.0));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == 0.0);
}

TEST_CASE("cholesky [[4,2],[2,3]]") {
  Matrix m(2, 2);
  m(0, 0) = 4; m(0, 1) = 2; m(1, 0) = 2; m(1, 1) = 3;
  const Matrix l = cholesky(m);
  CHECK(l(0, 0) == doctest::Approx(2.0));
  CHECK(l(1, 0) == doctest::Approx(1.0));
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(reconstruction_error(m, l) < 1e-8);
}

TEST_CASE("cholesky reconstruction property on random SPD matrices") {
  gos::RngStream rng(11, 0);
  for (std::size_t n : {1u, 2u, 5u, 20u}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Matrix m = random_spd(n, rng);
      CHECK(reconstruction_error(m, cholesky(m)) < 1e-8);
    }
  }
}

TEST_CASE("cholesky jitter path and hard failure") {
  // singular: rank-1, jitter must rescue it
  Matrix s(2, 2);
  s(0, 0) = 1; s(0, 1) = 1; s(1, 0) = 1; s(1, 1) = 1;
  CHECK_NOTHROW(cholesky(s));
  // the zero matrix is rescued too (first jitter)
  CHECK_NOTHROW(cholesky(Matrix(3, 3)));
  // clearly indefinite: beyond the jitter budget
  Matrix bad = Matrix::diag({1.0, -0.5});
  CHECK_THROWS_WITH_AS(cholesky(bad), "cholesky: not positive definite", std::runtime_error);
  CHECK_THROWS(cholesky(Matrix(2, 3)));
}

TEST_CASE("gamma function values and recurrence") {
  CHECK(gos::gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gos::gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(gos::gamma_fn(11.0) == doctest::Approx(3628800.0).epsilon(1e-12));
  for (double x = 0.5; x <= 20.5; x += 1.0) {
    CHECK(gos::gamma_fn(x + 1.0) ==
          doctest::Approx(x * gos::gamma_fn(x)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(gos::gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gos::gamma_fn(-1.5), std::domain_error);
}

TEST_CASE("CL polynomial coefficients") {
  // n'=1, iota=0 (M=2): lambda - 1
  const Vector c1 = gos::cl_poly(1, 0.0);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0] == doctest::Approx(-1.0));
  CHECK(c1[1] == 1.0);
  // n'=2, iota=-0.5 (M=1): lambda^2 - 3 lambda + 0.75
  const Vector c2 = gos::cl_poly(2, -0.5);
  REQUIRE(c2.size() == 3);
  CHECK(c2[0] == doctest::Approx(0.75));
  CHECK(c2[1] == doctest::Approx(-3.0));
  CHECK(c2[2] == 1.0);
  // n'=2, iota=9 (M=20): lambda^2 - 22 lambda + 110
  const Vector c3 = gos::cl_poly(2, 9.0);
  CHECK(c3[0] == doctest::Approx(110.0));
  CHECK(c3[1] == doctest::Approx(-22.0));
  CHECK(c3[2] == 1.0);
  // monic for a spread of orders
  for (std::size_t np = 1; np <= 5; ++np) CHECK(gos::cl_poly(np, 1.5).back() == 1.0);
}

TEST_CASE("polynomial evaluation and derivative") {
  const Vector quad = {0.75, -3.0, 1.0};
  auto [p0, d0] = gos::poly_eval_deriv(quad, 0.0);
  CHECK(p0 == doctest::Approx(0.75));
  CHECK(d0 == doctest::Approx(-3.0));
  const Vector lin = {-1.0, 1.0};
  auto [p1, d1] = gos::poly_eval_deriv(lin, 1.0);
  CHECK(p1 == doctest::Approx(0.0));
  CHECK(d1 == doctest::Approx(1.0));
  const double root = (3.0 + std::sqrt(6.0)) / 2.0;
  auto [p2, d2] = gos::poly_eval_deriv(quad, root);
  CHECK(std::abs(p2) < 1e-12);
  CHECK(d2 == doctest::Approx(2.0 * root - 3.0));
}

TEST_CASE("CL polynomial roots") {
  const Vector r1 = gos::cl_poly_roots({-1.0, 1.0});
  REQUIRE(r1.size() == 1);
  CHECK(r1[0] == doctest::Approx(1.0));

  const Vector r2 = gos::cl_poly_roots({0.75, -3.0, 1.0});
  REQUIRE(r2.size() == 2);
  CHECK(r2[0] == doctest::Approx((3.0 - std::sqrt(6.0)) / 2.0).epsilon(1e-10));
  CHECK(r2[1] == doctest::Approx((3.0 + std::sqrt(6.0)) / 2.0).epsilon(1e-10));

  const Vector r3 = gos::cl_poly_roots({110.0, -22.0, 1.0});
  REQUIRE(r3.size() == 2);
  CHECK(r3[0] == doctest::Approx(11.0 - std::sqrt(11.0)).epsilon(1e-10));
  CHECK(r3[1] == doctest::Approx(11.0 + std::sqrt(11.0)).epsilon(1e-10));
}

TEST_CASE("all CL roots positive with tiny residual") {
  for (std::size_t m : {1u, 2u, 5u, 20u}) {
    for (std::size_t np : {1u, 2u, 3u}) {
      const double iota = static_cast<double>(m) / 2.0 - 1.0;
      const Vector coeffs = gos::cl_poly(np, iota);
      const Vector roots = gos::cl_poly_roots(coeffs);
      REQUIRE(roots.size() == np);
      for (double r : roots) {
        CHECK(r > 0.0);
        CHECK(std::abs(gos::poly_eval_deriv(coeffs, r).first) < 1e-10);
      }
    }
  }
}

TEST_CASE("gaussian sampling determinism and zero covariance") {
  const Vector mean = {1.0, -2.0, 3.0};
  gos::RngStream rng(9, 3);
  CHECK(gos::gaussian_sample(mean, Matrix(3, 3), rng) == mean);

  gos::RngStream a(9, 3), b(9, 3);
  const Matrix cov = Matrix::diag({1.0, 2.0, 3.0});
  CHECK(gos::gaussian_sample(mean, cov, a) == gos::gaussian_sample(mean, cov, b));
}

TEST_CASE("gaussian sample mean obeys the CLT bound") {
  const std::size_t n = 100000;
  const Vector mean = {0.0, 0.0, 0.0};
  const Matrix cov = Matrix::identity(3);
  const Matrix l = cholesky(cov);
  gos::RngStream rng(10, 0);
  Vector acc(3, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector s = gos::gaussian_sample_chol(mean, l, rng);
    for (int j = 0; j < 3; ++j) acc[j] += s[j];
  }
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(acc[j] / n) < 4.0 / std::sqrt(static_cast<double>(n)));
}
