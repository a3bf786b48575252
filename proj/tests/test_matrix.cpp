#include "doctest.h"

#include "gos/matrix.hpp"

using gos::Matrix;
using gos::Vector;

TEST_CASE("matvec and transpose products") {
  Matrix a(2, 3);
  a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
  a(1, 0) = 4; a(1, 1) = 5; a(1, 2) = 6;
  const Vector x = {1, 1, 1};
  const Vector y = matvec(a, x);
  CHECK(y[0] == doctest::Approx(6));
  CHECK(y[1] == doctest::Approx(15));
  const Vector z = matvec_t(a, {1, 1});
  CHECK(z[0] == doctest::Approx(5));
  CHECK(z[1] == doctest::Approx(7));
  CHECK(z[2] == doctest::Approx(9));
  CHECK_THROWS(matvec(a, {1, 2}));
}

TEST_CASE("matmul against hand product") {
  Matrix a(2, 2), b(2, 2);
  a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
  b(0, 0) = 5; b(0, 1) = 6; b(1, 0) = 7; b(1, 1) = 8;
  const Matrix c = matmul(a, b);
  CHECK(c(0, 0) == doctest::Approx(19));
  CHECK(c(0, 1) == doctest::Approx(22));
  CHECK(c(1, 0) == doctest::Approx(43));
  CHECK(c(1, 1) == doctest::Approx(50));
  const Matrix d = matmul_nt(a, transpose(b));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(d(i, j) == doctest::Approx(c(i, j)));
}

TEST_CASE("rank1 update, trace, symmetrize") {
  Matrix a(2, 2);
  rank1_update(a, 2.0, {1, 2}, {3, 4});
  CHECK(a(0, 0) == doctest::Approx(6));
  CHECK(a(0, 1) == doctest::Approx(8));
  CHECK(a(1, 0) == doctest::Approx(12));
  CHECK(a(1, 1) == doctest::Approx(16));
  CHECK(trace(a) == doctest::Approx(22));
  symmetrize(a);
  CHECK(a(0, 1) == doctest::Approx(10));
  CHECK(a(1, 0) == doctest::Approx(10));
}

TEST_CASE("sample variance textbook value") {
  CHECK(gos::sample_variance({1, 2, 3}) == doctest::Approx(1.0));
  CHECK_THROWS(gos::sample_variance({1}));
}
