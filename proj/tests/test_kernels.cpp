#include "doctest.h"

#include <cmath>
#include <vector>

#include "gos/kernels.hpp"
#include "gos/rng.hpp"

namespace k = gos::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, gos::RngStream& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * rng.uniform() - 1.0;
  return v;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b));
}

}  // namespace

TEST_CASE("scalar kernels match hand results") {
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, -5.0, 6.0};
  CHECK(k::scalar::dot(a, b, 3) == doctest::Approx(12.0));
  CHECK(k::scalar::sum(a, 3) == doctest::Approx(6.0));
  CHECK(k::scalar::centered_sumsq(a, 2.0, 3) == doctest::Approx(2.0));
  double y[] = {1.0, 1.0, 1.0};
  k::scalar::axpy(2.0, a, y, 3);
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(5.0));
  CHECK(y[2] == doctest::Approx(7.0));
}

TEST_CASE("active dispatch agrees with scalar reference") {
  // Equivalence across sizes spanning the vector width and remainders.
  gos::RngStream rng(42, 0);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 7u, 8u, 9u, 15u, 16u, 63u, 256u, 1000u}) {
    const auto a = random_vec(n, rng);
    const auto b = random_vec(n, rng);
    const double tol = 1e-13 * (1.0 + static_cast<double>(n));
    CHECK(close_rel(k::dot(a.data(), b.data(), n), k::scalar::dot(a.data(), b.data(), n), tol));
    CHECK(close_rel(k::sum(a.data(), n), k::scalar::sum(a.data(), n), tol));
    CHECK(close_rel(k::centered_sumsq(a.data(), 0.25, n),
                    k::scalar::centered_sumsq(a.data(), 0.25, n), tol));
    auto y1 = b, y2 = b;
    k::axpy(1.7, a.data(), y1.data(), n);
    k::scalar::axpy(1.7, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close_rel(y1[i], y2[i], 1e-15));
  }
}

#if defined(GOS_WITH_AVX2)
TEST_CASE("avx2 variant agrees with scalar reference when supported") {
  if (!k::cpu_has_avx2()) return;
  gos::RngStream rng(7, 1);
  for (std::size_t n : {1u, 5u, 8u, 12u, 32u, 100u, 1023u}) {
    const auto a = random_vec(n, rng);
    const auto b = random_vec(n, rng);
    const double tol = 1e-13 * (1.0 + static_cast<double>(n));
    CHECK(close_rel(k::avx2::dot(a.data(), b.data(), n),
                    k::scalar::dot(a.data(), b.data(), n), tol));
    CHECK(close_rel(k::avx2::sum(a.data(), n), k::scalar::sum(a.data(), n), tol));
    CHECK(close_rel(k::avx2::centered_sumsq(a.data(), -0.5, n),
                    k::scalar::centered_sumsq(a.data(), -0.5, n), tol));
    auto y1 = b, y2 = b;
    k::avx2::axpy(-2.3, a.data(), y1.data(), n);
    k::scalar::axpy(-2.3, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close_rel(y1[i], y2[i], 1e-15));
  }
}
#endif

TEST_CASE("kernel selection honors requests and reports a name") {
  const k::Isa before = k::active();
  CHECK(k::select(k::Isa::Scalar));
  CHECK(k::active() == k::Isa::Scalar);
  CHECK(std::string(k::active_name()) == "scalar");
  if (k::cpu_has_avx2()) {
    CHECK(k::select(k::Isa::Avx2));
    CHECK(k::active() == k::Isa::Avx2);
    CHECK(std::string(k::active_name()) == "avx2");
  }
  k::select(before);
}
