#include "doctest.h"

#include <cmath>

#include <stdexcept>

#include "gos/dynamics.hpp"
#include "gos/matrix.hpp"

using gos::Matrix;
using gos::Vector;
using gos::WorldConfig;
using gos::WorldState;

namespace {

WorldConfig noiseless(std::size_t m, gos::Nlsd kind) {
  WorldConfig cfg;
  cfg.m = m;
  cfg.n = m;
  cfg.sigma_v1 = Matrix(m, m);
  cfg.sigma_v2 = Matrix(m, m);
  cfg.h = Matrix::identity(m);
  cfg.nlsd = kind;
  cfg.x0 = Vector(m, 0.0);
  return cfg;
}

}  // namespace

TEST_CASE("logistic map fixed points and direct value") {
  CHECK(gos::nlsd_logistic({0.0, 0.0}) == Vector{0.0, 0.0});
  CHECK(gos::nlsd_logistic({1.0, 1.0}) == Vector{1.0, 1.0});
  const Vector y = gos::nlsd_logistic({0.5});
  CHECK(y[0] == doctest::Approx(0.51875));
}

TEST_CASE("roll map definition") {
  const Vector y = gos::nlsd_roll({2.0, 3.0, 5.0});
  CHECK(y[0] == doctest::Approx(6.0));
  CHECK(y[1] == doctest::Approx(15.0));
  CHECK(y[2] == doctest::Approx(10.0));
  CHECK(gos::nlsd_roll({1.0, 1.0, 1.0}) == Vector{1.0, 1.0, 1.0});
  CHECK(gos::nlsd_roll({0.0, 0.0}) == Vector{0.0, 0.0});
}

TEST_CASE("noiseless trajectories sit on fixed points") {
  WorldConfig cfg = noiseless(3, gos::Nlsd::Logistic);
  gos::RngStream rng(1, 0);
  WorldState w{0, Vector(3, 0.0)};
  for (int t = 0; t < 50; ++t) w = gos::step_state(w, cfg, rng);
  CHECK(w.x == Vector(3, 0.0));
  CHECK(w.t == 50);

  cfg.nlsd = gos::Nlsd::Roll;
  WorldState ones{0, Vector(3, 1.0)};
  for (int t = 0; t < 50; ++t) ones = gos::step_state(ones, cfg, rng);
  CHECK(ones.x == Vector(3, 1.0));
}

TEST_CASE("innovation variance matches the process noise") {
  WorldConfig cfg = noiseless(2, gos::Nlsd::Logistic);
  cfg.sigma_v1 = Matrix::scaled_identity(2, 2.5e-3);
  gos::RngStream rng(3, 0);
  WorldState w{0, Vector(2, 0.0)};
  const int steps = 10000;
  Vector acc(2, 0.0), accsq(2, 0.0);
  for (int t = 0; t < steps; ++t) {
    const Vector fx = gos::nlsd_logistic(w.x);
    w = gos::step_state(w, cfg, rng);
    for (int i = 0; i < 2; ++i) {
      const double innov = w.x[i] - fx[i];
      acc[i] += innov;
      accsq[i] += innov * innov;
    }
  }
  for (int i = 0; i < 2; ++i) {
    const double var = accsq[i] / steps - (acc[i] / steps) * (acc[i] / steps);
    CHECK(var == doctest::Approx(2.5e-3).epsilon(0.10));
  }
}

TEST_CASE("observe: noiseless identity and unit noise variance") {
  WorldConfig cfg = noiseless(2, gos::Nlsd::Logistic);
  gos::RngStream rng(4, 0);
  WorldState w{0, {0.7, -0.4}};
  CHECK(gos::observe(w, cfg, rng) == w.x);

  cfg.sigma_v2 = Matrix::identity(2);
  const int draws = 10000;
  Vector acc(2, 0.0), accsq(2, 0.0);
  for (int i = 0; i < draws; ++i) {
    const Vector y = gos::observe(w, cfg, rng);
    for (int j = 0; j < 2; ++j) {
      acc[j] += y[j] - w.x[j];
      accsq[j] += (y[j] - w.x[j]) * (y[j] - w.x[j]);
    }
  }
  for (int j = 0; j < 2; ++j) {
    const double var = accsq[j] / draws - (acc[j] / draws) * (acc[j] / draws);
    CHECK(var == doctest::Approx(1.0).epsilon(0.10));
  }
}

TEST_CASE("observe projects through a rectangular H") {
  WorldConfig cfg;
  cfg.m = 2;
  cfg.n = 1;
  cfg.sigma_v1 = Matrix(2, 2);
  cfg.sigma_v2 = Matrix::identity(1);
  cfg.h = Matrix(1, 2);
  cfg.h(0, 0) = 1.0;
  gos::RngStream rng(5, 0);
  WorldState w{0, {3.0, 7.0}};
  double acc = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) acc += gos::observe(w, cfg, rng)[0];
  CHECK(acc / draws == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("erasure probability ceiling formula") {
  CHECK(gos::erasure_prob(1) == doctest::Approx(0.0));
  CHECK(gos::erasure_prob(2) == doctest::Approx(0.02));
  CHECK(gos::erasure_prob(10) == doctest::Approx(0.02));
  CHECK(gos::erasure_prob(11) == doctest::Approx(0.02));
  CHECK(gos::erasure_prob(12) == doctest::Approx(0.04));
  CHECK(gos::erasure_prob(20) == doctest::Approx(0.04));
  CHECK_THROWS_AS(gos::erasure_prob(0), std::invalid_argument);
}

TEST_CASE("sensor 1 always delivers") {
  gos::RngStream rng(6, 0);
  for (int i = 0; i < 1000; ++i) CHECK(gos::transmit(1, 1.0, rng).delivered);
}

TEST_CASE("erasure frequency converges to hbar") {
  gos::RngStream rng(7, 0);
  const int trials = 100000;
  int erased11 = 0, erased12 = 0;
  for (int i = 0; i < trials; ++i) {
    if (!gos::transmit(11, 0.0, rng).delivered) ++erased11;
    if (!gos::transmit(12, 0.0, rng).delivered) ++erased12;
  }
  CHECK(std::abs(erased11 / double(trials) - 0.02) < 0.003);
  // 3 sigma binomial bound for p = 0.04
  CHECK(std::abs(erased12 / double(trials) - 0.04) <
        3.0 * std::sqrt(0.04 * 0.96 / trials));
}

TEST_CASE("no NaN or Inf over long noisy logistic runs") {
  WorldConfig cfg = noiseless(20, gos::Nlsd::Logistic);
  cfg.sigma_v1 = Matrix::scaled_identity(20, 2.5e-3);
  gos::RngStream rng(8, 0);
  WorldState w{0, Vector(20, 0.0)};
  for (int t = 0; t < 10000; ++t) {
    w = gos::step_state(w, cfg, rng);
    REQUIRE(gos::all_finite(w.x));
  }
}
