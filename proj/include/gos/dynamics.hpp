#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "gos/matrix.hpp"
#include "gos/rng.hpp"

namespace gos {

enum class Nlsd { Logistic, Roll, Custom };

struct WorldConfig {
  std::size_t m = 20;
  std::size_t n = 20;
  Matrix sigma_v1;  // M x M process noise covariance
  Matrix sigma_v2;  // N x N measurement noise covariance
  Matrix h;         // N x M observation matrix
  Nlsd nlsd = Nlsd::Logistic;
  std::function<Vector(const Vector&)> custom;  // used when nlsd == Custom
  Vector x0;                                    // initial true state
};

struct WorldState {
  std::uint64_t t = 0;
  Vector x;
};

// f(x) = x + 0.05 * x .* (1 - x .* x)
Vector nlsd_logistic(const Vector& x);
// f(x)_m = x_m * x_{(m mod M)+1}
Vector nlsd_roll(const Vector& x);
Vector apply_nlsd(const WorldConfig& cfg, const Vector& x);

// x(t) = f(x(t-1)) + v1,  v1 ~ N(0, sigma_v1)
WorldState step_state(const WorldState& w, const WorldConfig& cfg, RngStream& rng);
// y(t) = H x(t) + v2,  v2 ~ N(0, sigma_v2); the full vector is generated each
// step, the harness reveals only the polled component.
Vector observe(const WorldState& w, const WorldConfig& cfg, RngStream& rng);

// hbar_p = 0.02 * ceil((p-1)/10); p is 1-based, p = 0 has no channel.
double erasure_prob(std::size_t p);

struct TransmitResult {
  bool delivered = false;
  double y = 0.0;
};
// Draws theta ~ U(0,1); delivered iff theta >= hbar_p. The attempt counts as
// a transmission whether or not delivery succeeds.
TransmitResult transmit(std::size_t p, double y_p, RngStream& rng);

}  // namespace gos
