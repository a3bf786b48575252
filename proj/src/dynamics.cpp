#include "gos/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "gos/numerics.hpp"

namespace gos {

Vector nlsd_logistic(const Vector& x) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = x[i] + 0.05 * x[i] * (1.0 - x[i] * x[i]);
  return out;
}

Vector nlsd_roll(const Vector& x) {
  const std::size_t m = x.size();
  Vector out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = x[i] * x[(i + 1) % m];
  return out;
}

Vector apply_nlsd(const WorldConfig& cfg, const Vector& x) {
  switch (cfg.nlsd) {
    case Nlsd::Logistic:
      return nlsd_logistic(x);
    case Nlsd::Roll:
      return nlsd_roll(x);
    case Nlsd::Custom:
      if (!cfg.custom) throw std::logic_error("apply_nlsd: custom dynamics not set");
      return cfg.custom(x);
  }
  throw std::logic_error("apply_nlsd: unknown selector");
}

WorldState step_state(const WorldState& w, const WorldConfig& cfg, RngStream& rng) {
  WorldState next;
  next.t = w.t + 1;
  next.x = gaussian_sample(apply_nlsd(cfg, w.x), cfg.sigma_v1, rng);
  return next;
}

Vector observe(const WorldState& w, const WorldConfig& cfg, RngStream& rng) {
  return gaussian_sample(matvec(cfg.h, w.x), cfg.sigma_v2, rng);
}

double erasure_prob(std::size_t p) {
  if (p == 0)
    throw std::invalid_argument("erasure_prob: no transmission has no erasure probability");
  return 0.02 * std::ceil(static_cast<double>(p - 1) / 10.0);
}

TransmitResult transmit(std::size_t p, double y_p, RngStream& rng) {
  const double theta = rng.uniform();
  TransmitResult r;
  r.delivered = theta >= erasure_prob(p);
  r.y = y_p;
  return r;
}

}  // namespace gos
