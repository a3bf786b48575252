#pragma once

#include <cstddef>
#include <functional>

#include "gos/cqpoints.hpp"
#include "gos/matrix.hpp"

namespace gos {

// Holt double-exponential smoothing state: level a, trend b, and the two
// smoothing constants. Stands in for the unknown state dynamics.
struct HoltParams {
  double varpi = 0.77;
  double varsigma = 0.02;
  Vector a;  // level, length M
  Vector b;  // trend, length M
};

// How the prediction step propagates sampling points: Holt smoothing
// (default, dynamics unknown) or a known dynamics function (oracle mode for
// tests; Holt parameters are left untouched).
struct Propagator {
  std::function<Vector(const Vector&)> known;
  bool is_known() const { return static_cast<bool>(known); }
};

// Which points pair with the measurement points in the cross-covariance:
// Paper uses the prior-propagated Z*(t-1) verbatim; Standard uses the
// current prior points Z(t), the conventional sigma-point pairing.
enum class CrossCov { Paper, Standard };

struct FilterState {
  Vector x_pri, x_pos;     // prior / posterior mean, length M
  Matrix psi_pri, psi_pos; // prior / posterior covariance, M x M
  HoltParams holt;
  Matrix zstar_prev;       // 2Mn' x M propagated points, kept for the update
  bool zstar_valid = false;
};

// x_pos = 0, Psi_pos = I, a = b = 0.
FilterState make_filter_state(std::size_t m, double varpi, double varsigma);

// zeta* = varpi(1+varsigma) zeta + (1+varsigma)(1-varpi) zeta
//         - varsigma a + (1-varsigma) b, per point (rows of z).
// The first two terms sum algebraically to (1+varsigma) zeta; implemented as
// written.
Matrix holt_transform(const Matrix& z, const HoltParams& hp);

// a <- varpi x_pos_prev + (1-varpi) a;  b <- varsigma (a_new - a_old) + (1-varsigma) b.
// Called exactly once per time step, from the prediction step.
void holt_update(HoltParams& hp, const Vector& x_pos_prev);

// Prediction step: Cholesky of Psi_pos, spread points, propagate, then
// x_pri = sum w zeta*, Psi_pri = sum w zeta* zeta*^T - x_pri x_pri^T + sigma_v1
// (symmetrized). Stores Z*(t-1) for the update step.
void predict(FilterState& fs, const Matrix& sigma_v1, const CQPointSet& pts,
             const Propagator& prop);

// Measurement-independent pieces of the update step, reusable across
// hypothetical measurements (the gain and posterior covariance do not depend
// on the received value).
struct UpdateTerms {
  Vector yhat;     // predicted sensor measurements, length N
  Matrix gain;     // K, M x N
  Matrix psi_pos;  // Psi_pri - K Psi_yy K^T, symmetrized
};

UpdateTerms update_terms(const FilterState& fs, const Matrix& sigma_v2, const Matrix& h,
                         const CQPointSet& pts, CrossCov cc);

// Update step with the scalar measurement y of sensor p (1-based):
// x_pos = x_pri + K 1_p (y - yhat_p), Psi_pos from the terms.
void update(FilterState& fs, const Matrix& sigma_v2, const Matrix& h, const CQPointSet& pts,
            double y, std::size_t p, CrossCov cc);

struct Delivery {
  bool delivered = false;
  double y = 0.0;
  std::size_t p = 0;  // 1-based sensor index; 0 = no poll
};

// One full filter step: predict always; update iff the delivery carries a
// measurement, otherwise posterior := prior.
void filter_step(FilterState& fs, const Matrix& sigma_v1, const Matrix& sigma_v2,
                 const Matrix& h, const CQPointSet& pts, const Propagator& prop,
                 const Delivery& d, CrossCov cc);

}  // namespace gos
