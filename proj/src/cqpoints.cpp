#include "gos/cqpoints.hpp"

#include <cmath>
#include <stdexcept>

#include "gos/numerics.hpp"

namespace gos {

namespace {

void check_moments(const CQPointSet& set) {
  const std::size_t m = set.dim;
  const double wsum = sum(set.weights);
  if (std::abs(wsum - 1.0) > 1e-9)
    throw std::logic_error("cq points: weight sum deviates from 1");
  Vector mean(m, 0.0);
  Matrix second(m, m);
  for (std::size_t i = 0; i < set.count(); ++i) {
    Vector xi(set.points.row(i), set.points.row(i) + m);
    axpy(set.weights[i], xi, mean);
    rank1_update(second, set.weights[i], xi, xi);
  }
  for (std::size_t j = 0; j < m; ++j)
    if (std::abs(mean[j]) > 1e-9)
      throw std::logic_error("cq points: weighted mean deviates from 0");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (std::abs(second(i, j) - (i == j ? 1.0 : 0.0)) > 1e-8)
        throw std::logic_error("cq points: weighted covariance deviates from I");
}

}  // namespace

CQPointSet generate_cq_points(std::size_t m, std::size_t nprime) {
  if (m < 1 || nprime < 1)
    throw std::invalid_argument("generate_cq_points: M and n' must be >= 1");

  const double iota = static_cast<double>(m) / 2.0 - 1.0;
  const Vector coeffs = cl_poly(nprime, iota);
  const Vector lambdas = cl_poly_roots(coeffs);

  Vector node_weight(nprime);
  double nfact = 1.0;
  for (std::size_t k = 2; k <= nprime; ++k) nfact *= static_cast<double>(k);
  const double front = nfact / (2.0 * static_cast<double>(m));
  const double gratio =
      gamma_fn(iota + static_cast<double>(nprime) + 1.0) / gamma_fn(static_cast<double>(m) / 2.0);
  for (std::size_t jp = 0; jp < nprime; ++jp) {
    const double lprime = poly_eval_deriv(coeffs, lambdas[jp]).second;
    node_weight[jp] = front * gratio / (lambdas[jp] * lprime * lprime);
  }

  CQPointSet set;
  set.dim = m;
  set.order = nprime;
  set.points = Matrix(2 * m * nprime, m);
  set.weights.assign(2 * m * nprime, 0.0);
  for (std::size_t j = 0; j < 2 * m; ++j) {
    const std::size_t axis = j < m ? j : j - m;
    const double dir = j < m ? 1.0 : -1.0;
    for (std::size_t jp = 0; jp < nprime; ++jp) {
      const std::size_t idx = j * nprime + jp;  // j' + (j-1)n', 0-based
      set.points(idx, axis) = dir * std::sqrt(2.0 * lambdas[jp]);
      set.weights[idx] = node_weight[jp];
    }
  }
  check_moments(set);
  return set;
}

}  // namespace gos
