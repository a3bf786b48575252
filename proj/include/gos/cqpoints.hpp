#pragma once

#include <cstddef>

#include "gos/matrix.hpp"

namespace gos {

// The 2*M*n' cubature-quadrature points and weights used by every filter
// step. Immutable after construction; freely shareable across threads.
struct CQPointSet {
  std::size_t dim = 0;    // M
  std::size_t order = 0;  // n'
  Matrix points;          // 2*M*n' x M, row i = xi_i
  Vector weights;         // 2*M*n'

  std::size_t count() const { return weights.size(); }
};

// Cubature directions are +1_j for j = 1..M then -1_j; radial nodes are the
// CL-polynomial roots; point (j', j) lands at index j' + (j-1)n' with weight
//   w = (n'!/2M) * Gamma(iota+n'+1) / (Gamma(M/2) * lambda_j') / L'(lambda_j')^2.
// Construction asserts the moment identities (sum w = 1, sum w*xi = 0,
// sum w*xi*xi^T = I) and fails loudly on violation rather than renormalizing.
CQPointSet generate_cq_points(std::size_t m, std::size_t nprime);

}  // namespace gos
