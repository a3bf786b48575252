#pragma once

#include <cstdint>

namespace gos {

// Per-decision arithmetic-operation bounds for the three schedulers,
// evaluated exactly in scaled integers and rounded half-up for display.
struct ComplexityBounds {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
};

// lb = M^3/3 + 8M^3n' + 22M^2n' + 4M^2 + 12Mn' + NS(4+M) + N
// ub = lb + NS(22M^3/3 + 16M^3n' + 10M^2n' + 8M^2 + M + 3)
// C does not appear; the parameter is kept for the uniform interface.
ComplexityBounds montecarlo_bounds(std::int64_t n, std::int64_t m, std::int64_t c,
                                   std::int64_t s, std::int64_t nprime);

// lb = (30N+31)(8C+9N+21) + 3;  ub = lb + N
ComplexityBounds proposed_bounds(std::int64_t n, std::int64_t c);

// lb = (30N+1)(5M^3 + 10M^2 + 5MC + 3.5M + 2NM + 2N^2 + 2N) + 3;  ub = lb + N - 1
ComplexityBounds benchmark_bounds(std::int64_t n, std::int64_t m, std::int64_t c);

// Asymptotically (documentation only; the numeric bounds above are the
// implemented contract):
//   Monte Carlo:  lb O(8M^3n' + NSM), ub O(NSM^3n')
//   proposed:     O(9N^2 + 8CN)
//   benchmark:    O(5M^3N + 5MCN + 2MN^2 + 2N^3)

}  // namespace gos
