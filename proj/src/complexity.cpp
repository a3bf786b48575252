#include "gos/complexity.hpp"

#include <stdexcept>

namespace gos {

namespace {

using I128 = __int128;

void require_positive(std::initializer_list<std::int64_t> args) {
  for (std::int64_t a : args)
    if (a < 1) throw std::invalid_argument("complexity: arguments must be positive");
}

// round(num/den) half-up, num >= 0, den > 0
std::int64_t round_div(I128 num, I128 den) {
  return static_cast<std::int64_t>((2 * num + den) / (2 * den));
}

}  // namespace

ComplexityBounds montecarlo_bounds(std::int64_t n, std::int64_t m, std::int64_t c,
                                   std::int64_t s, std::int64_t nprime) {
  require_positive({n, m, c, s, nprime});
  const I128 m3 = I128(m) * m * m;
  const I128 m2 = I128(m) * m;
  // everything scaled by 3 to keep the M^3/3 terms exact
  const I128 lb3 = m3 + 3 * (8 * m3 * nprime + 22 * m2 * nprime + 4 * m2 + 12 * m * nprime +
                             I128(n) * s * (4 + m) + n);
  const I128 ub3 =
      lb3 + I128(n) * s * (22 * m3 + 3 * (16 * m3 * nprime + 10 * m2 * nprime + 8 * m2 + m + 3));
  return {round_div(lb3, 3), round_div(ub3, 3)};
}

ComplexityBounds proposed_bounds(std::int64_t n, std::int64_t c) {
  require_positive({n, c});
  const std::int64_t lb = (30 * n + 31) * (8 * c + 9 * n + 21) + 3;
  return {lb, lb + n};
}

ComplexityBounds benchmark_bounds(std::int64_t n, std::int64_t m, std::int64_t c) {
  require_positive({n, m, c});
  const I128 m3 = I128(m) * m * m;
  const I128 m2 = I128(m) * m;
  // scaled by 2 for the 3.5M term
  const I128 inner2 =
      10 * m3 + 20 * m2 + 10 * I128(m) * c + 7 * I128(m) + 4 * I128(n) * m + 4 * I128(n) * n + 4 * n;
  const I128 lb2 = I128(30 * n + 1) * inner2 + 6;
  return {round_div(lb2, 2), round_div(lb2, 2) + n - 1};
}

}  // namespace gos
