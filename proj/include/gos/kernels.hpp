#pragma once

#include <cstddef>

// Dense double-precision inner-loop kernels. A scalar reference implementation
// is always available; an AVX2+FMA variant is compiled on x86-64 and selected
// at runtime when the CPU supports it. The two variants are equivalence-tested
// against each other (they may differ by rounding at the level of FMA
// contraction and re-association, never more).
namespace gos::kernels {

enum class Isa { Scalar, Avx2 };

// Runtime selection. select() returns false (and leaves the active set
// unchanged) if the requested ISA is not compiled in or not supported by the
// CPU. select_auto() picks the best supported variant, honouring the
// GOS_KERNELS environment variable ("scalar", "avx2", "auto") if set.
bool cpu_has_avx2();
bool select(Isa isa);
void select_auto();
Isa active();
const char* active_name();

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);
// sum_i a[i]
double sum(const double* a, std::size_t n);
// sum_i (a[i] - c)^2
double centered_sumsq(const double* a, double c, std::size_t n);

namespace scalar {
void axpy(double alpha, const double* x, double* y, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double centered_sumsq(const double* a, double c, std::size_t n);
}  // namespace scalar

#if defined(GOS_WITH_AVX2)
namespace avx2 {
void axpy(double alpha, const double* x, double* y, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double centered_sumsq(const double* a, double c, std::size_t n);
}  // namespace avx2
#endif

}  // namespace gos::kernels
