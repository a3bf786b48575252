#include "gos/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace gos::kernels {

namespace {

struct Table {
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*centered_sumsq)(const double*, double, std::size_t);
  Isa isa;
};

constexpr Table kScalar{scalar::axpy, scalar::dot, scalar::sum,
                        scalar::centered_sumsq, Isa::Scalar};

#if defined(GOS_WITH_AVX2)
constexpr Table kAvx2{avx2::axpy, avx2::dot, avx2::sum, avx2::centered_sumsq,
                      Isa::Avx2};
#endif

Table g_active = kScalar;  // replaced by the startup auto-selection below

bool apply(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      g_active = kScalar;
      return true;
    case Isa::Avx2:
#if defined(GOS_WITH_AVX2)
      if (cpu_has_avx2()) {
        g_active = kAvx2;
        return true;
      }
#endif
      return false;
  }
  return false;
}

const bool g_auto_selected = [] {
  select_auto();
  return true;
}();

}  // namespace

bool cpu_has_avx2() {
#if defined(GOS_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool select(Isa isa) { return apply(isa); }

void select_auto() {
  if (const char* env = std::getenv("GOS_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) {
      apply(Isa::Scalar);
      return;
    }
    if (std::strcmp(env, "avx2") == 0 && apply(Isa::Avx2)) return;
  }
  if (!apply(Isa::Avx2)) apply(Isa::Scalar);
}

Isa active() { return g_active.isa; }

const char* active_name() {
  return g_active.isa == Isa::Avx2 ? "avx2" : "scalar";
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  g_active.axpy(alpha, x, y, n);
}

double dot(const double* a, const double* b, std::size_t n) {
  return g_active.dot(a, b, n);
}

double sum(const double* a, std::size_t n) { return g_active.sum(a, n); }

double centered_sumsq(const double* a, double c, std::size_t n) {
  return g_active.centered_sumsq(a, c, n);
}

}  // namespace gos::kernels
