#include "gos/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "gos/kernels.hpp"

namespace gos {

Vector matvec(const Matrix& a, const Vector& x) {
  if (x.size() != a.cols()) throw std::invalid_argument("matvec: dimension mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    y[i] = kernels::dot(a.row(i), x.data(), a.cols());
  return y;
}

Vector matvec_t(const Matrix& a, const Vector& x) {
  if (x.size() != a.rows()) throw std::invalid_argument("matvec_t: dimension mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    kernels::axpy(x[i], a.row(i), y.data(), a.cols());
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k)
      kernels::axpy(arow[k], b.row(k), c.row(i), b.cols());
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: dimension mismatch");
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      c(i, j) = kernels::dot(a.row(i), b.row(j), a.cols());
  return c;
}

void rank1_update(Matrix& a, double alpha, const Vector& x, const Vector& y) {
  if (x.size() != a.rows() || y.size() != a.cols())
    throw std::invalid_argument("rank1_update: dimension mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i)
    kernels::axpy(alpha * x[i], y.data(), a.row(i), a.cols());
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

void symmetrize(Matrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
}

double trace(const Matrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double frobenius_norm(const Matrix& a) {
  return std::sqrt(kernels::centered_sumsq(a.data(), 0.0, a.size()));
}

bool all_finite(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) return false;
  return true;
}

bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  return kernels::dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, const Vector& x, Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: dimension mismatch");
  kernels::axpy(alpha, x.data(), y.data(), x.size());
}

double sum(const Vector& v) { return kernels::sum(v.data(), v.size()); }

double sample_variance(const Vector& v) {
  if (v.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 values");
  const double mean = kernels::sum(v.data(), v.size()) / static_cast<double>(v.size());
  return kernels::centered_sumsq(v.data(), mean, v.size()) /
         static_cast<double>(v.size() - 1);
}

}  // namespace gos
