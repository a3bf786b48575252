#pragma once

#include <cstddef>
#include <vector>

namespace gos {

using Vector = std::vector<double>;

// Dense row-major matrix. Sized for the filter's M, N in the tens; row
// pointers feed the kernels directly.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diag(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix scaled_identity(std::size_t n, double s) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y = a * x
Vector matvec(const Matrix& a, const Vector& x);
// y = a^T * x
Vector matvec_t(const Matrix& a, const Vector& x);
// c = a * b
Matrix matmul(const Matrix& a, const Matrix& b);
// c = a * b^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// a += alpha * x * y^T
void rank1_update(Matrix& a, double alpha, const Vector& x, const Vector& y);
Matrix transpose(const Matrix& a);
// a = (a + a^T) / 2
void symmetrize(Matrix& a);
double trace(const Matrix& a);
double frobenius_norm(const Matrix& a);
bool all_finite(const Matrix& a);
bool all_finite(const Vector& v);

double dot(const Vector& a, const Vector& b);
// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);
double sum(const Vector& v);
// sample variance with divisor (n - 1)
double sample_variance(const Vector& v);

}  // namespace gos
