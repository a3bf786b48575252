#include "gos/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gos/kernels.hpp"

namespace gos {

namespace {

// Plain lower Cholesky; returns false on a non-positive pivot.
bool try_cholesky(const Matrix& a, Matrix& l) {
  const std::size_t n = a.rows();
  l = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j) - kernels::dot(l.row(j), l.row(j), j);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i)
      l(i, j) = (a(i, j) - kernels::dot(l.row(i), l.row(j), j)) / ljj;
  }
  return true;
}

}  // namespace

Matrix cholesky(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("cholesky: matrix not square");
  Matrix a = m;
  symmetrize(a);
  Matrix l;
  if (try_cholesky(a, l)) return l;
  double eps = 1e-9;
  for (int retry = 0; retry < 8; ++retry, eps *= 2.0) {
    Matrix jittered = a;
    for (std::size_t i = 0; i < a.rows(); ++i) jittered(i, i) += eps;
    if (try_cholesky(jittered, l)) return l;
  }
  throw std::runtime_error("cholesky: not positive definite");
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: domain error, requires x > 0");
  return std::tgamma(x);
}

Vector cl_poly(std::size_t nprime, double iota) {
  if (nprime < 1) throw std::invalid_argument("cl_poly: nprime must be >= 1");
  const double np = static_cast<double>(nprime);
  Vector coeffs(nprime + 1, 0.0);
  // sum_k C(n',k) (-1)^k (n'+iota)! / (n'+iota-k)! * lambda^(n'-k),
  // factorials via the gamma function (half-integer iota supported).
  const double top = gamma_fn(np + iota + 1.0);
  double binom = 1.0;  // C(n', k)
  for (std::size_t k = 0; k <= nprime; ++k) {
    const double fall = top / gamma_fn(np + iota + 1.0 - static_cast<double>(k));
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    coeffs[nprime - k] = binom * sign * fall;
    binom *= (np - static_cast<double>(k)) / (static_cast<double>(k) + 1.0);
  }
  coeffs[nprime] = 1.0;  // monic by construction
  return coeffs;
}

std::pair<double, double> poly_eval_deriv(const Vector& coeffs, double lambda) {
  double p = 0.0, dp = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    dp = dp * lambda + p;
    p = p * lambda + coeffs[i];
  }
  return {p, dp};
}

Vector cl_poly_roots(const Vector& coeffs) {
  if (coeffs.size() < 2) throw std::invalid_argument("cl_poly_roots: not a polynomial");
  const std::size_t nprime = coeffs.size() - 1;
  // Bracket (0, 4n' + 2*iota + 2); recover iota from the lambda^(n'-1)
  // coefficient, which equals -n'(n' + iota).
  const double np = static_cast<double>(nprime);
  const double iota = -coeffs[nprime - 1] / np - np;
  const double hi = 4.0 * np + 2.0 * iota + 2.0;

  auto eval = [&coeffs](double x) { return poly_eval_deriv(coeffs, x).first; };

  Vector roots;
  for (std::size_t ksub = 256 * nprime; roots.size() < nprime; ksub *= 4) {
    roots.clear();
    double x0 = 0.0;
    double f0 = eval(x0);
    for (std::size_t k = 1; k <= ksub && roots.size() < nprime; ++k) {
      const double x1 = hi * static_cast<double>(k) / static_cast<double>(ksub);
      const double f1 = eval(x1);
      if (f1 == 0.0) {
        roots.push_back(x1);
      } else if (f0 * f1 < 0.0) {
        double a = x0, b = x1, fa = f0;
        for (int it = 0; it < 200 && b - a > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (a + b);
          const double fm = eval(mid);
          if (fm == 0.0) {
            a = b = mid;
            break;
          }
          if (fa * fm < 0.0) {
            b = mid;
          } else {
            a = mid;
            fa = fm;
          }
        }
        double r = 0.5 * (a + b);
        for (int it = 0; it < 8; ++it) {  // Newton polish
          const auto [f, df] = poly_eval_deriv(coeffs, r);
          if (df == 0.0) break;
          const double step = f / df;
          r -= step;
          if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(r))) break;
        }
        roots.push_back(r);
      }
      x0 = x1;
      f0 = f1;
    }
    if (ksub > 65536 * nprime) break;
  }
  if (roots.size() != nprime)
    throw std::runtime_error("cl_poly_roots: root isolation failure");
  std::sort(roots.begin(), roots.end());
  return roots;
}

Vector gaussian_sample(const Vector& mean, const Matrix& cov, RngStream& rng) {
  bool all_zero = true;
  for (std::size_t i = 0; i < cov.size() && all_zero; ++i)
    all_zero = cov.data()[i] == 0.0;
  if (all_zero) return mean;
  return gaussian_sample_chol(mean, cholesky(cov), rng);
}

Vector gaussian_sample_chol(const Vector& mean, const Matrix& chol_lower, RngStream& rng) {
  const std::size_t n = mean.size();
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = rng.normal();
  Vector out = mean;
  for (std::size_t i = 0; i < n; ++i)
    out[i] += kernels::dot(chol_lower.row(i), z.data(), i + 1);
  return out;
}

}  // namespace gos
