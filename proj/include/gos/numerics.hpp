#pragma once

#include <cstddef>
#include <utility>

#include "gos/matrix.hpp"
#include "gos/rng.hpp"

namespace gos {

// Lower-triangular Cholesky factor of an SPD matrix. The input is symmetrized
// as (m + m^T)/2 first. On a failed pivot, eps*I jitter is added starting at
// 1e-9 and doubling, at most 8 retries; after that a "not positive definite"
// error is thrown.
Matrix cholesky(const Matrix& m);

// Gamma function for x > 0, half-integer arguments included.
double gamma_fn(double x);

// Chebyshev-Laguerre polynomial of degree nprime with parameter iota = M/2-1.
// Returns monic coefficients in ascending powers (length nprime + 1, last
// entry exactly 1).
Vector cl_poly(std::size_t nprime, double iota);

// Horner evaluation of the polynomial and its first derivative at lambda.
std::pair<double, double> poly_eval_deriv(const Vector& coeffs, double lambda);

// Roots of a CL polynomial, ascending. All roots are real, simple and lie in
// (0, 4n' + 2*iota + 2); they are isolated by sign-change bisection on that
// bracket and polished with Newton steps. The companion-matrix route is the
// source formulation; bisection avoids a general eigensolver since the roots
// are bracketed and simple.
Vector cl_poly_roots(const Vector& coeffs);

// mean + L*z with z standard normal and L = cholesky(cov). An exactly-zero
// covariance matrix short-circuits to the mean (zero-L path).
Vector gaussian_sample(const Vector& mean, const Matrix& cov, RngStream& rng);

// Same, with the factor precomputed; draws dim(mean) normals per call.
Vector gaussian_sample_chol(const Vector& mean, const Matrix& chol_lower, RngStream& rng);

}  // namespace gos
