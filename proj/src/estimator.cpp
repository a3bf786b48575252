#include "gos/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "gos/kernels.hpp"
#include "gos/numerics.hpp"

namespace gos {

namespace {

// rows of out are the spread points: L xi_i + center
Matrix spread_points(const Matrix& chol_lower, const Vector& center, const CQPointSet& pts) {
  const std::size_t m = center.size();
  Matrix z(pts.count(), m);
  for (std::size_t i = 0; i < pts.count(); ++i) {
    double* zrow = z.row(i);
    const double* xi = pts.points.row(i);
    for (std::size_t r = 0; r < m; ++r)
      zrow[r] = kernels::dot(chol_lower.row(r), xi, r + 1) + center[r];
  }
  return z;
}

// weighted mean of the rows of z
Vector weighted_mean(const Matrix& z, const Vector& w) {
  Vector mean(z.cols(), 0.0);
  for (std::size_t i = 0; i < z.rows(); ++i)
    kernels::axpy(w[i], z.row(i), mean.data(), mean.size());
  return mean;
}

// sum_i w_i a_i b_i^T - amean bmean^T, rows of a and b paired by index
Matrix weighted_cross(const Matrix& a, const Matrix& b, const Vector& w,
                      const Vector& amean, const Vector& bmean) {
  Matrix c(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    for (std::size_t r = 0; r < a.cols(); ++r)
      kernels::axpy(w[i] * arow[r], b.row(i), c.row(r), b.cols());
  }
  for (std::size_t r = 0; r < a.cols(); ++r)
    kernels::axpy(-amean[r], bmean.data(), c.row(r), b.cols());
  return c;
}

// Solve X * (C C^T) = B for X given the lower factor C, i.e. X = B (C C^T)^-1.
Matrix solve_right_spd(const Matrix& b, const Matrix& chol_lower) {
  const std::size_t n = chol_lower.rows();
  Matrix x = b;  // rows solved in place
  for (std::size_t r = 0; r < b.rows(); ++r) {
    double* row = x.row(r);
    // forward: z C^T = b  =>  C z^T = b^T, z_j = (b_j - sum_{k<j} C_jk z_k)/C_jj
    for (std::size_t j = 0; j < n; ++j)
      row[j] = (row[j] - kernels::dot(chol_lower.row(j), row, j)) / chol_lower(j, j);
    // backward: x C = z  =>  x_j = (z_j - sum_{k>j} C_kj x_k)/C_jj
    for (std::size_t j = n; j-- > 0;) {
      double acc = row[j];
      for (std::size_t k = j + 1; k < n; ++k) acc -= chol_lower(k, j) * row[k];
      row[j] = acc / chol_lower(j, j);
    }
  }
  return x;
}

}  // namespace

FilterState make_filter_state(std::size_t m, double varpi, double varsigma) {
  FilterState fs;
  fs.x_pri.assign(m, 0.0);
  fs.x_pos.assign(m, 0.0);
  fs.psi_pri = Matrix::identity(m);
  fs.psi_pos = Matrix::identity(m);
  fs.holt.varpi = varpi;
  fs.holt.varsigma = varsigma;
  fs.holt.a.assign(m, 0.0);
  fs.holt.b.assign(m, 0.0);
  return fs;
}

Matrix holt_transform(const Matrix& z, const HoltParams& hp) {
  Matrix zstar(z.rows(), z.cols());
  const double w1 = hp.varpi * (1.0 + hp.varsigma);
  const double w2 = (1.0 + hp.varsigma) * (1.0 - hp.varpi);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const double* zin = z.row(i);
    double* zout = zstar.row(i);
    for (std::size_t r = 0; r < z.cols(); ++r)
      zout[r] = w1 * zin[r] + w2 * zin[r] - hp.varsigma * hp.a[r] +
                (1.0 - hp.varsigma) * hp.b[r];
  }
  return zstar;
}

void holt_update(HoltParams& hp, const Vector& x_pos_prev) {
  for (std::size_t r = 0; r < hp.a.size(); ++r) {
    const double a_old = hp.a[r];
    hp.a[r] = hp.varpi * x_pos_prev[r] + (1.0 - hp.varpi) * a_old;
    hp.b[r] = hp.varsigma * (hp.a[r] - a_old) + (1.0 - hp.varsigma) * hp.b[r];
  }
}

void predict(FilterState& fs, const Matrix& sigma_v1, const CQPointSet& pts,
             const Propagator& prop) {
  const std::size_t m = fs.x_pos.size();
  const Matrix sig = cholesky(fs.psi_pos);
  const Matrix z = spread_points(sig, fs.x_pos, pts);

  Matrix zstar;
  if (prop.is_known()) {
    zstar = Matrix(z.rows(), m);
    for (std::size_t i = 0; i < z.rows(); ++i) {
      const Vector out = prop.known(Vector(z.row(i), z.row(i) + m));
      for (std::size_t r = 0; r < m; ++r) zstar(i, r) = out[r];
    }
  } else {
    zstar = holt_transform(z, fs.holt);
    holt_update(fs.holt, fs.x_pos);
  }

  fs.x_pri = weighted_mean(zstar, pts.weights);
  Matrix psi(m, m);
  for (std::size_t i = 0; i < zstar.rows(); ++i) {
    const double* zrow = zstar.row(i);
    for (std::size_t r = 0; r < m; ++r)
      kernels::axpy(pts.weights[i] * zrow[r], zrow, psi.row(r), m);
  }
  rank1_update(psi, -1.0, fs.x_pri, fs.x_pri);
  for (std::size_t i = 0; i < m; ++i)
    kernels::axpy(1.0, sigma_v1.row(i), psi.row(i), m);
  symmetrize(psi);
  fs.psi_pri = psi;
  fs.zstar_prev = zstar;
  fs.zstar_valid = true;
}

UpdateTerms update_terms(const FilterState& fs, const Matrix& sigma_v2, const Matrix& h,
                         const CQPointSet& pts, CrossCov cc) {
  if (!fs.zstar_valid)
    throw std::logic_error("update: prediction has not run this step");
  const std::size_t n = h.rows();
  const Matrix sig = cholesky(fs.psi_pri);
  const Matrix z = spread_points(sig, fs.x_pri, pts);

  // measurement points zeta*_i(t) = H zeta_i(t)
  Matrix zmeas(pts.count(), n);
  for (std::size_t i = 0; i < pts.count(); ++i) {
    const double* zrow = z.row(i);
    for (std::size_t r = 0; r < n; ++r)
      zmeas(i, r) = kernels::dot(h.row(r), zrow, h.cols());
  }

  UpdateTerms t;
  t.yhat = weighted_mean(zmeas, pts.weights);

  Matrix psi_yy = weighted_cross(zmeas, zmeas, pts.weights, t.yhat, t.yhat);
  for (std::size_t i = 0; i < n; ++i)
    kernels::axpy(1.0, sigma_v2.row(i), psi_yy.row(i), n);
  symmetrize(psi_yy);

  const Matrix& left = cc == CrossCov::Paper ? fs.zstar_prev : z;
  const Matrix psi_xy = weighted_cross(left, zmeas, pts.weights, fs.x_pri, t.yhat);

  Matrix cyy;
  try {
    cyy = cholesky(psi_yy);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("update: innovation covariance singular");
  }
  t.gain = solve_right_spd(psi_xy, cyy);

  // Psi_pos = Psi_pri - K Psi_yy K^T, formed as Psi_pri - (K C)(K C)^T
  const Matrix w = matmul(t.gain, cyy);
  Matrix psi_pos = fs.psi_pri;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.rows(); ++j)
      psi_pos(i, j) -= kernels::dot(w.row(i), w.row(j), w.cols());
  symmetrize(psi_pos);
  t.psi_pos = psi_pos;
  return t;
}

void update(FilterState& fs, const Matrix& sigma_v2, const Matrix& h, const CQPointSet& pts,
            double y, std::size_t p, CrossCov cc) {
  if (p < 1 || p > h.rows()) throw std::invalid_argument("update: sensor index out of range");
  const UpdateTerms t = update_terms(fs, sigma_v2, h, pts, cc);
  fs.x_pos = fs.x_pri;
  const double innov = y - t.yhat[p - 1];
  for (std::size_t r = 0; r < fs.x_pos.size(); ++r)
    fs.x_pos[r] += t.gain(r, p - 1) * innov;
  fs.psi_pos = t.psi_pos;
  fs.zstar_valid = false;
}

void filter_step(FilterState& fs, const Matrix& sigma_v1, const Matrix& sigma_v2,
                 const Matrix& h, const CQPointSet& pts, const Propagator& prop,
                 const Delivery& d, CrossCov cc) {
  predict(fs, sigma_v1, pts, prop);
  if (d.delivered && d.p >= 1) {
    update(fs, sigma_v2, h, pts, d.y, d.p, cc);
  } else {
    fs.x_pos = fs.x_pri;
    fs.psi_pos = fs.psi_pri;
    fs.zstar_valid = false;
  }
}

}  // namespace gos
