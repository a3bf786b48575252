#include "gos/neural.hpp"

#include <cmath>
#include <stdexcept>

#include "gos/kernels.hpp"

namespace gos {

Mlp make_mlp(const std::vector<std::size_t>& sizes, double init_range,
             const std::vector<double>& dropout, RngStream& rng) {
  if (sizes.size() < 2) throw std::invalid_argument("make_mlp: need at least 2 layers");
  const std::size_t hidden = sizes.size() - 2;
  if (!dropout.empty() && dropout.size() != hidden)
    throw std::invalid_argument("make_mlp: dropout list must match hidden layer count");
  Mlp net;
  net.sizes = sizes;
  net.dropout = dropout.empty() ? std::vector<double>(hidden, 0.0) : dropout;
  auto draw = [&rng, init_range] { return (2.0 * rng.uniform() - 1.0) * init_range; };
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    Matrix w(sizes[l + 1], sizes[l]);
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = draw();
    Vector b(sizes[l + 1]);
    for (double& v : b) v = draw();
    net.w.push_back(std::move(w));
    net.b.push_back(std::move(b));
  }
  return net;
}

Vector forward(const Mlp& net, const Vector& input, ForwardMode mode, RngStream* rng,
               ForwardCache* cache) {
  if (input.size() != net.sizes.front())
    throw std::invalid_argument("forward: input dimension mismatch");
  const std::size_t layers = net.w.size();
  if (cache) {
    cache->act.assign(layers + 1, {});
    cache->preact.assign(layers, {});
    cache->mask.assign(layers > 0 ? layers - 1 : 0, {});
    cache->act[0] = input;
  }
  Vector a = input;
  for (std::size_t l = 0; l < layers; ++l) {
    Vector z = net.b[l];
    for (std::size_t i = 0; i < z.size(); ++i)
      z[i] += kernels::dot(net.w[l].row(i), a.data(), a.size());
    if (cache) cache->preact[l] = z;
    if (l + 1 < layers) {
      for (double& v : z) v = v > 0.0 ? v : 0.0;  // ReLU
      const double p = net.dropout[l];
      if (mode == ForwardMode::Train && p > 0.0) {
        if (!rng) throw std::invalid_argument("forward: train-mode dropout needs an rng");
        Vector mask(z.size());
        const double keep_scale = 1.0 / (1.0 - p);
        for (std::size_t i = 0; i < z.size(); ++i) {
          mask[i] = rng->uniform() >= p ? keep_scale : 0.0;
          z[i] *= mask[i];
        }
        if (cache) cache->mask[l] = std::move(mask);
      }
    }
    if (cache) cache->act[l + 1] = z;
    a = std::move(z);
  }
  return a;
}

double Grads::global_norm() const {
  double acc = 0.0;
  for (const Matrix& m : w) acc += kernels::centered_sumsq(m.data(), 0.0, m.size());
  for (const Vector& v : b) acc += kernels::centered_sumsq(v.data(), 0.0, v.size());
  return std::sqrt(acc);
}

void Grads::scale(double s) {
  for (Matrix& m : w)
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] *= s;
  for (Vector& v : b)
    for (double& x : v) x *= s;
}

Grads make_grads(const Mlp& net) {
  Grads g;
  for (const Matrix& m : net.w) g.w.emplace_back(m.rows(), m.cols());
  for (const Vector& v : net.b) g.b.emplace_back(v.size(), 0.0);
  return g;
}

void backward(const Mlp& net, const ForwardCache& cache, const Vector& dloss_dout,
              Grads& accum) {
  const std::size_t layers = net.w.size();
  Vector delta = dloss_dout;
  for (std::size_t l = layers; l-- > 0;) {
    const Vector& in = cache.act[l];
    for (std::size_t i = 0; i < delta.size(); ++i) {
      kernels::axpy(delta[i], in.data(), accum.w[l].row(i), in.size());
      accum.b[l][i] += delta[i];
    }
    if (l == 0) break;
    Vector prev(in.size(), 0.0);
    for (std::size_t i = 0; i < delta.size(); ++i)
      kernels::axpy(delta[i], net.w[l].row(i), prev.data(), prev.size());
    // through dropout mask and ReLU of hidden layer l-1
    if (!cache.mask[l - 1].empty())
      for (std::size_t i = 0; i < prev.size(); ++i) prev[i] *= cache.mask[l - 1][i];
    const Vector& z = cache.preact[l - 1];
    for (std::size_t i = 0; i < prev.size(); ++i)
      if (z[i] <= 0.0) prev[i] = 0.0;
    delta = std::move(prev);
  }
}

void clip_gradients(Grads& g, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("clip_gradients: delta must be > 0");
  const double norm = g.global_norm();
  g.scale(delta / std::max(norm, delta));
}

RmspropState make_rmsprop(const Mlp& net, double lr, double rho, double eps) {
  RmspropState st;
  st.lr = lr;
  st.rho = rho;
  st.eps = eps;
  for (const Matrix& m : net.w) st.vw.emplace_back(m.rows(), m.cols());
  for (const Vector& v : net.b) st.vb.emplace_back(v.size(), 0.0);
  return st;
}

void rmsprop_step(Mlp& net, const Grads& g, RmspropState& st) {
  auto apply = [&st](double* param, double* v, const double* grad, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = st.rho * v[i] + (1.0 - st.rho) * grad[i] * grad[i];
      param[i] -= st.lr * grad[i] / (std::sqrt(v[i]) + st.eps);
    }
  };
  for (std::size_t l = 0; l < net.w.size(); ++l) {
    apply(net.w[l].data(), st.vw[l].data(), g.w[l].data(), net.w[l].size());
    apply(net.b[l].data(), st.vb[l].data(), g.b[l].data(), net.b[l].size());
  }
}

void copy_weights(const Mlp& src, Mlp& dst) {
  if (src.sizes != dst.sizes) throw std::invalid_argument("copy_weights: shape mismatch");
  dst.w = src.w;
  dst.b = src.b;
}

}  // namespace gos
