#pragma once

#include <cstddef>
#include <vector>

#include "gos/matrix.hpp"
#include "gos/rng.hpp"

namespace gos {

// Minimal MLP: affine + ReLU hidden layers with optional inverted dropout,
// linear output layer. Plain value semantics throughout.
struct Mlp {
  std::vector<std::size_t> sizes;   // l_1 .. l_{|l|}
  std::vector<Matrix> w;            // w[l]: sizes[l+1] x sizes[l]
  std::vector<Vector> b;            // b[l]: sizes[l+1]
  std::vector<double> dropout;      // per hidden layer, 0 = none
};

// Weights and biases uniform in [-range, range], seeded.
Mlp make_mlp(const std::vector<std::size_t>& sizes, double init_range,
             const std::vector<double>& dropout, RngStream& rng);

enum class ForwardMode { Train, Eval };

struct ForwardCache {
  std::vector<Vector> act;    // act[0] = input, act[l+1] = output of layer l
  std::vector<Vector> preact; // pre-activation per layer
  std::vector<Vector> mask;   // dropout mask (already 1/(1-p) scaled) per hidden layer
};

// Train mode draws dropout masks from rng (layers with p > 0 only) and scales
// by 1/(1-p) so eval mode needs no rescaling.
Vector forward(const Mlp& net, const Vector& input, ForwardMode mode, RngStream* rng,
               ForwardCache* cache);

struct Grads {
  std::vector<Matrix> w;
  std::vector<Vector> b;
  double global_norm() const;
  void scale(double s);
};

Grads make_grads(const Mlp& net);

// Backprop of a loss whose gradient on the network outputs is dloss_dout;
// accumulates into `accum`.
void backward(const Mlp& net, const ForwardCache& cache, const Vector& dloss_dout,
              Grads& accum);

// chi = delta * g / max(||g||_2, delta), over all parameters jointly.
void clip_gradients(Grads& g, double delta);

struct RmspropState {
  std::vector<Matrix> vw;
  std::vector<Vector> vb;
  double lr = 1.0;
  double rho = 0.9;
  double eps = 1e-8;
};

RmspropState make_rmsprop(const Mlp& net, double lr, double rho, double eps);

// v <- rho v + (1-rho) g^2; param <- param - lr * g / (sqrt(v) + eps).
void rmsprop_step(Mlp& net, const Grads& g, RmspropState& st);

// dst := src, exact copy; throws on shape mismatch.
void copy_weights(const Mlp& src, Mlp& dst);

}  // namespace gos
