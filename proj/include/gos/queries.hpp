#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gos/matrix.hpp"
#include "gos/rng.hpp"

namespace gos {

enum class QueryKind { CurrentState, Maximum, CountRange, SampleMean, SampleVariance };

struct QueryFn {
  QueryKind kind = QueryKind::Maximum;
  double beta1 = -0.5;  // count-range bounds, beta1 <= beta2
  double beta2 = -0.2;
};

// Scalar queries return a length-1 vector; current_state returns x itself.
Vector eval_query(const QueryFn& q, const Vector& x);
// Convenience for the scalar queries.
double eval_query_scalar(const QueryFn& q, const Vector& x);

enum class ChainKind { Periodic, Memoryless };

// One client's query process: a periodic cycle of `period` states that fires
// on entering state A (index 0), or a memoryless per-step Bernoulli(q).
// tau counts steps since the last query, saturating, and is 0 exactly on
// query steps.
struct ClientProcess {
  int id = 0;
  QueryFn query;
  ChainKind chain = ChainKind::Periodic;
  std::size_t period = 6;
  std::size_t state = 0;  // 0 = A, 1 = B, ...
  double q = 1.0 / 6.0;   // memoryless query probability
  std::uint64_t tau = 0;
  double alpha = 1.0;
  bool queried_now = false;
};

constexpr std::uint64_t kTauSaturation = 1000000;

// Advances the chain one step; returns (and records) whether a query fired.
bool advance_client(ClientProcess& cp, RngStream& rng);

struct QueryMse {
  double mse = 0.0;        // sample variance of the S query evaluations
  Vector response_mean;    // sample mean of the evaluations (length 1 or M)
};

// Alg.-7-style sampling estimate: draw S states from N(x_pos, psi_pos),
// evaluate the query, take the sample variance (divisor S-1). For
// current_state the result is the sum of per-component sample variances.
QueryMse estimate_query_mse(const Vector& x_pos, const Matrix& psi_pos, const QueryFn& q,
                            std::size_t s, RngStream& rng);

// Plug-in response z_c(x_pos).
Vector respond(const Vector& x_pos, const QueryFn& q);

struct QueryOutcome {
  double alpha = 1.0;
  double mse = 0.0;
};

// r_p(t): -mu^[p==0] * trace(Psi_pos) when nobody queried, else
// -sum_c alpha_c * MSE_c over the clients whose tau hit 0 this step.
double reward(const std::vector<QueryOutcome>& queried, std::size_t p, double mu,
              double trace_pos);

}  // namespace gos
