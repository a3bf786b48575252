#include "gos/queries.hpp"

#include <algorithm>
#include <stdexcept>

#include "gos/kernels.hpp"
#include "gos/numerics.hpp"

namespace gos {

Vector eval_query(const QueryFn& q, const Vector& x) {
  switch (q.kind) {
    case QueryKind::CurrentState:
      return x;
    default:
      return Vector{eval_query_scalar(q, x)};
  }
}

double eval_query_scalar(const QueryFn& q, const Vector& x) {
  switch (q.kind) {
    case QueryKind::Maximum:
      return *std::max_element(x.begin(), x.end());
    case QueryKind::CountRange: {
      double count = 0.0;
      for (double v : x)
        if (v >= q.beta1 && v <= q.beta2) count += 1.0;
      return count;
    }
    case QueryKind::SampleMean:
      return sum(x) / static_cast<double>(x.size());
    case QueryKind::SampleVariance: {
      if (x.size() < 2) throw std::invalid_argument("sample variance undefined for M < 2");
      return sample_variance(x);
    }
    case QueryKind::CurrentState:
      throw std::invalid_argument("current_state query is vector-valued");
  }
  throw std::logic_error("eval_query_scalar: unknown query kind");
}

bool advance_client(ClientProcess& cp, RngStream& rng) {
  bool queried = false;
  if (cp.chain == ChainKind::Periodic) {
    cp.state = (cp.state + 1) % cp.period;
    queried = cp.state == 0;  // query on entering state A
  } else {
    queried = rng.uniform() < cp.q;
  }
  cp.tau = queried ? 0 : std::min(cp.tau + 1, kTauSaturation);
  cp.queried_now = queried;
  return queried;
}

QueryMse estimate_query_mse(const Vector& x_pos, const Matrix& psi_pos, const QueryFn& q,
                            std::size_t s, RngStream& rng) {
  if (s < 2) throw std::invalid_argument("estimate_query_mse: S must be >= 2");
  const std::size_t m = x_pos.size();

  bool zero_cov = true;
  for (std::size_t i = 0; i < psi_pos.size() && zero_cov; ++i)
    zero_cov = psi_pos.data()[i] == 0.0;
  Matrix chol_l;
  if (!zero_cov) chol_l = cholesky(psi_pos);

  QueryMse out;
  if (q.kind == QueryKind::CurrentState) {
    // sum of per-component sample variances, one Welford pass
    Vector mean(m, 0.0), m2(m, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      const Vector xs =
          zero_cov ? x_pos : gaussian_sample_chol(x_pos, chol_l, rng);
      const double k = static_cast<double>(i + 1);
      for (std::size_t r = 0; r < m; ++r) {
        const double d = xs[r] - mean[r];
        mean[r] += d / k;
        m2[r] += d * (xs[r] - mean[r]);
      }
    }
    out.mse = sum(m2) / static_cast<double>(s - 1);
    out.response_mean = mean;
    return out;
  }

  Vector u(s);
  for (std::size_t i = 0; i < s; ++i) {
    const Vector xs = zero_cov ? x_pos : gaussian_sample_chol(x_pos, chol_l, rng);
    u[i] = eval_query_scalar(q, xs);
  }
  const double mean = sum(u) / static_cast<double>(s);
  out.mse = kernels::centered_sumsq(u.data(), mean, s) / static_cast<double>(s - 1);
  out.response_mean = Vector{mean};
  return out;
}

Vector respond(const Vector& x_pos, const QueryFn& q) { return eval_query(q, x_pos); }

double reward(const std::vector<QueryOutcome>& queried, std::size_t p, double mu,
              double trace_pos) {
  if (queried.empty()) return -(p == 0 ? mu : 1.0) * trace_pos;
  double acc = 0.0;
  for (const QueryOutcome& qo : queried) acc += qo.alpha * qo.mse;
  return -acc;
}

}  // namespace gos
