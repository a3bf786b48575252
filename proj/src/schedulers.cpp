#include "gos/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gos/numerics.hpp"

namespace gos {

void ReplayBuffer::evict(std::size_t b_1based, Eviction ev) {
  if (tuples_.empty()) throw std::logic_error("replay: evict from empty buffer");
  if (ev == Eviction::Fifo) {
    tuples_.erase(tuples_.begin());
    return;
  }
  if (b_1based < 1 || b_1based > tuples_.size())
    throw std::invalid_argument("replay: eviction index out of range");
  tuples_.erase(tuples_.begin() + static_cast<std::ptrdiff_t>(b_1based - 1));
}

void ReplayBuffer::append(ReplayTuple t) {
  if (full()) throw std::logic_error("replay: append to full buffer");
  tuples_.push_back(std::move(t));
}

void replay_push(ReplayBuffer& buf, ReplayTuple t, std::size_t b_1based, Eviction ev) {
  if (buf.full()) buf.evict(b_1based, ev);
  buf.append(std::move(t));
}

std::size_t epsilon_greedy(const Vector& qvals, double eps, RngStream& rng) {
  const double theta = rng.uniform();
  if (theta > eps) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < qvals.size(); ++i)
      if (qvals[i] > qvals[best]) best = i;
    return best;
  }
  return rng.uniform_int(qvals.size());
}

double decay_epsilon(double eps) { return std::max(0.1, eps - 0.005); }

Vector target_values(const std::vector<const ReplayTuple*>& batch, const Mlp& target,
                     double gamma) {
  if (batch.empty()) throw std::invalid_argument("target_values: empty batch");
  Vector out(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const Vector q = forward(target, batch[j]->o_next, ForwardMode::Eval, nullptr, nullptr);
    out[j] = batch[j]->r + gamma * *std::max_element(q.begin(), q.end());
  }
  return out;
}

DqnCore::DqnCore(const std::vector<std::size_t>& sizes, const std::vector<double>& dropout,
                 std::size_t action_count, const DqnConfig& c, Eviction ev,
                 RngStream& rng_init)
    : online(make_mlp(sizes, c.init_range, dropout, rng_init)),
      target(online),
      opt(make_rmsprop(online, c.lr, c.rho, c.eps_opt)),
      buffer(action_count * 100),
      batch_size(action_count * 30),
      epsilon(c.epsilon_init),
      cfg(c),
      eviction(ev) {}

void DqnCore::remember(std::size_t action, double r, const Vector& o_now, std::uint64_t t) {
  if (buffer.full()) buffer.evict(batch_size, eviction);
  if (t > 1 && has_prev) buffer.append({o_prev, action, r, o_now});
  o_prev = o_now;
  has_prev = true;
}

void DqnCore::sync_target_if_due() {
  ++eta;
  if (eta == cfg.target_sync) {
    copy_weights(online, target);
    eta = 0;
  }
}

bool DqnCore::maybe_train(RngStream& rng_train) {
  if (buffer.size() < batch_size) return false;
  // minibatch of distinct indices, partial Fisher-Yates
  std::vector<std::size_t> pool(buffer.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  std::vector<const ReplayTuple*> batch(batch_size);
  for (std::size_t j = 0; j < batch_size; ++j) {
    const std::size_t pick = j + rng_train.uniform_int(pool.size() - j);
    std::swap(pool[j], pool[pick]);
    batch[j] = &buffer[pool[j]];
  }
  const Vector targets = target_values(batch, target, cfg.gamma);

  Grads grads = make_grads(online);
  const double bsz = static_cast<double>(batch_size);
  ForwardCache cache;
  Vector dout(online.sizes.back());
  for (std::size_t j = 0; j < batch_size; ++j) {
    const Vector q = forward(online, batch[j]->o_prev, ForwardMode::Train, &rng_train, &cache);
    std::fill(dout.begin(), dout.end(), 0.0);
    dout[batch[j]->action] = 2.0 / bsz * (q[batch[j]->action] - targets[j]);
    backward(online, cache, dout, grads);
  }
  clip_gradients(grads, cfg.delta);
  rmsprop_step(online, grads, opt);
  return true;
}

namespace {

// Channel + posterior per Alg. 2 steps 2-7, with the transmit draw skipped
// entirely when p = 0.
void channel_and_posterior(StepContext& ctx, std::size_t p, StepResult& res) {
  FilterState& fs = *ctx.filter;
  if (p >= 1) {
    res.transmitted = true;
    const TransmitResult tr = transmit(p, (*ctx.y_full)[p - 1], *ctx.rng_channel);
    res.delivered = tr.delivered;
    res.erased = !tr.delivered;
    if (tr.delivered) {
      update(fs, *ctx.sigma_v2, *ctx.h, *ctx.pts, tr.y, p, ctx.cross_cov);
      res.trace_pos = trace(fs.psi_pos);
      return;
    }
  }
  fs.x_pos = fs.x_pri;
  fs.psi_pos = fs.psi_pri;
  fs.zstar_valid = false;
  res.trace_pos = trace(fs.psi_pos);
}

// Alg.-7 query evaluation over the posterior, once per querying client.
std::vector<QueryOutcome> evaluate_queries(StepContext& ctx, StepResult& res) {
  std::vector<QueryOutcome> outcomes;
  res.clients.resize(ctx.clients->size());
  for (std::size_t c = 0; c < ctx.clients->size(); ++c) {
    const ClientProcess& cp = (*ctx.clients)[c];
    res.clients[c].queried = cp.queried_now;
    if (!cp.queried_now) continue;
    const QueryMse qm = estimate_query_mse(ctx.filter->x_pos, ctx.filter->psi_pos, cp.query,
                                           ctx.mse_samples, *ctx.rng_mse);
    res.clients[c].mse = qm.mse;
    res.clients[c].response =
        ctx.response_sample_mean ? qm.response_mean : respond(ctx.filter->x_pos, cp.query);
    outcomes.push_back({cp.alpha, qm.mse});
  }
  return outcomes;
}

Vector proposed_observation(const StepContext& ctx) {
  Vector o(1 + ctx.clients->size());
  o[0] = trace(ctx.filter->psi_pri);
  for (std::size_t c = 0; c < ctx.clients->size(); ++c)
    o[1 + c] = static_cast<double>((*ctx.clients)[c].tau);
  return o;
}

Vector benchmark_observation(const StepContext& ctx) {
  const FilterState& fs = *ctx.filter;
  const std::size_t m = fs.x_pri.size();
  Vector o;
  o.reserve(m + m * m + ctx.clients->size());
  o.insert(o.end(), fs.x_pri.begin(), fs.x_pri.end());
  o.insert(o.end(), fs.psi_pri.data(), fs.psi_pri.data() + fs.psi_pri.size());
  for (const ClientProcess& cp : *ctx.clients) o.push_back(static_cast<double>(cp.tau));
  return o;
}

}  // namespace

ProposedScheduler::ProposedScheduler(std::size_t n_sensors, std::size_t n_clients,
                                     const DqnConfig& cfg, Eviction ev, RngStream& rng_init)
    : n_(n_sensors),
      core_({n_clients + 1, 4, n_sensors + 1}, {}, n_sensors + 1, cfg, ev, rng_init) {}

StepResult ProposedScheduler::step(StepContext& ctx) {
  StepResult res;
  predict(*ctx.filter, *ctx.sigma_v1, *ctx.pts, Propagator{});
  res.trace_pri = trace(ctx.filter->psi_pri);

  const Vector o_now = proposed_observation(ctx);
  const Vector qvals = forward(core_.online, o_now, ForwardMode::Eval, nullptr, nullptr);
  const std::size_t p = epsilon_greedy(qvals, core_.epsilon, *ctx.rng_sched);
  res.action = p;

  channel_and_posterior(ctx, p, res);
  const std::vector<QueryOutcome> outcomes = evaluate_queries(ctx, res);
  res.reward = reward(outcomes, p, ctx.mu, res.trace_pos);

  core_.remember(p, res.reward, o_now, ctx.t);
  core_.sync_target_if_due();
  core_.maybe_train(*ctx.rng_train);
  core_.epsilon = decay_epsilon(core_.epsilon);
  return res;
}

BenchmarkDrlScheduler::BenchmarkDrlScheduler(std::size_t n_sensors, std::size_t state_dim,
                                             std::size_t n_clients, const DqnConfig& cfg,
                                             Eviction ev, RngStream& rng_init)
    : n_(n_sensors),
      m_(state_dim),
      core_({state_dim + state_dim * state_dim + n_clients, 5 * state_dim / 2, state_dim,
             n_sensors, n_sensors},
            {0.1, 0.1, 0.0}, n_sensors, cfg, ev, rng_init) {}

StepResult BenchmarkDrlScheduler::step(StepContext& ctx) {
  StepResult res;
  predict(*ctx.filter, *ctx.sigma_v1, *ctx.pts, Propagator{});
  res.trace_pri = trace(ctx.filter->psi_pri);

  const Vector o_now = benchmark_observation(ctx);
  const Vector qvals = forward(core_.online, o_now, ForwardMode::Eval, nullptr, nullptr);
  const std::size_t p = epsilon_greedy(qvals, core_.epsilon, *ctx.rng_sched) + 1;
  res.action = p;

  channel_and_posterior(ctx, p, res);
  const std::vector<QueryOutcome> outcomes = evaluate_queries(ctx, res);
  // zero reward when no query is posed
  res.reward = outcomes.empty() ? 0.0 : reward(outcomes, p, ctx.mu, res.trace_pos);

  core_.remember(p - 1, res.reward, o_now, ctx.t);
  core_.sync_target_if_due();
  core_.maybe_train(*ctx.rng_train);
  core_.epsilon = decay_epsilon(core_.epsilon);
  return res;
}

std::size_t montecarlo_decide(const FilterState& fs, const CQPointSet& pts,
                              const Matrix& sigma_v2, const Matrix& h,
                              const std::vector<const ClientProcess*>& querying,
                              std::size_t s, CrossCov cc, RngStream& rng, Vector* scores) {
  if (querying.empty())
    throw std::invalid_argument("montecarlo_decide: needs at least one querying client");
  const std::size_t n = h.rows();
  const std::size_t m = fs.x_pri.size();

  // The gain, predicted measurements and posterior covariance do not depend
  // on the hypothetical measurement value, so they are computed once; the
  // per-sample arithmetic below is exactly Alg.-8 order (theta, y, x_s).
  const UpdateTerms ut = update_terms(fs, sigma_v2, h, pts, cc);
  const Matrix chol_pos = cholesky(ut.psi_pos);
  const Matrix chol_pri = cholesky(fs.psi_pri);

  Vector nu(n, 0.0);
  Vector x_mean(m);
  for (std::size_t sensor = 1; sensor <= n; ++sensor) {
    const double hbar = erasure_prob(sensor);
    const double y_mean = fs.x_pri[sensor - 1];
    const double y_sd = std::sqrt(std::max(0.0, fs.psi_pri(sensor - 1, sensor - 1)));
    // per-client response accumulators (Welford)
    std::vector<Vector> mean(querying.size()), msq(querying.size());
    for (std::size_t c = 0; c < querying.size(); ++c) {
      const std::size_t len =
          querying[c]->query.kind == QueryKind::CurrentState ? m : 1;
      mean[c].assign(len, 0.0);
      msq[c].assign(len, 0.0);
    }
    for (std::size_t i = 0; i < s; ++i) {
      const double theta = rng.uniform();
      Vector xs;
      if (theta >= hbar) {
        const double y = y_mean + y_sd * rng.normal();
        x_mean = fs.x_pri;
        const double innov = y - ut.yhat[sensor - 1];
        for (std::size_t r = 0; r < m; ++r) x_mean[r] += ut.gain(r, sensor - 1) * innov;
        xs = gaussian_sample_chol(x_mean, chol_pos, rng);
      } else {
        xs = gaussian_sample_chol(fs.x_pri, chol_pri, rng);
      }
      const double k = static_cast<double>(i + 1);
      for (std::size_t c = 0; c < querying.size(); ++c) {
        const Vector u = eval_query(querying[c]->query, xs);
        for (std::size_t r = 0; r < u.size(); ++r) {
          const double d = u[r] - mean[c][r];
          mean[c][r] += d / k;
          msq[c][r] += d * (u[r] - mean[c][r]);
        }
      }
    }
    double score = 0.0;
    for (std::size_t c = 0; c < querying.size(); ++c)
      score += querying[c]->alpha * sum(msq[c]) / static_cast<double>(s - 1);
    nu[sensor - 1] = score;
  }
  if (scores) *scores = nu;
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (nu[i] < nu[best]) best = i;
  return best + 1;
}

StepResult MonteCarloScheduler::step(StepContext& ctx) {
  StepResult res;
  predict(*ctx.filter, *ctx.sigma_v1, *ctx.pts, Propagator{});
  res.trace_pri = trace(ctx.filter->psi_pri);

  std::vector<const ClientProcess*> querying;
  for (const ClientProcess& cp : *ctx.clients)
    if (cp.queried_now) querying.push_back(&cp);

  // polls only whenever a query is asked
  std::size_t p = 0;
  if (!querying.empty())
    p = montecarlo_decide(*ctx.filter, *ctx.pts, *ctx.sigma_v2, *ctx.h, querying,
                          ctx.mse_samples, ctx.cross_cov, *ctx.rng_sched);
  res.action = p;

  channel_and_posterior(ctx, p, res);
  const std::vector<QueryOutcome> outcomes = evaluate_queries(ctx, res);
  res.reward = reward(outcomes, p, ctx.mu, res.trace_pos);
  return res;
}

}  // namespace gos
