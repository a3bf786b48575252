#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "gos/dynamics.hpp"
#include "gos/estimator.hpp"
#include "gos/neural.hpp"
#include "gos/queries.hpp"

namespace gos {

// {o(t-1), p, r_p(t), o(t)}
struct ReplayTuple {
  Vector o_prev;
  std::size_t action = 0;
  double r = 0.0;
  Vector o_next;
};

enum class Eviction { Paper, Fifo };

// Finite experience memory. The verbatim eviction policy removes the tuple at
// (1-based) index B when full; Fifo removes the oldest.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : cap_(capacity) {}

  std::size_t size() const { return tuples_.size(); }
  std::size_t capacity() const { return cap_; }
  bool full() const { return tuples_.size() == cap_; }
  const ReplayTuple& operator[](std::size_t i) const { return tuples_[i]; }

  void evict(std::size_t b_1based, Eviction ev);
  void append(ReplayTuple t);

 private:
  std::vector<ReplayTuple> tuples_;
  std::size_t cap_;
};

// Evicts (using index b for the verbatim policy) iff full, then appends.
void replay_push(ReplayBuffer& buf, ReplayTuple t, std::size_t b_1based, Eviction ev);

// Exploit iff theta > eps (strict); otherwise uniform over all indices.
// Argmax ties break to the lowest index. Returns an index into qvals.
std::size_t epsilon_greedy(const Vector& qvals, double eps, RngStream& rng);

// max(0.1, eps - 0.005)
double decay_epsilon(double eps);

// q''_j = r_j + gamma * max_i target(o_next_j)_i
Vector target_values(const std::vector<const ReplayTuple*>& batch, const Mlp& target,
                     double gamma);

struct DqnConfig {
  double gamma = 0.9;
  double delta = 5.0;
  double lr = 1.0;
  double rho = 0.9;
  double eps_opt = 1e-8;
  double epsilon_init = 1.0;
  std::size_t target_sync = 20;
  double init_range = 0.3;
};

// Online/target nets plus the training loop state shared by both DQN
// schedulers.
struct DqnCore {
  Mlp online, target;
  RmspropState opt;
  ReplayBuffer buffer;
  std::size_t batch_size = 0;
  double epsilon = 1.0;
  std::size_t eta = 0;
  DqnConfig cfg;
  Eviction eviction = Eviction::Paper;
  Vector o_prev;
  bool has_prev = false;

  DqnCore(const std::vector<std::size_t>& sizes, const std::vector<double>& dropout,
          std::size_t action_count, const DqnConfig& c, Eviction ev, RngStream& rng_init);

  void remember(std::size_t action, double r, const Vector& o_now, std::uint64_t t);
  void sync_target_if_due();
  // One minibatch RMSProp step with gradient clipping; skipped (and no RNG
  // consumed) until the buffer holds a full batch. Returns whether it ran.
  bool maybe_train(RngStream& rng_train);
};

// What the harness hands a scheduler each step: the world observation, the
// advanced client chains, the filter, and the per-purpose RNG streams.
struct StepContext {
  std::uint64_t t = 0;  // 1-based
  const Vector* y_full = nullptr;
  std::vector<ClientProcess>* clients = nullptr;
  FilterState* filter = nullptr;
  const CQPointSet* pts = nullptr;
  const Matrix* sigma_v1 = nullptr;
  const Matrix* sigma_v2 = nullptr;
  const Matrix* h = nullptr;
  double mu = 0.1;
  std::size_t mse_samples = 100;
  CrossCov cross_cov = CrossCov::Paper;
  bool response_sample_mean = false;
  RngStream* rng_channel = nullptr;
  RngStream* rng_sched = nullptr;
  RngStream* rng_mse = nullptr;
  RngStream* rng_train = nullptr;
};

struct ClientStepResult {
  bool queried = false;
  double mse = 0.0;
  Vector response;
};

struct StepResult {
  std::size_t action = 0;
  bool transmitted = false;
  bool erased = false;
  bool delivered = false;
  double reward = 0.0;
  double trace_pri = 0.0;
  double trace_pos = 0.0;
  std::vector<ClientStepResult> clients;
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual StepResult step(StepContext& ctx) = 0;
  virtual std::size_t action_count() const = 0;
};

// CQKF-cum-DRL scheduler: action space {0..N}, observation
// (trace(Psi_pri), tau), net [C+1, 4, N+1].
class ProposedScheduler : public Scheduler {
 public:
  ProposedScheduler(std::size_t n_sensors, std::size_t n_clients, const DqnConfig& cfg,
                    Eviction ev, RngStream& rng_init);
  StepResult step(StepContext& ctx) override;
  std::size_t action_count() const override { return n_ + 1; }
  const DqnCore& core() const { return core_; }
  DqnCore& core() { return core_; }

 private:
  std::size_t n_;
  DqnCore core_;
};

// Benchmark DRL scheduler: polls every step (action space {1..N}), observes
// the full prior filter state, zero reward on no-query steps, net
// [M+M^2+C, 2.5M, M, N, N] with dropout {0.1, 0.1, 0}.
class BenchmarkDrlScheduler : public Scheduler {
 public:
  BenchmarkDrlScheduler(std::size_t n_sensors, std::size_t state_dim, std::size_t n_clients,
                        const DqnConfig& cfg, Eviction ev, RngStream& rng_init);
  StepResult step(StepContext& ctx) override;
  std::size_t action_count() const override { return n_; }
  const DqnCore& core() const { return core_; }
  DqnCore& core() { return core_; }

 private:
  std::size_t n_;
  std::size_t m_;
  DqnCore core_;
};

// One-step lookahead: per sensor, S hypothetical measurement/update/sample
// rounds; polls the argmin of the (alpha-weighted) response variances, and
// only when at least one client queried this step.
class MonteCarloScheduler : public Scheduler {
 public:
  explicit MonteCarloScheduler(std::size_t n_sensors) : n_(n_sensors) {}
  StepResult step(StepContext& ctx) override;
  std::size_t action_count() const override { return n_ + 1; }

 private:
  std::size_t n_;
};

// Standalone decision core of the Monte Carlo scheduler (prediction must
// already have run). Returns the chosen sensor in 1..N; the per-sensor
// scores (alpha-weighted sums of response variances) go to *scores if given.
std::size_t montecarlo_decide(const FilterState& fs, const CQPointSet& pts,
                              const Matrix& sigma_v2, const Matrix& h,
                              const std::vector<const ClientProcess*>& querying,
                              std::size_t s, CrossCov cc, RngStream& rng,
                              Vector* scores = nullptr);

}  // namespace gos
