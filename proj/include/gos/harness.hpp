#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gos/dynamics.hpp"
#include "gos/schedulers.hpp"

#include "json.hpp"

namespace gos {

enum class SchedulerKind { Proposed, BenchmarkDrl, MonteCarlo };

struct ClientSpec {
  ChainKind chain = ChainKind::Periodic;
  std::size_t period = 6;
  std::size_t initial_state = 3;  // 0 = A; D by default
  double q = 1.0 / 6.0;           // memoryless query probability
  QueryKind query = QueryKind::Maximum;
  std::optional<double> beta1, beta2;  // count-range bounds; default from NLSD
  double alpha = 1.0;
};

struct ExperimentConfig {
  // world
  std::size_t m = 20;
  std::size_t n = 20;
  Nlsd nlsd = Nlsd::Logistic;
  Matrix sigma_v1;  // empty -> 2.5e-3 * I
  Matrix sigma_v2;  // empty -> I
  Matrix h;         // empty -> identity (requires N == M)
  Vector x0;        // empty -> zeros
  double sigma_v1_scale = 2.5e-3;
  double sigma_v2_scale = 1.0;
  // filter
  std::size_t nprime = 2;
  std::optional<double> varpi, varsigma;  // default from NLSD
  std::optional<double> count_range_lo, count_range_hi;
  // scheduler
  SchedulerKind scheduler = SchedulerKind::Proposed;
  DqnConfig dqn;
  double mu = 0.1;
  std::size_t mse_samples = 100;  // S
  // clients
  std::vector<ClientSpec> clients;  // empty -> preset 1
  // run
  std::uint64_t horizon = 4000;
  std::uint64_t warmup = 2000;
  std::uint64_t seed = 1;
  // flags
  CrossCov cross_cov = CrossCov::Paper;
  Eviction eviction = Eviction::Paper;
  bool response_sample_mean = false;

  double holt_varpi() const;
  double holt_varsigma() const;
  double beta_lo() const;
  double beta_hi() const;
};

// Table-III client-roster presets (1-3 for C = 2; 4 is the twelve-state
// C = 4 roster).
std::vector<ClientSpec> client_preset(int preset);

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
// Throws std::invalid_argument on violated invariants.
void validate_config(const ExperimentConfig& cfg);

WorldConfig world_config(const ExperimentConfig& cfg);

struct ClientRecord {
  bool queried = false;
  std::optional<double> mse, ztrue, zhat;
};

struct RunRecord {
  std::uint64_t t = 0;
  std::size_t action = 0;
  bool transmitted = false;
  bool erased = false;
  double reward = 0.0;
  double trace_pri = 0.0;
  double trace_pos = 0.0;
  std::vector<ClientRecord> clients;
  bool warmup = false;
};

struct QueryEvent {
  std::uint64_t t = 0;
  int client = 0;  // 1-based
  std::optional<double> ztrue, zhat;
  double mse = 0.0;
};

struct PerClientSummary {
  std::size_t queries = 0;
  std::optional<double> median_mse, q1, q3;
};

struct RunSummary {
  Vector asf;  // length N+1, indexed by action id (entry 0 stays 0 for the benchmark)
  std::size_t transmissions = 0;
  std::vector<PerClientSummary> per_client;
  double total_reward = 0.0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

struct RunOutput {
  std::vector<RunRecord> records;
  std::vector<QueryEvent> events;
  RunSummary summary;
};

RunOutput run_experiment(const ExperimentConfig& cfg, std::uint64_t seed);

// Evaluation-window statistics (records flagged warmup are excluded).
RunSummary summarize(const std::vector<RunRecord>& records, std::size_t action_count);

void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records,
                       std::size_t n_clients);
void write_events_csv(std::ostream& os, const std::vector<QueryEvent>& events);
nlohmann::json summary_to_json(const RunSummary& s, const ExperimentConfig& cfg);

// K parallel replications with derived seeds.
std::vector<RunOutput> run_replications(const ExperimentConfig& cfg, std::uint64_t base_seed,
                                        std::size_t k);
nlohmann::json aggregate_to_json(const std::vector<RunOutput>& runs);

// type-7 linear-interpolation quantile of a sorted vector
double quantile_sorted(const Vector& sorted, double q);

}  // namespace gos
