#include "gos/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace gos {

namespace {

// stable, locale-free double formatting for the CSV contracts
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

constexpr std::uint64_t kStreamDynamics = 0;
constexpr std::uint64_t kStreamMeasurement = 1;
constexpr std::uint64_t kStreamChannel = 2;
constexpr std::uint64_t kStreamScheduler = 3;
constexpr std::uint64_t kStreamMse = 4;
constexpr std::uint64_t kStreamWeightInit = 5;
constexpr std::uint64_t kStreamClients = 6;
constexpr std::uint64_t kStreamTraining = 7;

}  // namespace

double ExperimentConfig::holt_varpi() const {
  if (varpi) return *varpi;
  return nlsd == Nlsd::Roll ? 0.75 : 0.77;
}

double ExperimentConfig::holt_varsigma() const {
  if (varsigma) return *varsigma;
  return nlsd == Nlsd::Roll ? 0.025 : 0.02;
}

double ExperimentConfig::beta_lo() const {
  if (count_range_lo) return *count_range_lo;
  return nlsd == Nlsd::Roll ? -0.2 : -0.5;
}

double ExperimentConfig::beta_hi() const {
  if (count_range_hi) return *count_range_hi;
  return nlsd == Nlsd::Roll ? -0.1 : -0.2;
}

std::vector<ClientSpec> client_preset(int preset) {
  ClientSpec periodic_max{ChainKind::Periodic, 6, 3 /* D */, 1.0 / 6.0,
                          QueryKind::Maximum,  {}, {},       1.0};
  ClientSpec periodic_cr{ChainKind::Periodic,   6, 1 /* B */, 1.0 / 6.0,
                         QueryKind::CountRange, {}, {},       1.0};
  ClientSpec memoryless_max = periodic_max;
  memoryless_max.chain = ChainKind::Memoryless;
  ClientSpec memoryless_cr = periodic_cr;
  memoryless_cr.chain = ChainKind::Memoryless;
  switch (preset) {
    case 1:
      return {periodic_max, periodic_cr};
    case 2:
      return {memoryless_max, memoryless_cr};
    case 3:
      return {memoryless_max, periodic_cr};
    case 4: {
      // four periodic clients on a twelve-state cycle, initial states B D F H
      std::vector<ClientSpec> out(4);
      const QueryKind kinds[4] = {QueryKind::Maximum, QueryKind::CountRange,
                                  QueryKind::SampleMean, QueryKind::SampleVariance};
      for (int c = 0; c < 4; ++c) {
        out[c].chain = ChainKind::Periodic;
        out[c].period = 12;
        out[c].initial_state = static_cast<std::size_t>(2 * c + 1);  // B D F H
        out[c].query = kinds[c];
      }
      return out;
    }
    default:
      throw std::invalid_argument("client_preset: preset must be 1..4");
  }
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.m < 1 || cfg.n < 1) throw std::invalid_argument("config: M and N must be >= 1");
  if (cfg.nprime < 1) throw std::invalid_argument("config: nprime must be >= 1");
  if (cfg.warmup >= cfg.horizon) throw std::invalid_argument("config: warmup must be < horizon");
  if (!(cfg.mu > 0.0 && cfg.mu <= 1.0)) throw std::invalid_argument("config: mu must be in (0, 1]");
  if (cfg.mse_samples < 2) throw std::invalid_argument("config: S must be >= 2");
  const double vp = cfg.holt_varpi(), vs = cfg.holt_varsigma();
  if (!(vp > 0.0 && vp < 1.0 && vs > 0.0 && vs < 1.0))
    throw std::invalid_argument("config: smoothing constants must be in (0, 1)");
  if (cfg.clients.empty()) throw std::invalid_argument("config: needs at least one client");
  for (const ClientSpec& c : cfg.clients) {
    if (c.chain == ChainKind::Periodic && c.period < 1)
      throw std::invalid_argument("config: periodic client period must be >= 1");
    if (c.chain == ChainKind::Periodic && c.initial_state >= c.period)
      throw std::invalid_argument("config: client initial state outside the chain");
    if (c.chain == ChainKind::Memoryless && !(c.q >= 0.0 && c.q <= 1.0))
      throw std::invalid_argument("config: memoryless q must be in [0, 1]");
    if (!(c.alpha >= 0.0 && c.alpha <= 1.0))
      throw std::invalid_argument("config: client alpha must be in [0, 1]");
    const double b1 = c.beta1.value_or(cfg.beta_lo());
    const double b2 = c.beta2.value_or(cfg.beta_hi());
    if (c.query == QueryKind::CountRange && b1 > b2)
      throw std::invalid_argument("config: count-range needs beta1 <= beta2");
    if (c.query == QueryKind::SampleVariance && cfg.m < 2)
      throw std::invalid_argument("config: sample-variance query needs M >= 2");
  }
  if (cfg.sigma_v1.size() && (cfg.sigma_v1.rows() != cfg.m || cfg.sigma_v1.cols() != cfg.m))
    throw std::invalid_argument("config: sigma_v1 must be M x M");
  if (cfg.sigma_v2.size() && (cfg.sigma_v2.rows() != cfg.n || cfg.sigma_v2.cols() != cfg.n))
    throw std::invalid_argument("config: sigma_v2 must be N x N");
  if (cfg.h.size() && (cfg.h.rows() != cfg.n || cfg.h.cols() != cfg.m))
    throw std::invalid_argument("config: H must be N x M");
  if (!cfg.h.size() && cfg.n != cfg.m)
    throw std::invalid_argument("config: identity H requires N == M");
  if (cfg.x0.size() && cfg.x0.size() != cfg.m)
    throw std::invalid_argument("config: x0 must have length M");
}

WorldConfig world_config(const ExperimentConfig& cfg) {
  WorldConfig wc;
  wc.m = cfg.m;
  wc.n = cfg.n;
  wc.sigma_v1 =
      cfg.sigma_v1.size() ? cfg.sigma_v1 : Matrix::scaled_identity(cfg.m, cfg.sigma_v1_scale);
  wc.sigma_v2 =
      cfg.sigma_v2.size() ? cfg.sigma_v2 : Matrix::scaled_identity(cfg.n, cfg.sigma_v2_scale);
  wc.h = cfg.h.size() ? cfg.h : Matrix::identity(cfg.m);
  wc.nlsd = cfg.nlsd;
  wc.x0 = cfg.x0.size() ? cfg.x0 : Vector(cfg.m, 0.0);
  return wc;
}

namespace {

const char* kAllowedKeys[] = {
    "M",          "N",          "nlsd",        "sigma_v1",     "sigma_v2",
    "H",          "x0",         "nprime",      "S",            "varpi",
    "varsigma",   "count_range", "scheduler",  "mu",           "gamma",
    "delta",      "learning_rate", "rmsprop_rho", "rmsprop_eps", "epsilon_init",
    "target_sync", "init_range", "preset",     "clients",      "horizon",
    "warmup",     "seed",       "cross_cov",   "eviction",     "response"};

Matrix matrix_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw std::invalid_argument(std::string("config: ") + field + " must be a 2D array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols)
      throw std::invalid_argument(std::string("config: ragged rows in ") + field);
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

QueryKind query_from_string(const std::string& s) {
  if (s == "current_state") return QueryKind::CurrentState;
  if (s == "maximum") return QueryKind::Maximum;
  if (s == "count_range") return QueryKind::CountRange;
  if (s == "sample_mean") return QueryKind::SampleMean;
  if (s == "sample_variance") return QueryKind::SampleVariance;
  throw std::invalid_argument("config: unknown query kind '" + s + "'");
}

const char* query_to_string(QueryKind k) {
  switch (k) {
    case QueryKind::CurrentState: return "current_state";
    case QueryKind::Maximum: return "maximum";
    case QueryKind::CountRange: return "count_range";
    case QueryKind::SampleMean: return "sample_mean";
    case QueryKind::SampleVariance: return "sample_variance";
  }
  return "?";
}

std::size_t state_from_json(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'Z') return static_cast<std::size_t>(s[0] - 'A');
  }
  throw std::invalid_argument("config: initial_state must be a letter or an index");
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kAllowedKeys) known = known || it.key() == k;
    if (!known) throw std::invalid_argument("config: unknown field '" + it.key() + "'");
  }
  ExperimentConfig cfg;
  if (j.contains("nlsd")) {
    const std::string s = j["nlsd"].get<std::string>();
    if (s == "logistic")
      cfg.nlsd = Nlsd::Logistic;
    else if (s == "roll")
      cfg.nlsd = Nlsd::Roll;
    else
      throw std::invalid_argument("config: nlsd must be 'logistic' or 'roll'");
  }
  if (j.contains("M")) cfg.m = j["M"].get<std::size_t>();
  if (j.contains("N")) cfg.n = j["N"].get<std::size_t>();
  if (j.contains("sigma_v1")) {
    if (j["sigma_v1"].is_number())
      cfg.sigma_v1_scale = j["sigma_v1"].get<double>();
    else
      cfg.sigma_v1 = matrix_from_json(j["sigma_v1"], "sigma_v1");
  }
  if (j.contains("sigma_v2")) {
    if (j["sigma_v2"].is_number())
      cfg.sigma_v2_scale = j["sigma_v2"].get<double>();
    else
      cfg.sigma_v2 = matrix_from_json(j["sigma_v2"], "sigma_v2");
  }
  if (j.contains("H")) {
    if (j["H"].is_string()) {
      if (j["H"].get<std::string>() != "identity")
        throw std::invalid_argument("config: H must be 'identity' or a 2D array");
    } else {
      cfg.h = matrix_from_json(j["H"], "H");
    }
  }
  if (j.contains("x0")) cfg.x0 = j["x0"].get<Vector>();
  if (j.contains("nprime")) cfg.nprime = j["nprime"].get<std::size_t>();
  if (j.contains("S")) cfg.mse_samples = j["S"].get<std::size_t>();
  if (j.contains("varpi")) cfg.varpi = j["varpi"].get<double>();
  if (j.contains("varsigma")) cfg.varsigma = j["varsigma"].get<double>();
  if (j.contains("count_range")) {
    const auto& cr = j["count_range"];
    if (!cr.is_array() || cr.size() != 2)
      throw std::invalid_argument("config: count_range must be [lo, hi]");
    cfg.count_range_lo = cr[0].get<double>();
    cfg.count_range_hi = cr[1].get<double>();
  }
  if (j.contains("scheduler")) {
    const std::string s = j["scheduler"].get<std::string>();
    if (s == "proposed")
      cfg.scheduler = SchedulerKind::Proposed;
    else if (s == "benchmark_drl")
      cfg.scheduler = SchedulerKind::BenchmarkDrl;
    else if (s == "montecarlo")
      cfg.scheduler = SchedulerKind::MonteCarlo;
    else
      throw std::invalid_argument("config: unknown scheduler '" + s + "'");
  }
  if (j.contains("mu")) cfg.mu = j["mu"].get<double>();
  if (j.contains("gamma")) cfg.dqn.gamma = j["gamma"].get<double>();
  if (j.contains("delta")) cfg.dqn.delta = j["delta"].get<double>();
  if (j.contains("learning_rate")) cfg.dqn.lr = j["learning_rate"].get<double>();
  if (j.contains("rmsprop_rho")) cfg.dqn.rho = j["rmsprop_rho"].get<double>();
  if (j.contains("rmsprop_eps")) cfg.dqn.eps_opt = j["rmsprop_eps"].get<double>();
  if (j.contains("epsilon_init")) cfg.dqn.epsilon_init = j["epsilon_init"].get<double>();
  if (j.contains("target_sync")) cfg.dqn.target_sync = j["target_sync"].get<std::size_t>();
  if (j.contains("init_range")) cfg.dqn.init_range = j["init_range"].get<double>();
  if (j.contains("horizon")) cfg.horizon = j["horizon"].get<std::uint64_t>();
  if (j.contains("warmup")) cfg.warmup = j["warmup"].get<std::uint64_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("cross_cov")) {
    const std::string s = j["cross_cov"].get<std::string>();
    if (s == "paper")
      cfg.cross_cov = CrossCov::Paper;
    else if (s == "standard")
      cfg.cross_cov = CrossCov::Standard;
    else
      throw std::invalid_argument("config: cross_cov must be 'paper' or 'standard'");
  }
  if (j.contains("eviction")) {
    const std::string s = j["eviction"].get<std::string>();
    if (s == "paper")
      cfg.eviction = Eviction::Paper;
    else if (s == "fifo")
      cfg.eviction = Eviction::Fifo;
    else
      throw std::invalid_argument("config: eviction must be 'paper' or 'fifo'");
  }
  if (j.contains("response")) {
    const std::string s = j["response"].get<std::string>();
    if (s == "plugin")
      cfg.response_sample_mean = false;
    else if (s == "sample_mean")
      cfg.response_sample_mean = true;
    else
      throw std::invalid_argument("config: response must be 'plugin' or 'sample_mean'");
  }
  if (j.contains("preset") && j.contains("clients"))
    throw std::invalid_argument("config: give either 'preset' or 'clients', not both");
  if (j.contains("preset")) {
    cfg.clients = client_preset(j["preset"].get<int>());
  } else if (j.contains("clients")) {
    for (const auto& cj : j["clients"]) {
      ClientSpec cs;
      if (cj.contains("chain")) {
        const std::string s = cj["chain"].get<std::string>();
        if (s == "periodic")
          cs.chain = ChainKind::Periodic;
        else if (s == "memoryless")
          cs.chain = ChainKind::Memoryless;
        else
          throw std::invalid_argument("config: chain must be 'periodic' or 'memoryless'");
      }
      if (cj.contains("period")) cs.period = cj["period"].get<std::size_t>();
      if (cj.contains("initial_state")) cs.initial_state = state_from_json(cj["initial_state"]);
      if (cj.contains("q")) cs.q = cj["q"].get<double>();
      if (cj.contains("query")) cs.query = query_from_string(cj["query"].get<std::string>());
      if (cj.contains("beta1")) cs.beta1 = cj["beta1"].get<double>();
      if (cj.contains("beta2")) cs.beta2 = cj["beta2"].get<double>();
      if (cj.contains("alpha")) cs.alpha = cj["alpha"].get<double>();
      cfg.clients.push_back(cs);
    }
  } else {
    cfg.clients = client_preset(1);
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["M"] = cfg.m;
  j["N"] = cfg.n;
  j["nlsd"] = cfg.nlsd == Nlsd::Roll ? "roll" : "logistic";
  j["sigma_v1"] = cfg.sigma_v1_scale;
  j["sigma_v2"] = cfg.sigma_v2_scale;
  j["nprime"] = cfg.nprime;
  j["S"] = cfg.mse_samples;
  j["varpi"] = cfg.holt_varpi();
  j["varsigma"] = cfg.holt_varsigma();
  j["count_range"] = {cfg.beta_lo(), cfg.beta_hi()};
  switch (cfg.scheduler) {
    case SchedulerKind::Proposed: j["scheduler"] = "proposed"; break;
    case SchedulerKind::BenchmarkDrl: j["scheduler"] = "benchmark_drl"; break;
    case SchedulerKind::MonteCarlo: j["scheduler"] = "montecarlo"; break;
  }
  j["mu"] = cfg.mu;
  j["gamma"] = cfg.dqn.gamma;
  j["delta"] = cfg.dqn.delta;
  j["learning_rate"] = cfg.dqn.lr;
  j["rmsprop_rho"] = cfg.dqn.rho;
  j["rmsprop_eps"] = cfg.dqn.eps_opt;
  j["epsilon_init"] = cfg.dqn.epsilon_init;
  j["target_sync"] = cfg.dqn.target_sync;
  j["init_range"] = cfg.dqn.init_range;
  j["horizon"] = cfg.horizon;
  j["warmup"] = cfg.warmup;
  j["seed"] = cfg.seed;
  j["cross_cov"] = cfg.cross_cov == CrossCov::Paper ? "paper" : "standard";
  j["eviction"] = cfg.eviction == Eviction::Paper ? "paper" : "fifo";
  j["response"] = cfg.response_sample_mean ? "sample_mean" : "plugin";
  nlohmann::json clients = nlohmann::json::array();
  for (const ClientSpec& c : cfg.clients) {
    nlohmann::json cj;
    cj["chain"] = c.chain == ChainKind::Periodic ? "periodic" : "memoryless";
    if (c.chain == ChainKind::Periodic) {
      cj["period"] = c.period;
      cj["initial_state"] = std::string(1, static_cast<char>('A' + c.initial_state));
    } else {
      cj["q"] = c.q;
    }
    cj["query"] = query_to_string(c.query);
    if (c.query == QueryKind::CountRange) {
      cj["beta1"] = c.beta1.value_or(cfg.beta_lo());
      cj["beta2"] = c.beta2.value_or(cfg.beta_hi());
    }
    cj["alpha"] = c.alpha;
    clients.push_back(cj);
  }
  j["clients"] = clients;
  return j;
}

namespace {

std::unique_ptr<Scheduler> make_scheduler(const ExperimentConfig& cfg, RngStream& rng_init) {
  switch (cfg.scheduler) {
    case SchedulerKind::Proposed:
      return std::make_unique<ProposedScheduler>(cfg.n, cfg.clients.size(), cfg.dqn,
                                                 cfg.eviction, rng_init);
    case SchedulerKind::BenchmarkDrl:
      return std::make_unique<BenchmarkDrlScheduler>(cfg.n, cfg.m, cfg.clients.size(), cfg.dqn,
                                                     cfg.eviction, rng_init);
    case SchedulerKind::MonteCarlo:
      return std::make_unique<MonteCarloScheduler>(cfg.n);
  }
  throw std::logic_error("unknown scheduler kind");
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);
  const auto t_start = std::chrono::steady_clock::now();

  const WorldConfig wc = world_config(cfg);
  const CQPointSet pts = generate_cq_points(cfg.m, cfg.nprime);
  FilterState fs = make_filter_state(cfg.m, cfg.holt_varpi(), cfg.holt_varsigma());

  std::vector<ClientProcess> clients;
  for (std::size_t c = 0; c < cfg.clients.size(); ++c) {
    const ClientSpec& spec = cfg.clients[c];
    ClientProcess cp;
    cp.id = static_cast<int>(c + 1);
    cp.chain = spec.chain;
    cp.period = spec.period;
    cp.state = spec.initial_state;
    cp.q = spec.q;
    cp.alpha = spec.alpha;
    cp.query.kind = spec.query;
    cp.query.beta1 = spec.beta1.value_or(cfg.beta_lo());
    cp.query.beta2 = spec.beta2.value_or(cfg.beta_hi());
    clients.push_back(cp);
  }

  RngStream rng_dyn(seed, kStreamDynamics);
  RngStream rng_meas(seed, kStreamMeasurement);
  RngStream rng_channel(seed, kStreamChannel);
  RngStream rng_sched(seed, kStreamScheduler);
  RngStream rng_mse(seed, kStreamMse);
  RngStream rng_init(seed, kStreamWeightInit);
  RngStream rng_clients(seed, kStreamClients);
  RngStream rng_train(seed, kStreamTraining);

  std::unique_ptr<Scheduler> scheduler = make_scheduler(cfg, rng_init);

  WorldState world{0, wc.x0};
  RunOutput out;
  out.records.reserve(cfg.horizon);

  for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
    world = step_state(world, wc, rng_dyn);
    const Vector y = observe(world, wc, rng_meas);
    for (ClientProcess& cp : clients) advance_client(cp, rng_clients);

    StepContext ctx;
    ctx.t = t;
    ctx.y_full = &y;
    ctx.clients = &clients;
    ctx.filter = &fs;
    ctx.pts = &pts;
    ctx.sigma_v1 = &wc.sigma_v1;
    ctx.sigma_v2 = &wc.sigma_v2;
    ctx.h = &wc.h;
    ctx.mu = cfg.mu;
    ctx.mse_samples = cfg.mse_samples;
    ctx.cross_cov = cfg.cross_cov;
    ctx.response_sample_mean = cfg.response_sample_mean;
    ctx.rng_channel = &rng_channel;
    ctx.rng_sched = &rng_sched;
    ctx.rng_mse = &rng_mse;
    ctx.rng_train = &rng_train;

    StepResult sr;
    try {
      sr = scheduler->step(ctx);
    } catch (const std::exception& e) {
      throw std::runtime_error("step " + std::to_string(t) + ": " + e.what());
    }

    RunRecord rec;
    rec.t = t;
    rec.action = sr.action;
    rec.transmitted = sr.transmitted;
    rec.erased = sr.erased;
    rec.reward = sr.reward;
    rec.trace_pri = sr.trace_pri;
    rec.trace_pos = sr.trace_pos;
    rec.warmup = t <= cfg.warmup;
    rec.clients.resize(clients.size());
    for (std::size_t c = 0; c < clients.size(); ++c) {
      rec.clients[c].queried = sr.clients[c].queried;
      if (!sr.clients[c].queried) continue;
      rec.clients[c].mse = sr.clients[c].mse;
      QueryEvent ev;
      ev.t = t;
      ev.client = clients[c].id;
      ev.mse = sr.clients[c].mse;
      if (clients[c].query.kind != QueryKind::CurrentState) {
        rec.clients[c].ztrue = eval_query_scalar(clients[c].query, world.x);
        rec.clients[c].zhat = sr.clients[c].response.at(0);
        ev.ztrue = rec.clients[c].ztrue;
        ev.zhat = rec.clients[c].zhat;
      }
      out.events.push_back(ev);
    }
    out.records.push_back(std::move(rec));
  }

  out.summary = summarize(out.records, cfg.n + 1);
  out.summary.seed = seed;
  out.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

double quantile_sorted(const Vector& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty set");
  if (sorted.size() == 1) return sorted[0];
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

RunSummary summarize(const std::vector<RunRecord>& records, std::size_t action_count) {
  RunSummary s;
  s.asf.assign(action_count, 0.0);
  std::size_t eval_steps = 0;
  std::size_t n_clients = records.empty() ? 0 : records.front().clients.size();
  std::vector<Vector> mses(n_clients);
  for (const RunRecord& r : records) {
    if (r.warmup) continue;
    ++eval_steps;
    s.asf.at(r.action) += 1.0;
    if (r.transmitted) ++s.transmissions;
    s.total_reward += r.reward;
    for (std::size_t c = 0; c < r.clients.size(); ++c)
      if (r.clients[c].queried && r.clients[c].mse) mses[c].push_back(*r.clients[c].mse);
  }
  if (eval_steps == 0) throw std::invalid_argument("summarize: no records after warm-up");
  for (double& a : s.asf) a /= static_cast<double>(eval_steps);
  s.per_client.resize(n_clients);
  for (std::size_t c = 0; c < n_clients; ++c) {
    s.per_client[c].queries = mses[c].size();
    if (!mses[c].empty()) {
      std::sort(mses[c].begin(), mses[c].end());
      s.per_client[c].median_mse = quantile_sorted(mses[c], 0.5);
      s.per_client[c].q1 = quantile_sorted(mses[c], 0.25);
      s.per_client[c].q3 = quantile_sorted(mses[c], 0.75);
    }
  }
  return s;
}

void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records,
                       std::size_t n_clients) {
  os << "t,action,transmitted,erased,reward,trace_pri,trace_pos";
  for (std::size_t c = 1; c <= n_clients; ++c)
    os << ",queried_" << c << ",mse_" << c << ",ztrue_" << c << ",zhat_" << c;
  os << "\n";
  for (const RunRecord& r : records) {
    os << r.t << ',' << r.action << ',' << (r.transmitted ? 1 : 0) << ',' << (r.erased ? 1 : 0)
       << ',' << fmt_double(r.reward) << ',' << fmt_double(r.trace_pri) << ','
       << fmt_double(r.trace_pos);
    for (const ClientRecord& c : r.clients) {
      os << ',' << (c.queried ? 1 : 0) << ',';
      if (c.mse) os << fmt_double(*c.mse);
      os << ',';
      if (c.ztrue) os << fmt_double(*c.ztrue);
      os << ',';
      if (c.zhat) os << fmt_double(*c.zhat);
    }
    os << "\n";
  }
}

void write_events_csv(std::ostream& os, const std::vector<QueryEvent>& events) {
  os << "t,client,z_true,z_hat,mse\n";
  for (const QueryEvent& e : events) {
    os << e.t << ',' << e.client << ',';
    if (e.ztrue) os << fmt_double(*e.ztrue);
    os << ',';
    if (e.zhat) os << fmt_double(*e.zhat);
    os << ',' << fmt_double(e.mse) << "\n";
  }
}

nlohmann::json summary_to_json(const RunSummary& s, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["asf"] = s.asf;
  j["transmissions"] = s.transmissions;
  nlohmann::json per_client = nlohmann::json::array();
  for (const PerClientSummary& c : s.per_client) {
    nlohmann::json cj;
    cj["queries"] = c.queries;
    cj["median_mse"] = c.median_mse ? nlohmann::json(*c.median_mse) : nlohmann::json();
    cj["q1"] = c.q1 ? nlohmann::json(*c.q1) : nlohmann::json();
    cj["q3"] = c.q3 ? nlohmann::json(*c.q3) : nlohmann::json();
    per_client.push_back(cj);
  }
  j["per_client"] = per_client;
  j["total_reward"] = s.total_reward;
  j["seed"] = s.seed;
  j["wall_seconds"] = s.wall_seconds;
  j["config_echo"] = config_to_json(cfg);
  return j;
}

std::vector<RunOutput> run_replications(const ExperimentConfig& cfg, std::uint64_t base_seed,
                                        std::size_t k) {
  std::vector<RunOutput> outs(k);
  std::vector<std::thread> workers;
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 4;
  const std::size_t pool = std::min(k, hw);
  std::vector<std::exception_ptr> errors(k);
  for (std::size_t w = 0; w < pool; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < k; i += pool) {
        try {
          outs[i] = run_experiment(cfg, derive_replicate_seed(base_seed, i));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : workers) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return outs;
}

namespace {

nlohmann::json med_iqr(Vector values) {
  std::sort(values.begin(), values.end());
  nlohmann::json j;
  j["median"] = quantile_sorted(values, 0.5);
  j["q1"] = quantile_sorted(values, 0.25);
  j["q3"] = quantile_sorted(values, 0.75);
  return j;
}

}  // namespace

nlohmann::json aggregate_to_json(const std::vector<RunOutput>& runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
  nlohmann::json j;
  nlohmann::json seeds = nlohmann::json::array();
  Vector tx, reward;
  for (const RunOutput& r : runs) {
    seeds.push_back(r.summary.seed);
    tx.push_back(static_cast<double>(r.summary.transmissions));
    reward.push_back(r.summary.total_reward);
  }
  j["seeds"] = seeds;
  j["replications"] = runs.size();
  j["transmissions"] = med_iqr(tx);
  j["total_reward"] = med_iqr(reward);

  const std::size_t actions = runs.front().summary.asf.size();
  nlohmann::json asf = nlohmann::json::array();
  for (std::size_t a = 0; a < actions; ++a) {
    Vector v;
    for (const RunOutput& r : runs) v.push_back(r.summary.asf[a]);
    std::sort(v.begin(), v.end());
    asf.push_back(quantile_sorted(v, 0.5));
  }
  j["asf_median"] = asf;

  const std::size_t n_clients = runs.front().summary.per_client.size();
  nlohmann::json per_client = nlohmann::json::array();
  for (std::size_t c = 0; c < n_clients; ++c) {
    Vector med, queries;
    for (const RunOutput& r : runs) {
      if (r.summary.per_client[c].median_mse) med.push_back(*r.summary.per_client[c].median_mse);
      queries.push_back(static_cast<double>(r.summary.per_client[c].queries));
    }
    nlohmann::json cj;
    cj["queries"] = med_iqr(queries);
    cj["median_mse"] = med.empty() ? nlohmann::json() : med_iqr(med);
    per_client.push_back(cj);
  }
  j["per_client"] = per_client;
  return j;
}

}  // namespace gos
