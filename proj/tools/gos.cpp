// gos — goal-oriented sensor-scheduling simulator CLI.
//   gos run        --config F --seed S [--seeds K] --out DIR
//   gos cqpoints   --dim M --order NPRIME
//   gos complexity --n N --m M --c C --s S --nprime NP
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gos/complexity.hpp"
#include "gos/cqpoints.hpp"
#include "gos/harness.hpp"
#include "gos/kernels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_run_output(const fs::path& dir, const gos::RunOutput& run,
                      const gos::ExperimentConfig& cfg) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "records.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write records.csv");
    gos::write_records_csv(out, run.records, cfg.clients.size());
  }
  {
    std::ofstream out(dir / "events.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write events.csv");
    gos::write_events_csv(out, run.events);
  }
  write_file(dir / "summary.json", gos::summary_to_json(run.summary, cfg).dump(2) + "\n");
}

int cmd_run(const std::string& config_path, std::uint64_t seed, bool seed_given,
            std::size_t seeds, const std::string& out_dir) {
  gos::ExperimentConfig cfg =
      config_path.empty() ? gos::config_from_json(json::object()) : gos::load_config(config_path);
  const std::uint64_t base_seed = seed_given ? seed : cfg.seed;
  const fs::path dir(out_dir);
  if (seeds <= 1) {
    const gos::RunOutput run = gos::run_experiment(cfg, base_seed);
    write_run_output(dir, run, cfg);
    std::cout << "wrote " << (dir / "summary.json").string() << " (transmissions "
              << run.summary.transmissions << ", kernels " << gos::kernels::active_name()
              << ")\n";
    return 0;
  }
  const std::vector<gos::RunOutput> runs = gos::run_replications(cfg, base_seed, seeds);
  for (const gos::RunOutput& run : runs)
    write_run_output(dir / ("seed_" + std::to_string(run.summary.seed)), run, cfg);
  fs::create_directories(dir);
  write_file(dir / "aggregate.json", gos::aggregate_to_json(runs).dump(2) + "\n");
  std::cout << "wrote " << (dir / "aggregate.json").string() << " (" << seeds
            << " replications)\n";
  return 0;
}

int cmd_cqpoints(std::size_t dim, std::size_t order) {
  const gos::CQPointSet set = gos::generate_cq_points(dim, order);
  json j;
  j["M"] = set.dim;
  j["nprime"] = set.order;
  j["weights"] = set.weights;
  json pts = json::array();
  for (std::size_t i = 0; i < set.count(); ++i)
    pts.push_back(gos::Vector(set.points.row(i), set.points.row(i) + set.dim));
  j["points"] = pts;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_complexity(long long n, long long m, long long c, long long s, long long nprime) {
  const gos::ComplexityBounds prop = gos::proposed_bounds(n, c);
  const gos::ComplexityBounds bench = gos::benchmark_bounds(n, m, c);
  const gos::ComplexityBounds mc = gos::montecarlo_bounds(n, m, c, s, nprime);
  json j;
  j["params"] = {{"N", n}, {"M", m}, {"C", c}, {"S", s}, {"nprime", nprime}};
  j["proposed"] = {prop.lower, prop.upper};
  j["benchmark_drl"] = {bench.lower, bench.upper};
  j["montecarlo"] = {mc.lower, mc.upper};
  std::cout << j.dump() << "\n";
  std::printf("%-28s %20s %20s\n", "scheduler", "lower", "upper");
  std::printf("%-28s %20lld %20lld\n", "proposed", static_cast<long long>(prop.lower),
              static_cast<long long>(prop.upper));
  std::printf("%-28s %20lld %20lld\n", "benchmark_drl", static_cast<long long>(bench.lower),
              static_cast<long long>(bench.upper));
  std::printf("%-28s %20lld %20lld\n", "montecarlo", static_cast<long long>(mc.lower),
              static_cast<long long>(mc.upper));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goal-oriented sensor-scheduling simulator"};
  app.require_subcommand(1);

  std::string kernels_mode = "auto";
  app.add_option("--kernels", kernels_mode, "kernel variant: auto, scalar, avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  auto* run = app.add_subcommand("run", "run an experiment");
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  run->add_option("--config", config_path, "JSON config file (defaults when omitted)")
      ->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "master seed (overrides config)");
  run->add_option("--seeds", seeds, "number of parallel replications")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "output directory")->required();

  auto* cq = app.add_subcommand("cqpoints", "emit a cubature-quadrature point set as JSON");
  std::size_t dim = 0, order = 0;
  cq->add_option("--dim", dim, "state dimension M")->required()->check(CLI::PositiveNumber);
  cq->add_option("--order", order, "quadrature order n'")->required()->check(CLI::PositiveNumber);

  auto* cx = app.add_subcommand("complexity", "per-decision operation-count bounds");
  long long cn = 20, cm = 20, cc = 2, cs = 100, cnp = 2;
  cx->add_option("--n", cn, "number of sensors N")->required();
  cx->add_option("--m", cm, "state dimension M")->required();
  cx->add_option("--c", cc, "number of clients C")->required();
  cx->add_option("--s", cs, "Monte Carlo samples S")->required();
  cx->add_option("--nprime", cnp, "quadrature order n'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (kernels_mode == "scalar") {
    gos::kernels::select(gos::kernels::Isa::Scalar);
  } else if (kernels_mode == "avx2") {
    if (!gos::kernels::select(gos::kernels::Isa::Avx2)) {
      std::cerr << "error: avx2 kernels unavailable on this machine\n";
      return 1;
    }
  }

  try {
    if (run->parsed()) return cmd_run(config_path, seed, seed_opt->count() > 0, seeds, out_dir);
    if (cq->parsed()) return cmd_cqpoints(dim, order);
    if (cx->parsed()) return cmd_complexity(cn, cm, cc, cs, cnp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
