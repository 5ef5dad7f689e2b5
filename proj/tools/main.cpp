#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "onegan/hardness.hpp"
#include "onegan/harness/config.hpp"
#include "onegan/harness/csv.hpp"
#include "onegan/harness/experiment.hpp"
#include "onegan/harness/plot.hpp"

namespace {

using namespace onegan;

std::uint64_t pick_seed(const ExperimentConfig& cfg, bool seed_set, std::uint64_t cli_seed) {
  return seed_set ? cli_seed : cfg.train.seed;
}

void print_summary(const RunArtifacts& artifacts) {
  for (const auto& cell : artifacts.cells)
    std::cout << "d=" << cell.d << " n=" << cell.n << " trials=" << cell.trials_done
              << " mean_rec_err=" << format_double(cell.mean_rec_err)
              << " std_rec_err=" << format_double(cell.std_rec_err) << "\n";
  for (const auto& failure : artifacts.failures) std::cerr << "trial failed: " << failure << "\n";
  std::cout << "summary: " << artifacts.summary_file << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-stage descent-ascent trainer for one-layer generators"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* copt = sub->add_option("--config", config_path, "experiment config file");
    if (needs_config) copt->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--threads", threads, "worker count");
  };

  auto* train = app.add_subcommand("train", "run the configured cells sequentially");
  add_common(train, true);

  auto* sweep = app.add_subcommand("sweep", "run the configured grid on a worker pool");
  add_common(sweep, true);

  auto* certify = app.add_subcommand("certify", "stationarity certificates for trained output");
  add_common(certify, true);

  auto* hardness =
      app.add_subcommand("hardness", "decide stationarity of a 3SAT-compiled min-max form");
  std::string cnf_path;
  hardness->add_option("cnf", cnf_path, "DIMACS CNF file with 3-literal clauses")->required();

  auto* kernel = app.add_subcommand("kernel-check", "Hermite kernel vs Monte Carlo diagnostics");
  add_common(kernel, true);

  auto* plot = app.add_subcommand("plot", "render summary.csv in --out as an SVG");
  plot->add_option("--out", out_dir, "directory holding summary.csv")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed() || sweep->parsed()) {
      const ExperimentConfig cfg = load_experiment_config(config_path);
      const RunArtifacts artifacts =
          run_experiment(cfg, out_dir, pick_seed(cfg, seed_set, seed), std::max(threads, 1));
      print_summary(artifacts);
    } else if (certify->parsed()) {
      const ExperimentConfig cfg = load_experiment_config(config_path);
      const auto rows = certify_directory(cfg, out_dir, pick_seed(cfg, seed_set, seed));
      const std::string report =
          (std::filesystem::path(out_dir) / "certify_report.csv").string();
      write_certify_report(report, rows);
      for (const auto& r : rows)
        std::cout << r.source << " fosp_eps=" << format_double(r.fosp_eps)
                  << " lhs=" << format_double(r.lhs) << " rhs=" << format_double(r.rhs)
                  << " holds=" << (r.holds ? 1 : 0) << "\n";
      std::cout << "report: " << report << "\n";
    } else if (hardness->parsed()) {
      const Sat3Instance sat = parse_dimacs_file(cnf_path);
      const MinMaxForm form = build_minmax(sat);
      const bool exists = stationary_exists_bruteforce(form);
      std::cout << "clauses=" << sat.clauses.size() << " vars=" << sat.num_vars
                << " stationary_point_exists=" << (exists ? 1 : 0) << "\n";
    } else if (kernel->parsed()) {
      const ExperimentConfig cfg = load_experiment_config(config_path);
      const std::vector<double> rhos = {-0.9, -0.7, -0.45, -0.2, 0.0, 0.2, 0.45, 0.7, 0.9};
      const std::vector<std::pair<double, double>> scales = {{1.0, 1.0}, {1.2, 0.8}, {0.9, 1.1}};
      const auto rows =
          run_kernel_check(cfg.activation, cfg.kernel_degree, rhos, scales,
                           cfg.kernel_mc_samples, pick_seed(cfg, seed_set, seed));
      std::filesystem::create_directories(out_dir);
      const std::string report =
          (std::filesystem::path(out_dir) / "kernel_check.csv").string();
      write_kernel_check(report, rows);
      double worst = 0.0;
      for (const auto& r : rows) worst = std::max(worst, std::abs(r.zscore));
      std::cout << "rows=" << rows.size() << " max_abs_zscore=" << format_double(worst)
                << " report=" << report << "\n";
    } else if (plot->parsed()) {
      const std::string summary =
          (std::filesystem::path(out_dir) / "summary.csv").string();
      const std::string svg = (std::filesystem::path(out_dir) / "summary.svg").string();
      write_sweep_plot(read_csv(summary), svg);
      std::cout << "plot: " << svg << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
