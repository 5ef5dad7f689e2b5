#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "onegan/harness/config.hpp"
#include "onegan/hermite.hpp"
#include "onegan/stationarity.hpp"

namespace onegan {

struct CellSummary {
  int d = 0;
  long n = 0;
  int trials_done = 0;      // successful trials aggregated
  double mean_rec_err = 0.0;
  double std_rec_err = 0.0;  // population standard deviation over trials
  double mean_wall_ms = 0.0;
};

struct RunArtifacts {
  std::vector<CellSummary> cells;
  std::vector<std::string> trajectory_files;
  std::vector<std::string> final_files;
  std::string summary_file;
  std::vector<std::string> failures;  // one "d=.. n=.. trial=..: reason" per failed trial
};

// Ground truth for output dimension d, derived from the master seed only, so
// every trial of a cell shares it.
GroundTruth make_ground_truth(const ExperimentConfig& cfg, int d, std::uint64_t master_seed);

// n observations phi(A* z) with latents seeded by `seed`.
Matrix make_observations(const GroundTruth& truth, const ActivationSpec& act, long n,
                         std::uint64_t seed);

// Runs every (d, n) cell of the config, `trials` runs each, scheduled on
// `threads` workers. Each trial derives its own seeds from `master_seed`, so
// results do not depend on the worker count. Writes one trajectory CSV per
// trial, a final-parameter file per trial, and summary.csv. Failed trials are
// recorded and skipped by the aggregation.
RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                            std::uint64_t master_seed, int threads = 1);

struct CertifyRow {
  std::string source;
  double eps_feas = 0.0;
  double eps_grad = 0.0;
  double eps_curv = 0.0;
  double fosp_eps = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Certification chain over every final_a_*.csv a previous run left in `dir`.
// `master_seed` must match that run so the reconstructed ground truth does.
std::vector<CertifyRow> certify_directory(const ExperimentConfig& cfg, const std::string& dir,
                                          std::uint64_t master_seed);
void write_certify_report(const std::string& path, const std::vector<CertifyRow>& rows);

struct KernelCheckRow {
  double alpha = 1.0;
  double beta = 1.0;
  double rho = 0.0;
  double predicted = 0.0;  // truncated Hermite kernel
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double zscore = 0.0;
};

// Monte Carlo cross-check of the Hermite kernel on a (scale pair) x rho grid.
std::vector<KernelCheckRow> run_kernel_check(const ActivationSpec& act, int degree,
                                             const std::vector<double>& rhos,
                                             const std::vector<std::pair<double, double>>& scales,
                                             long samples, std::uint64_t seed);
void write_kernel_check(const std::string& path, const std::vector<KernelCheckRow>& rows);

}  // namespace onegan
