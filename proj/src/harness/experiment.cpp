#include "onegan/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "onegan/harness/csv.hpp"
#include "onegan/optimizer.hpp"

namespace onegan {

namespace fs = std::filesystem;

GroundTruth make_ground_truth(const ExperimentConfig& cfg, int d, std::uint64_t master_seed) {
  if (cfg.truth == TruthMode::Explicit) return GroundTruth::from_matrix(cfg.a_star);
  Rng rng(derive_seed(master_seed, 0, static_cast<std::uint64_t>(d)));
  const int k0 = cfg.k0 > 0 ? cfg.k0 : d;
  Matrix a(d, k0);
  for (int i = 0; i < d; ++i) {
    const double norm = cfg.norm_min + (cfg.norm_max - cfg.norm_min) * rng.uniform();
    a.row(i) = norm * rng.sphere_vector(k0).transpose();
  }
  return GroundTruth::from_matrix(a);
}

Matrix make_observations(const GroundTruth& truth, const ActivationSpec& act, long n,
                         std::uint64_t seed) {
  Rng rng(seed);
  const Matrix latents = rng.normal_matrix(static_cast<int>(truth.a_star.cols()),
                                           static_cast<int>(n));
  GeneratorParams params;
  params.a = truth.a_star;
  return generate(params, latents, act);
}

namespace {

struct TrialOutput {
  std::vector<TrajectoryRow> rows;
  Matrix final_matrix;      // trained A, or learned norms as a column
  bool final_is_generator = false;
  double final_rec = std::numeric_limits<double>::quiet_NaN();
  std::int64_t wall_ms = 0;
  bool failed = false;
  std::string error;
};

TrialOutput run_one_trial(const ExperimentConfig& cfg, const GroundTruth& truth, long n,
                          std::uint64_t cell_index, int trial, std::uint64_t master_seed) {
  TrialOutput out;
  const std::uint64_t obs_seed = derive_seed(master_seed, 2 * cell_index + 1,
                                             static_cast<std::uint64_t>(trial) + 1);
  const std::uint64_t train_seed = derive_seed(master_seed, 2 * cell_index + 2,
                                               static_cast<std::uint64_t>(trial) + 1);
  const Matrix x = make_observations(truth, cfg.activation, n, obs_seed);
  const Matrix z_star = truth.a_star * truth.a_star.transpose();

  Vector targets = truth.row_norms;
  if (cfg.stage == Stage::Marginal || cfg.stage == Stage::Both) {
    const MarginalResult marg = learn_marginal_norms(x, cfg.activation, cfg.marginal);
    if (cfg.stage == Stage::Marginal) {
      out.rows = marg.rows;
      out.final_matrix = marg.norms;
      out.final_rec = (marg.norms - truth.row_norms).lpNorm<Eigen::Infinity>();
      out.wall_ms = marg.rows.empty() ? 0 : marg.rows.back().wall_ms;
      return out;
    }
    targets = marg.norms;
  }

  TrainConfig tc = cfg.train;
  tc.seed = train_seed;
  tc.k = cfg.k > 0 ? cfg.k : static_cast<int>(truth.a_star.rows());
  if (tc.batch_m == 0) tc.batch_m = static_cast<int>(n);
  const TrajectoryRecord rec = sgda_run(x, cfg.activation, tc, targets, &z_star);
  out.rows = rec.rows;
  out.final_matrix = rec.final_a;
  out.final_is_generator = true;
  out.final_rec = rec.final_rec_err;
  out.wall_ms = rec.rows.empty() ? 0 : rec.rows.back().wall_ms;
  return out;
}

void write_trajectory(const std::string& path, int trial, const std::vector<TrajectoryRow>& rows) {
  CsvTable t;
  t.header = {"trial_id", "iter", "g_emp", "rec_err", "grad_norm", "wall_ms"};
  t.rows.reserve(rows.size());
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(trial), std::to_string(r.iter), format_double(r.g_emp),
                      format_double(r.rec_err), format_double(r.grad_norm),
                      std::to_string(r.wall_ms)});
  write_csv(path, t);
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  CsvTable t;
  for (int j = 0; j < m.cols(); ++j) t.header.push_back("c" + std::to_string(j));
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < m.cols(); ++j) row.push_back(format_double(m(i, j)));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

Matrix read_matrix_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.rows.empty()) throw std::runtime_error("read_matrix_csv: no rows in " + path);
  Matrix m(static_cast<int>(t.rows.size()), static_cast<int>(t.header.size()));
  for (size_t i = 0; i < t.rows.size(); ++i)
    for (size_t j = 0; j < t.header.size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = parse_double(t.rows[i][j]);
  return m;
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                            std::uint64_t master_seed, int threads) {
  cfg.validate();
  fs::create_directories(out_dir);

  struct Task {
    int d_index;
    int n_index;
    int trial;
  };
  std::vector<Task> tasks;
  for (int di = 0; di < static_cast<int>(cfg.d_grid.size()); ++di)
    for (int ni = 0; ni < static_cast<int>(cfg.n_grid.size()); ++ni)
      for (int t = 0; t < cfg.trials; ++t) tasks.push_back({di, ni, t});

  std::vector<GroundTruth> truths;
  truths.reserve(cfg.d_grid.size());
  for (int d : cfg.d_grid) truths.push_back(make_ground_truth(cfg, d, master_seed));

  std::vector<TrialOutput> results(tasks.size());
  RunArtifacts artifacts;
  artifacts.trajectory_files.resize(tasks.size());
  artifacts.final_files.resize(tasks.size());

  const auto run_task = [&](size_t idx) {
    const Task& task = tasks[idx];
    const int d = cfg.d_grid[task.d_index];
    const long n = cfg.n_grid[task.n_index];
    const std::uint64_t cell =
        static_cast<std::uint64_t>(task.d_index) * cfg.n_grid.size() + task.n_index;
    TrialOutput& out = results[idx];
    try {
      out = run_one_trial(cfg, truths[task.d_index], n, cell, task.trial, master_seed);
      std::ostringstream stem;
      stem << "_d" << d << "_n" << n << "_trial" << task.trial << ".csv";
      const std::string traj = (fs::path(out_dir) / ("traj" + stem.str())).string();
      const std::string fin =
          (fs::path(out_dir) /
           ((out.final_is_generator ? "final_a" : "final_norms") + stem.str()))
              .string();
      write_trajectory(traj, task.trial, out.rows);
      write_matrix_csv(fin, out.final_matrix);
      artifacts.trajectory_files[idx] = traj;
      artifacts.final_files[idx] = fin;
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
    }
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  if (workers == 1) {
    for (size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) run_task(i);
      });
    for (auto& th : pool) th.join();
  }

  CsvTable summary;
  summary.header = {"d", "n", "trials", "mean_rec_err", "std_rec_err", "mean_wall_ms"};
  size_t idx = 0;
  for (int di = 0; di < static_cast<int>(cfg.d_grid.size()); ++di)
    for (int ni = 0; ni < static_cast<int>(cfg.n_grid.size()); ++ni) {
      CellSummary cell;
      cell.d = cfg.d_grid[di];
      cell.n = cfg.n_grid[ni];
      double sum = 0.0, sumsq = 0.0, wall = 0.0;
      for (int t = 0; t < cfg.trials; ++t, ++idx) {
        const TrialOutput& out = results[idx];
        if (out.failed) {
          std::ostringstream msg;
          msg << "d=" << cell.d << " n=" << cell.n << " trial=" << t << ": " << out.error;
          artifacts.failures.push_back(msg.str());
          continue;
        }
        ++cell.trials_done;
        sum += out.final_rec;
        sumsq += out.final_rec * out.final_rec;
        wall += static_cast<double>(out.wall_ms);
      }
      if (cell.trials_done > 0) {
        cell.mean_rec_err = sum / cell.trials_done;
        const double var =
            std::max(0.0, sumsq / cell.trials_done - cell.mean_rec_err * cell.mean_rec_err);
        cell.std_rec_err = std::sqrt(var);
        cell.mean_wall_ms = wall / cell.trials_done;
      }
      artifacts.cells.push_back(cell);
      summary.rows.push_back({std::to_string(cell.d), std::to_string(cell.n),
                              std::to_string(cell.trials_done), format_double(cell.mean_rec_err),
                              format_double(cell.std_rec_err), format_double(cell.mean_wall_ms)});
    }

  if (!artifacts.failures.empty() &&
      artifacts.failures.size() == tasks.size())
    throw std::runtime_error("run_experiment: every trial failed; first error: " +
                             artifacts.failures.front());

  artifacts.summary_file = (fs::path(out_dir) / "summary.csv").string();
  write_csv(artifacts.summary_file, summary);

  auto& traj = artifacts.trajectory_files;
  traj.erase(std::remove(traj.begin(), traj.end(), std::string()), traj.end());
  auto& fin = artifacts.final_files;
  fin.erase(std::remove(fin.begin(), fin.end(), std::string()), fin.end());
  return artifacts;
}

std::vector<CertifyRow> certify_directory(const ExperimentConfig& cfg, const std::string& dir,
                                          std::uint64_t master_seed) {
  const HermiteExpansion exp =
      expand_activation(cfg.activation, cfg.kernel_degree, cfg.kernel_nodes);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("final_a_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".csv")
      files.push_back(name);
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error("certify: no final_a_*.csv files in " + dir);

  std::vector<CertifyRow> rows;
  std::uint64_t probe_index = 0;
  for (const auto& name : files) {
    int d = 0, trial = 0;
    long n = 0;
    if (std::sscanf(name.c_str(), "final_a_d%d_n%ld_trial%d.csv", &d, &n, &trial) != 3)
      throw std::runtime_error("certify: unparseable file name " + name);
    const GroundTruth truth = make_ground_truth(cfg, d, master_seed);
    const Matrix a = read_matrix_csv((fs::path(dir) / name).string());
    if (a.rows() != d)
      throw std::runtime_error("certify: " + name + " does not match its own dimension tag");
    const Matrix z_star = truth.a_star * truth.a_star.transpose();
    CertifyRow row;
    row.source = name;
    const SospResidual sosp =
        sosp_residual(exp, a, z_star, truth.row_norms, 64,
                      derive_seed(master_seed, 0xCE, ++probe_index));
    const FospCertificate fosp = fosp_certificate(exp, a, z_star);
    const RecoveryCheck chk = recovery_bound_check(exp, a, z_star, fosp.eps);
    row.eps_feas = sosp.eps_feas;
    row.eps_grad = sosp.eps_grad;
    row.eps_curv = sosp.eps_curv;
    row.fosp_eps = fosp.eps;
    row.lhs = chk.lhs;
    row.rhs = chk.rhs;
    row.holds = chk.holds;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_certify_report(const std::string& path, const std::vector<CertifyRow>& rows) {
  CsvTable t;
  t.header = {"source", "eps_feas", "eps_grad", "eps_curv", "fosp_eps", "lhs", "rhs", "holds"};
  for (const auto& r : rows)
    t.rows.push_back({r.source, format_double(r.eps_feas), format_double(r.eps_grad),
                      format_double(r.eps_curv), format_double(r.fosp_eps), format_double(r.lhs),
                      format_double(r.rhs), r.holds ? "1" : "0"});
  write_csv(path, t);
}

std::vector<KernelCheckRow> run_kernel_check(const ActivationSpec& act, int degree,
                                             const std::vector<double>& rhos,
                                             const std::vector<std::pair<double, double>>& scales,
                                             long samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("run_kernel_check: need samples >= 2");
  const HermiteExpansion exp = expand_activation(act, degree, std::max(200, 2 * degree + 1));
  std::vector<KernelCheckRow> rows;
  std::uint64_t stream = 0;
  for (const auto& [alpha, beta] : scales)
    for (double rho : rhos) {
      Rng rng(derive_seed(seed, 0x4C, ++stream));
      const double mix = std::sqrt(std::max(0.0, 1.0 - rho * rho));
      double sum = 0.0, sumsq = 0.0;
      for (long s = 0; s < samples; ++s) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        const double prod = act.value(alpha * g1) * act.value(beta * (rho * g1 + mix * g2));
        sum += prod;
        sumsq += prod * prod;
      }
      KernelCheckRow row;
      row.alpha = alpha;
      row.beta = beta;
      row.rho = rho;
      row.predicted = nonunit_kernel(exp, alpha, beta, rho);
      row.mc_mean = sum / samples;
      const double var = std::max(0.0, sumsq / samples - row.mc_mean * row.mc_mean);
      row.mc_se = std::sqrt(var / samples);
      row.zscore = row.mc_se > 0.0 ? (row.predicted - row.mc_mean) / row.mc_se : 0.0;
      rows.push_back(row);
    }
  return rows;
}

void write_kernel_check(const std::string& path, const std::vector<KernelCheckRow>& rows) {
  CsvTable t;
  t.header = {"alpha", "beta", "rho", "predicted", "mc_mean", "mc_se", "zscore"};
  for (const auto& r : rows)
    t.rows.push_back({format_double(r.alpha), format_double(r.beta), format_double(r.rho),
                      format_double(r.predicted), format_double(r.mc_mean), format_double(r.mc_se),
                      format_double(r.zscore)});
  write_csv(path, t);
}

}  // namespace onegan
