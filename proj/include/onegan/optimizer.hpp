#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "onegan/losses.hpp"

namespace onegan {

enum class Stage { Marginal, Joint, Both };

// Settings of the alternating descent-ascent loop.  eta_v is the
// discriminator step; 1 lands exactly on the inner maximizer of the
// regularized game, which is what the update uses.
struct TrainConfig {
  double eta = 0.25;
  double eta_v = 1.0;
  int iterations = 1000;
  int batch_m = 1000;     // fresh latents per iteration
  double noise_scale = -1.0;  // gradient perturbation radius; <0 means 0.01*eta
  std::uint64_t seed = 1;
  Stage stage = Stage::Joint;
  double stop_tol = 0.0;  // early stop when g stays below this; 0 disables
  int k = 0;              // latent dimension of the trained generator; 0 matches d

  double effective_noise() const { return noise_scale < 0.0 ? 0.01 * eta : noise_scale; }
};

struct TrajectoryRow {
  int iter = 0;
  double g_emp = 0.0;
  double rec_err = 0.0;    // ||A A' - Z*||_F; NaN when no ground truth given
  double grad_norm = 0.0;
  std::int64_t wall_ms = 0;
};

struct TrajectoryRecord {
  std::vector<TrajectoryRow> rows;
  Matrix final_a;
  double final_rec_err = 0.0;
  double max_feas_violation = 0.0;  // max over iterations of |(AA')_ii - t_i^2|
  int resampled_rows = 0;           // zero-row projection fallbacks taken
  int stopped_at = 0;               // iterations actually run
};

// Rescale each row of `a` to the corresponding target norm.  Rows already on
// target (within 1e-12 relative) pass through unchanged, which makes the map
// idempotent.  A zero row cannot be scaled; with an rng a uniformly random
// direction at target norm is substituted and counted, without one it throws.
Matrix project_rows(const Matrix& a, const Vector& targets, Rng* rng = nullptr,
                    int* resampled = nullptr);

// First stage: recover the row norms of the planted generator by alternating
// ascent in the linear discriminator and descent in the per-row scale.
struct MarginalConfig {
  double eta = 2.0;
  int iterations = 20000;
  double tol = 1e-9;            // residual ||grad_v||_inf required at exit
  int quadrature_nodes = 200;
};

struct MarginalResult {
  Vector norms;
  std::vector<TrajectoryRow> rows;  // g_emp = 0.5||v||^2, rec_err vs targets
  int stopped_at = 0;
};

MarginalResult learn_marginal_norms(const Matrix& samples,
                                    const ActivationSpec& act,
                                    const MarginalConfig& cfg);

// Generator-side expectation matched by the first stage and its derivative in
// alpha: E_z[phi_tilde(alpha z)] with phi_tilde = relu(phi(.) - C) for
// odd-plus-constant activations and phi itself otherwise.
double marginal_mean(const ActivationSpec& act, double alpha, int nodes = 200);
double marginal_mean_d1(const ActivationSpec& act, double alpha, int nodes = 200);

// Second stage: online alternating descent-ascent on the second-moment game.
// Per iteration: draw a fresh latent batch, take the exact ascent step in V,
// perturb the A-gradient with `noise_scale` times a uniform direction on the
// Frobenius sphere, step, and project back to the row-norm constraint set.
// `z_star` is only used for the recovery-error column of the trajectory.
TrajectoryRecord sgda_run(const Matrix& samples, const ActivationSpec& act,
                          const TrainConfig& cfg, const Vector& norm_targets,
                          const Matrix* z_star = nullptr);

}  // namespace onegan
