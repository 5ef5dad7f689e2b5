#include "onegan/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace onegan {

Matrix project_rows(const Matrix& a, const Vector& targets, Rng* rng, int* resampled) {
  if (targets.size() != a.rows())
    throw std::invalid_argument("project_rows: one target per row required");
  Matrix out = a;
  for (int i = 0; i < a.rows(); ++i) {
    const double t = targets[i];
    if (!(t > 0.0)) throw std::invalid_argument("project_rows: targets must be positive");
    const double norm = a.row(i).norm();
    if (norm <= 1e-300) {
      if (rng == nullptr)
        throw std::invalid_argument("project_rows: zero row and no generator for fallback");
      out.row(i) = t * rng->sphere_vector(static_cast<int>(a.cols())).transpose();
      if (resampled != nullptr) ++*resampled;
      continue;
    }
    const double scale = t / norm;
    if (std::abs(scale - 1.0) <= 1e-12) continue;  // keeps projection idempotent
    out.row(i) *= scale;
  }
  return out;
}

namespace {

// Gauss-Legendre rule on [-1, 1] from the Legendre Jacobi matrix; weights are
// twice the squared first eigenvector components.
void legendre_rule(int n, Vector* nodes, Vector* weights) {
  const Vector diag = Vector::Zero(n);
  Vector sub(std::max(0, n - 1));
  for (int k = 1; k < n; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(diag, sub);
  *nodes = solver.eigenvalues();
  weights->resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    (*weights)[i] = 2.0 * v0 * v0;
  }
}

// Generator-side mean E_z[phi_tilde(alpha z)] and its alpha-derivative under
// the stage-one discriminator: phi_tilde = relu(phi(.) - C) for
// odd-plus-constant activations, plain phi otherwise.  Both paths kink at
// z = 0 (the rectifier boundary sits exactly there, as does the kink of the
// piecewise-linear activations), which stalls a Gauss-Hermite rule.  The
// Gaussian density is instead folded into panelwise Gauss-Legendre rules on
// [0, 12], refined toward the kink; the rectified integrand vanishes on the
// negative half-line, the plain one picks it up through the symmetry of the
// density.  Beyond 12 the density leaves less than 1e-31 of any integrand
// that grows at most linearly.
struct MarginalCurve {
  const ActivationSpec& act;
  bool rectified;
  Vector xs;  // nodes on the positive half-line
  Vector ws;  // Gauss-Legendre weights with the normal density folded in

  MarginalCurve(const ActivationSpec& a, int node_budget, bool rect)
      : act(a), rectified(rect) {
    if (node_budget < 1)
      throw std::invalid_argument("marginal curve: node budget must be positive");
    static constexpr double edges[] = {0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 12.0};
    constexpr int panels = 8;
    const int per_panel = std::max(10, node_budget / panels);
    Vector ref_x, ref_w;
    legendre_rule(per_panel, &ref_x, &ref_w);
    xs.resize(panels * per_panel);
    ws.resize(panels * per_panel);
    constexpr double inv_sqrt_2pi = 0.3989422804014326779;
    int k = 0;
    for (int p = 0; p < panels; ++p) {
      const double mid = 0.5 * (edges[p] + edges[p + 1]);
      const double half = 0.5 * (edges[p + 1] - edges[p]);
      for (int i = 0; i < per_panel; ++i, ++k) {
        const double x = mid + half * ref_x[i];
        xs[k] = x;
        ws[k] = half * ref_w[i] * inv_sqrt_2pi * std::exp(-0.5 * x * x);
      }
    }
  }

  double mean(double alpha) const {
    double acc = 0.0;
    for (int i = 0; i < xs.size(); ++i) {
      const double u = alpha * xs[i];
      if (rectified)
        acc += ws[i] * std::max(0.0, act.value(u) - act.bias_constant);
      else
        acc += ws[i] * (act.value(u) + act.value(-u));
    }
    return acc;
  }

  double mean_d1(double alpha) const {
    double acc = 0.0;
    for (int i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      const double u = alpha * x;
      if (rectified) {
        if (act.value(u) - act.bias_constant > 0.0) acc += ws[i] * act.d1(u) * x;
      } else {
        acc += ws[i] * (act.d1(u) - act.d1(-u)) * x;
      }
    }
    return acc;
  }
};

}  // namespace

double marginal_mean(const ActivationSpec& act, double alpha, int nodes) {
  return MarginalCurve(act, nodes, act.odd_plus_constant).mean(alpha);
}

double marginal_mean_d1(const ActivationSpec& act, double alpha, int nodes) {
  return MarginalCurve(act, nodes, act.odd_plus_constant).mean_d1(alpha);
}

MarginalResult learn_marginal_norms(const Matrix& samples, const ActivationSpec& act,
                                    const MarginalConfig& cfg) {
  const int d = static_cast<int>(samples.rows());
  const double n = double(samples.cols());
  if (d < 1 || n < 1) throw std::invalid_argument("learn_marginal_norms: empty samples");
  if (!act.odd_plus_constant && !act.positive_even_part)
    throw std::invalid_argument("learn_marginal_norms: activation lacks a usable odd or even part");

  const bool rectified = act.odd_plus_constant;
  Vector target(d);
  if (rectified)
    target = (samples.array() - act.bias_constant).max(0.0).matrix().rowwise().sum() / n;
  else
    target = samples.rowwise().sum() / n;
  for (int i = 0; i < d; ++i)
    if (!(target[i] > 0.0))
      throw std::invalid_argument(
          "learn_marginal_norms: degenerate observations (nonpositive rectified mean)");

  const MarginalCurve curve(act, cfg.quadrature_nodes, rectified);

  MarginalResult res;
  res.norms = Vector::Ones(d);
  Vector v = Vector::Zero(d);
  const auto start = std::chrono::steady_clock::now();
  int t = 0;
  for (t = 1; t <= cfg.iterations; ++t) {
    Vector grad_alpha(d);
    for (int i = 0; i < d; ++i) {
      v[i] = target[i] - curve.mean(res.norms[i]);  // exact ascent step
      grad_alpha[i] = -v[i] * curve.mean_d1(res.norms[i]);
      res.norms[i] = std::clamp(res.norms[i] - cfg.eta * grad_alpha[i], 1e-6, 64.0);
    }
    const auto now = std::chrono::steady_clock::now();
    TrajectoryRow row;
    row.iter = t;
    row.g_emp = 0.5 * v.squaredNorm();
    row.rec_err = std::numeric_limits<double>::quiet_NaN();
    row.grad_norm = grad_alpha.norm();
    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - start).count();
    res.rows.push_back(row);
    if (v.lpNorm<Eigen::Infinity>() <= cfg.tol) break;
  }
  res.stopped_at = std::min(t, cfg.iterations);
  const double residual =
      (target - Vector::NullaryExpr(d, [&](Eigen::Index i) {
         return curve.mean(res.norms[i]);
       })).lpNorm<Eigen::Infinity>();
  if (residual > std::max(cfg.tol, 1e-6)) {
    std::ostringstream msg;
    msg << "learn_marginal_norms: no convergence in " << cfg.iterations
        << " iterations, residual " << residual;
    throw std::runtime_error(msg.str());
  }
  return res;
}

TrajectoryRecord sgda_run(const Matrix& samples, const ActivationSpec& act,
                          const TrainConfig& cfg, const Vector& norm_targets,
                          const Matrix* z_star) {
  const int d = static_cast<int>(samples.rows());
  if (norm_targets.size() != d)
    throw std::invalid_argument("sgda_run: one norm target per output coordinate");
  if (cfg.k < 0 || cfg.iterations < 1 || cfg.batch_m < 1)
    throw std::invalid_argument("sgda_run: iterations and batch size must be positive, k nonnegative");
  if (cfg.eta_v != 1.0)
    throw std::invalid_argument("sgda_run: the ascent step is exact; eta_v must stay 1");
  const int k = cfg.k > 0 ? cfg.k : d;

  const EmpiricalCov cov = empirical_cov(samples);
  const double r = cfg.effective_noise();
  Rng rng(cfg.seed);

  // Rows start uniform on the sphere at their target norms.
  Matrix a(d, k);
  for (int i = 0; i < d; ++i)
    a.row(i) = norm_targets[i] * rng.sphere_vector(k).transpose();

  TrajectoryRecord rec;
  rec.rows.reserve(cfg.iterations);
  const auto start = std::chrono::steady_clock::now();
  int below_tol_streak = 0;
  int t = 0;
  const double m = double(cfg.batch_m);
  for (t = 1; t <= cfg.iterations; ++t) {
    const Matrix z = sample_latent(k, cfg.batch_m, rng);
    const Matrix u = a * z;
    Matrix p = u;
    act.value_inplace(p);
    Matrix resid(d, d);
    resid.noalias() = p * p.transpose() / m;
    resid -= cov.x_n;  // exact ascent: V_t = S_bar - X_n
    const double g = 0.5 * resid.squaredNorm();
    const Matrix q = act.d1_of(u);
    Matrix grad(d, k);
    grad.noalias() = (q.array() * (resid * p).array()).matrix() * z.transpose();
    grad *= 2.0 / m;
    const double grad_norm = grad.norm();
    if (!std::isfinite(g) || !std::isfinite(grad_norm)) {
      std::ostringstream msg;
      msg << "sgda_run: diverged at iteration " << t;
      throw std::runtime_error(msg.str());
    }

    Matrix step = grad;
    if (r > 0.0) step += r * rng.sphere_matrix(d, k);
    else rng.sphere_matrix(d, k);  // keep the stream independent of r
    a = project_rows(a - cfg.eta * step, norm_targets, &rng, &rec.resampled_rows);

    const Matrix gram = a * a.transpose();
    double feas = 0.0;
    for (int i = 0; i < d; ++i)
      feas = std::max(feas, std::abs(gram(i, i) - norm_targets[i] * norm_targets[i]));
    rec.max_feas_violation = std::max(rec.max_feas_violation, feas);

    TrajectoryRow row;
    row.iter = t;
    row.g_emp = g;
    row.rec_err = z_star != nullptr ? (gram - *z_star).norm()
                                    : std::numeric_limits<double>::quiet_NaN();
    row.grad_norm = grad_norm;
    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    rec.rows.push_back(row);

    if (cfg.stop_tol > 0.0) {
      below_tol_streak = g < cfg.stop_tol ? below_tol_streak + 1 : 0;
      if (below_tol_streak >= 50) break;
    }
  }
  rec.stopped_at = std::min(t, cfg.iterations);
  rec.final_a = a;
  rec.final_rec_err = z_star != nullptr
                          ? (a * a.transpose() - *z_star).norm()
                          : std::numeric_limits<double>::quiet_NaN();
  return rec;
}

}  // namespace onegan
