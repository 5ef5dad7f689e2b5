#include "onegan/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace onegan {

EmpiricalCov empirical_cov(const Matrix& samples) {
  if (samples.cols() < 1) throw std::invalid_argument("empirical_cov: empty sample set");
  EmpiricalCov cov;
  cov.n = samples.cols();
  cov.x_n = samples * samples.transpose() / double(cov.n);
  return cov;
}

BatchSecondMoment batch_second_moment(const Matrix& generated) {
  if (generated.cols() < 1)
    throw std::invalid_argument("batch_second_moment: empty batch");
  BatchSecondMoment m;
  m.m = generated.cols();
  m.s_bar = generated * generated.transpose() / double(m.m);
  return m;
}

F1Result f1_value_grad(const GeneratorParams& params, const Vector& v,
                       const Matrix& samples, const Matrix& z_batch,
                       const ActivationSpec& act) {
  const int d = params.d();
  if (samples.rows() != d || v.size() != d)
    throw std::invalid_argument("f1_value_grad: dimension mismatch");
  if (z_batch.rows() != params.k())
    throw std::invalid_argument("f1_value_grad: latent dimension mismatch");
  const double m = double(z_batch.cols());
  const double n = double(samples.cols());

  const Matrix u = params.a * z_batch;
  Matrix gen = u;
  act.value_inplace(gen);

  Vector data_mean(d), gen_mean(d);
  Matrix w;  // per-entry weight of dA in the generator-side gradient
  if (act.odd_plus_constant) {
    const double c = act.bias_constant;
    data_mean = (samples.array() - c).max(0.0).matrix().rowwise().sum() / n;
    gen_mean = (gen.array() - c).max(0.0).matrix().rowwise().sum() / m;
    // Subgradient 0 on the rectifier kink.
    w = ((gen.array() - c) > 0.0).cast<double>() * act.d1_of(u).array();
  } else {
    data_mean = samples.rowwise().sum() / n;
    gen_mean = gen.rowwise().sum() / m;
    w = act.d1_of(u);
  }

  F1Result out;
  out.value = v.dot(data_mean - gen_mean) - 0.5 * v.squaredNorm();
  out.grad_v = data_mean - gen_mean - v;
  out.grad_a = -(v.asDiagonal() * w) * z_batch.transpose() / m;
  return out;
}

double g_tilde_mn(const EmpiricalCov& cov, const BatchSecondMoment& moment) {
  if (cov.x_n.rows() != moment.s_bar.rows())
    throw std::invalid_argument("g_tilde_mn: dimension mismatch");
  return 0.5 * (cov.x_n - moment.s_bar).squaredNorm();
}

double g_tilde_mn(const GeneratorParams& params, const Matrix& z_batch,
                  const EmpiricalCov& cov, const ActivationSpec& act) {
  return g_tilde_mn(cov, batch_second_moment(generate(params, z_batch, act)));
}

Matrix optimal_v(const EmpiricalCov& cov, const BatchSecondMoment& moment) {
  if (cov.x_n.rows() != moment.s_bar.rows())
    throw std::invalid_argument("optimal_v: dimension mismatch");
  return moment.s_bar - cov.x_n;
}

Matrix grad_a_empirical(const GeneratorParams& params, const Matrix& z_batch,
                        const EmpiricalCov& cov, const ActivationSpec& act) {
  if (cov.x_n.rows() != params.d())
    throw std::invalid_argument("grad_a_empirical: dimension mismatch");
  if (z_batch.rows() != params.k())
    throw std::invalid_argument("grad_a_empirical: latent dimension mismatch");
  const double m = double(z_batch.cols());
  const Matrix u = params.a * z_batch;
  Matrix p = u;
  act.value_inplace(p);
  const Matrix q = act.d1_of(u);
  const Matrix resid = p * p.transpose() / m - cov.x_n;
  return (2.0 / m) * (q.array() * (resid * p).array()).matrix() * z_batch.transpose();
}

Matrix hvp_empirical(const GeneratorParams& params, const Matrix& z_batch,
                     const EmpiricalCov& cov, const ActivationSpec& act,
                     const Matrix& b) {
  if (b.rows() != params.a.rows() || b.cols() != params.a.cols())
    throw std::invalid_argument("hvp_empirical: direction shape mismatch");
  const double m = double(z_batch.cols());
  const Matrix u = params.a * z_batch;
  Matrix p = u;
  act.value_inplace(p);
  const Matrix q = act.d1_of(u);
  const Matrix r2 = act.d2_of(u);

  const Matrix udot = b * z_batch;
  const Matrix pdot = (q.array() * udot.array()).matrix();
  const Matrix qdot = (r2.array() * udot.array()).matrix();

  const Matrix resid = p * p.transpose() / m - cov.x_n;
  const Matrix sdot =
      (pdot * p.transpose() + p * pdot.transpose()) / m;

  Matrix core = (qdot.array() * (resid * p).array()).matrix() +
                (q.array() * (sdot * p).array()).matrix() +
                (q.array() * (resid * pdot).array()).matrix();
  return (2.0 / m) * core * z_batch.transpose();
}

namespace {
constexpr double kUnitRowTol = 1e-9;
}

Matrix pop_kernel_matrix(const HermiteExpansion& exp, const Matrix& a) {
  const int d = static_cast<int>(a.rows());
  const Vector norms = a.rowwise().norm();
  for (int i = 0; i < d; ++i)
    if (norms[i] <= 0.0)
      throw std::invalid_argument("pop_kernel_matrix: zero row");
  Matrix k(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double rho = a.row(i).dot(a.row(j)) / (norms[i] * norms[j]);
      rho = std::clamp(rho, -1.0, 1.0);
      const bool unit = std::abs(norms[i] - 1.0) <= kUnitRowTol &&
                        std::abs(norms[j] - 1.0) <= kUnitRowTol;
      k(i, j) = unit ? dual_kernel(exp, rho)
                     : nonunit_kernel(exp, norms[i], norms[j], rho);
      k(j, i) = k(i, j);
    }
  }
  return k;
}

double population_risk(const Matrix& a, const GroundTruth& truth,
                       const HermiteExpansion& exp) {
  if (a.rows() != truth.a_star.rows())
    throw std::invalid_argument("population_risk: output dimension mismatch");
  const Matrix k_star = pop_kernel_matrix(exp, truth.a_star);
  const Matrix k = pop_kernel_matrix(exp, a);
  return 0.5 * (k_star - k).squaredNorm();
}

double scalar_kernel(const HermiteExpansion& exp, double z) {
  double acc = 0.0;
  for (int i = exp.truncation_degree; i >= 0; --i)
    acc = acc * z + exp.coeffs[i] * exp.coeffs[i];
  return acc;
}

double scalar_kernel_d1(const HermiteExpansion& exp, double z) {
  double acc = 0.0;
  for (int i = exp.truncation_degree; i >= 1; --i)
    acc = acc * z + i * exp.coeffs[i] * exp.coeffs[i];
  return acc;
}

double scalar_kernel_d2(const HermiteExpansion& exp, double z) {
  double acc = 0.0;
  for (int i = exp.truncation_degree; i >= 2; --i)
    acc = acc * z + double(i) * double(i - 1) * exp.coeffs[i] * exp.coeffs[i];
  return acc;
}

double scalar_loss_derivative(const HermiteExpansion& exp, double z_star, double z) {
  return (scalar_kernel(exp, z) - scalar_kernel(exp, z_star)) * scalar_kernel_d1(exp, z);
}

}  // namespace onegan
