#include "onegan/stationarity.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "onegan/rng.hpp"

namespace onegan {

Matrix grad_z_population(const HermiteExpansion& exp, const Matrix& z, const Matrix& z_star) {
  if (z.rows() != z_star.rows() || z.cols() != z_star.cols())
    throw std::invalid_argument("grad_z_population: shape mismatch");
  Matrix g(z.rows(), z.cols());
  for (int j = 0; j < z.rows(); ++j)
    for (int k = 0; k < z.cols(); ++k)
      g(j, k) = scalar_loss_derivative(exp, z_star(j, k), z(j, k));
  return g;
}

Vector fit_multipliers(const Matrix& grad_a, const Matrix& a) {
  if (grad_a.rows() != a.rows() || grad_a.cols() != a.cols())
    throw std::invalid_argument("fit_multipliers: shape mismatch");
  Vector lambda(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    const double nn = a.row(i).squaredNorm();
    if (nn <= 1e-300) throw std::invalid_argument("fit_multipliers: zero row");
    lambda[i] = grad_a.row(i).dot(a.row(i)) / nn;
  }
  return lambda;
}

namespace {

// Residual matrix S = grad_Z - diag(lambda), with lambda fitted so that
// diag(S Z) = 0. S depends on A only through Z.
Matrix residual_matrix(const HermiteExpansion& exp, const Matrix& a, const Matrix& z_star,
                       Vector* multipliers_out) {
  const Matrix z = a * a.transpose();
  const Matrix gz = grad_z_population(exp, z, z_star);
  const Vector lambda = fit_multipliers(gz * a, a);
  if (multipliers_out != nullptr) *multipliers_out = lambda;
  Matrix s = gz;
  s.diagonal() -= lambda;
  return s;
}

// Orthonormal basis of range(A) from the spectral decomposition of A A^T.
Matrix range_basis(const Matrix& a) {
  const Matrix z = a * a.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(z);
  const double lmax = es.eigenvalues().maxCoeff();
  const double thresh = std::max(lmax, 0.0) * 1e-10;
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] > thresh) ++rank;
  Matrix u(a.rows(), rank);
  int col = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] > thresh) u.col(col++) = es.eigenvectors().col(i);
  return u;
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()[0];
}

}  // namespace

double SospResidual::max_eps() const { return std::max({eps_feas, eps_grad, eps_curv}); }

double curvature_form(const HermiteExpansion& exp, const Matrix& a, const Matrix& z_star,
                      const Vector& multipliers, const Matrix& b) {
  const Matrix z = a * a.transpose();
  const Matrix zdot = b * a.transpose() + a * b.transpose();
  Matrix g2(z.rows(), z.cols());
  for (int j = 0; j < z.rows(); ++j)
    for (int k = 0; k < z.cols(); ++k) {
      const double d1 = scalar_kernel_d1(exp, z(j, k));
      const double d2 = scalar_kernel_d2(exp, z(j, k));
      g2(j, k) = d1 * d1 + (scalar_kernel(exp, z(j, k)) - scalar_kernel(exp, z_star(j, k))) * d2;
    }
  Matrix s = grad_z_population(exp, z, z_star);
  s.diagonal() -= multipliers;
  const double first = 2.0 * (b * a.transpose()).cwiseProduct(g2.cwiseProduct(zdot)).sum();
  const double second = 2.0 * b.cwiseProduct(s * b).sum();
  return first + second;
}

SospResidual sosp_residual(const HermiteExpansion& exp, const Matrix& a, const Matrix& z_star,
                           const Vector& norm_targets, int probes, std::uint64_t seed) {
  if (norm_targets.size() != a.rows())
    throw std::invalid_argument("sosp_residual: one norm target per row");
  SospResidual res;
  const Matrix z = a * a.transpose();
  for (int i = 0; i < a.rows(); ++i)
    res.eps_feas = std::max(res.eps_feas,
                            std::abs(z(i, i) - norm_targets[i] * norm_targets[i]));
  const Matrix s = residual_matrix(exp, a, z_star, &res.multipliers);
  res.eps_grad = operator_norm(s * range_basis(a));

  Rng rng(seed);
  double min_q = std::numeric_limits<double>::infinity();
  int kept = 0;
  for (int p = 0; p < probes; ++p) {
    Matrix b = rng.normal_matrix(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
    for (int i = 0; i < a.rows(); ++i) {
      const Vector ai = a.row(i).transpose() / a.row(i).norm();
      b.row(i) -= (b.row(i) * ai) * ai.transpose();
    }
    const double nb = b.norm();
    if (nb <= 1e-12) continue;
    b /= nb;
    min_q = std::min(min_q, curvature_form(exp, a, z_star, res.multipliers, b));
    ++kept;
  }
  if (kept == 0) min_q = 0.0;  // k = 1: the row-tangent space is trivial
  res.min_curvature = min_q;
  res.eps_curv = std::max(0.0, -res.min_curvature);
  return res;
}

FospCertificate fosp_certificate(const HermiteExpansion& exp, const Matrix& a,
                                 const Matrix& z_star) {
  FospCertificate cert;
  const Matrix s = residual_matrix(exp, a, z_star, &cert.multipliers);
  cert.eps_grad = operator_norm(s * range_basis(a));
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  cert.min_eigenvalue = es.eigenvalues().minCoeff();
  cert.psd = cert.min_eigenvalue >= -1e-8;
  cert.eps = std::max(cert.eps_grad, std::max(0.0, -cert.min_eigenvalue));
  return cert;
}

RecoveryCheck recovery_bound_check(const HermiteExpansion& exp, const Matrix& a,
                                   const Matrix& z_star, double eps) {
  if (exp.coeffs.size() < 2)
    throw std::invalid_argument("recovery_bound_check: expansion lacks a degree-1 coefficient");
  const double s1 = exp.coeffs[1];
  if (std::abs(s1) <= 0.0)
    throw std::invalid_argument("recovery_bound_check: vanishing first Hermite coefficient");
  RecoveryCheck chk;
  chk.lhs = (a * a.transpose() - z_star).norm();
  chk.rhs = eps / (s1 * s1 * s1 * s1);
  chk.holds = chk.lhs <= chk.rhs + 1e-6;
  return chk;
}

std::vector<std::pair<double, double>> scalar_stationary_scan(const HermiteExpansion& exp,
                                                              double z_star, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("scalar_stationary_scan: need a grid");
  std::vector<std::pair<double, double>> out;
  double prev_z = -1.0;
  double prev_v = scalar_loss_derivative(exp, z_star, prev_z);
  if (prev_v == 0.0) out.emplace_back(prev_z, prev_z);
  for (int i = 1; i < grid_points; ++i) {
    const double zi = -1.0 + 2.0 * i / (grid_points - 1);
    const double vi = scalar_loss_derivative(exp, z_star, zi);
    if (vi == 0.0)
      out.emplace_back(zi, zi);  // exact zero on the grid: a point interval
    else if (prev_v != 0.0 && (prev_v < 0.0) != (vi < 0.0))
      out.emplace_back(prev_z, zi);
    prev_z = zi;
    prev_v = vi;
  }
  return out;
}

}  // namespace onegan
