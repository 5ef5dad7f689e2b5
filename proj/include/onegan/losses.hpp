#pragma once

#include <Eigen/Dense>

#include "onegan/hermite.hpp"
#include "onegan/model.hpp"

namespace onegan {

// Second-moment matrix of observed samples: X_n = (1/n) sum x_i x_i'.
struct EmpiricalCov {
  Matrix x_n;
  long n = 0;
};

// Second-moment matrix of a generated batch: S_bar = (1/m) sum s_j s_j'.
struct BatchSecondMoment {
  Matrix s_bar;
  long m = 0;
};

EmpiricalCov empirical_cov(const Matrix& samples);
BatchSecondMoment batch_second_moment(const Matrix& generated);

// First-stage objective and exact gradients.  For odd-plus-constant
// activations the discriminator reads relu(x - C 1) on both sides; otherwise
// it is linear in x.  The norm regularizer -||v||^2/2 is included.
struct F1Result {
  double value = 0.0;
  Matrix grad_a;
  Vector grad_v;
};

F1Result f1_value_grad(const GeneratorParams& params, const Vector& v,
                       const Matrix& samples, const Matrix& z_batch,
                       const ActivationSpec& act);

// Minibatch moment-matching loss 0.5 ||X_n - S_bar(A)||_F^2; equals the
// inner maximum of the second-stage game over the quadratic discriminator.
double g_tilde_mn(const EmpiricalCov& cov, const BatchSecondMoment& moment);
double g_tilde_mn(const GeneratorParams& params, const Matrix& z_batch,
                  const EmpiricalCov& cov, const ActivationSpec& act);

// Exact inner maximizer of <S_bar - X_n, V> - 0.5 ||V||_F^2.
Matrix optimal_v(const EmpiricalCov& cov, const BatchSecondMoment& moment);

// Gradient of g_tilde_mn in A:
//   (2/m) sum_j diag(phi'(A z_j)) (S_bar - X_n) phi(A z_j) z_j'.
Matrix grad_a_empirical(const GeneratorParams& params, const Matrix& z_batch,
                        const EmpiricalCov& cov, const ActivationSpec& act);

// Directional derivative of grad_a_empirical along B (the Hessian-vector
// product of g_tilde_mn), differentiating through both the outer residual
// and the batch moment.
Matrix hvp_empirical(const GeneratorParams& params, const Matrix& z_batch,
                     const EmpiricalCov& cov, const ActivationSpec& act,
                     const Matrix& b);

// Pairwise population kernel matrix K_jk = E[phi(a_j'z) phi(a_k'z)].
// Unit-norm row pairs evaluate through dual_kernel; any other pair goes
// through nonunit_kernel.  Rows must be nonzero.
Matrix pop_kernel_matrix(const HermiteExpansion& exp, const Matrix& a);

// Population risk 0.5 || K(A*) - K(A) ||_F^2 through the expansion.  With
// unit rows this is the Hadamard-power form
// 0.5 || sum_i c_i^2 ((Z*)^(i) - (A A')^(i)) ||_F^2.
double population_risk(const Matrix& a, const GroundTruth& truth,
                       const HermiteExpansion& exp);

// K(z) = sum_i coeffs[i]^2 z^i and its derivative, as polynomials (no
// domain restriction; optimizer iterates can drift slightly past |z| = 1).
double scalar_kernel(const HermiteExpansion& exp, double z);
double scalar_kernel_d1(const HermiteExpansion& exp, double z);
double scalar_kernel_d2(const HermiteExpansion& exp, double z);

// d/dz of the per-entry loss 0.5 (K(z) - K(z_star))^2:
//   (K(z) - K(z_star)) K'(z).
double scalar_loss_derivative(const HermiteExpansion& exp, double z_star,
                              double z);

}  // namespace onegan
