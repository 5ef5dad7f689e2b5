#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "onegan/losses.hpp"

namespace onegan {

// Population gradient with respect to the Gram matrix Z = A A^T, entrywise
// (K(z) - K(z*)) K'(z).
Matrix grad_z_population(const HermiteExpansion& exp, const Matrix& z, const Matrix& z_star);

// Least-squares multiplier per row: lambda_i = <g_i, a_i> / |a_i|^2. Rows of
// `a` must be nonzero.
Vector fit_multipliers(const Matrix& grad_a, const Matrix& a);

struct SospResidual {
  double eps_feas = 0.0;   // worst |Z_ii - t_i^2|
  double eps_grad = 0.0;   // operator norm of S restricted to range(A)
  double eps_curv = 0.0;   // max(0, -min_B q(B)) over unit tangent probes
  double min_curvature = 0.0;
  Vector multipliers;
  double max_eps() const;
};

// Residuals of the approximate second-order condition for the row-constrained
// generator problem at A. S = grad_Z - diag(lambda); q(B) is the constrained
// second-order form along tangent probes with rows orthogonal to those of A.
SospResidual sosp_residual(const HermiteExpansion& exp, const Matrix& a, const Matrix& z_star,
                           const Vector& norm_targets, int probes = 64,
                           std::uint64_t seed = 1);

// Second-order form q(B) = 2<B A^T, g'' o Zdot> + 2<B, S B>, Zdot = B A^T + A B^T.
// `b` is used as given; callers wanting tangent probes orthogonalize first.
double curvature_form(const HermiteExpansion& exp, const Matrix& a, const Matrix& z_star,
                      const Vector& multipliers, const Matrix& b);

struct FospCertificate {
  double eps_grad = 0.0;
  double min_eigenvalue = 0.0;  // of S over all of R^d
  double eps = 0.0;             // max(eps_grad, max(0, -min_eigenvalue))
  bool psd = false;             // min_eigenvalue >= -1e-8
  Vector multipliers;
};

// First-order certificate for the lifted problem in Z: S nearly positive
// semidefinite and S nearly annihilating range(A).
FospCertificate fosp_certificate(const HermiteExpansion& exp, const Matrix& a,
                                 const Matrix& z_star);

struct RecoveryCheck {
  double lhs = 0.0;  // |A A^T - Z*|_F
  double rhs = 0.0;  // eps / sigma_1^4
  bool holds = false;
};

// Checks the recovery guarantee |A A^T - Z*|_F <= eps / sigma_1^4.
RecoveryCheck recovery_bound_check(const HermiteExpansion& exp, const Matrix& a,
                                   const Matrix& z_star, double eps);

// Sign-change intervals of z -> (K(z) - K(z*)) K'(z) on a uniform grid over
// [-1, 1]; each returned pair brackets a stationary point of the scalar loss.
std::vector<std::pair<double, double>> scalar_stationary_scan(const HermiteExpansion& exp,
                                                              double z_star,
                                                              int grid_points = 2001);

}  // namespace onegan
