#pragma once

#include <Eigen/Dense>

#include "onegan/activation.hpp"

namespace onegan {

// Everything here works in the probabilists' Hermite basis normalized to unit
// norm under N(0, 1):  E[h_m(z) h_n(z)] = delta_{mn}.  The three-term
// recurrence is  h_{n+1}(x) = (x h_n(x) - sqrt(n) h_{n-1}(x)) / sqrt(n+1).

// Highest truncation degree accepted; factorial ratios stay well conditioned
// below this and every shipped configuration uses far less.
inline constexpr int kMaxHermiteDegree = 60;

// h_n(x).
double hermite_basis_eval(int n, double x);
// h_0(x) .. h_n(x) in one recurrence sweep.
Eigen::VectorXd hermite_basis_all(int n, double x);

// Quadrature rule with E[f(z)] ~= sum_i weights[i] * f(nodes[i]) for
// z ~ N(0, 1).  Nodes and weights come from the Golub-Welsch eigenproblem of
// the Jacobi matrix; weights sum to 1 exactly up to rounding.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  double integrate(const std::function<double(double)>& f) const;
};

// Rule with `n` nodes. Cached for repeated use; safe to call concurrently.
const GaussHermiteRule& gauss_hermite_rule(int n);

// Coefficients of an activation in the normalized Hermite basis.
//   coeffs[i]  = E[phi(z) h_i(z)]
//   tail_mass  = max(0, E[phi^2] - sum coeffs^2), the mass truncated away.
struct HermiteExpansion {
  Eigen::VectorXd coeffs;
  int truncation_degree = 0;
  double tail_mass = 0.0;
};

// Expansion of phi truncated at `degree`.  Smooth activations integrate with
// the Gauss-Hermite rule (`nodes` points, at least 2*degree+1 required).
// Piecewise-linear activations (identity, relu, leaky_relu) use the exact
// half-line moment recurrence instead: quadrature smears the kink at 0 and
// costs ~1e-3 absolute error on the even coefficients, which is visible
// against Monte Carlo at the tolerances used downstream.
HermiteExpansion expand_activation(const ActivationSpec& act, int degree,
                                   int nodes = 200);

// sum_i coeffs[i]^2 rho^i == E[phi(u'z) phi(v'z)] for unit u, v with
// u'v = rho, up to truncation.
double dual_kernel(const HermiteExpansion& exp, double rho);

// Multiplication-theorem constant for rescaled Hermite polynomials in the
// monic convention:
//   eta(alpha, n, i) = alpha^(n-2i) (alpha^2-1)^i C(n, 2i) (2i)! / (i! 2^i).
// The normalized basis used everywhere else needs the bridge factor
// sqrt((n-2i)! / n!); scaled_pair_expectation applies it internally.
double mult_coeff(double alpha, int n, int i);

// E[h_m(x) h_n(y)] for (x, y) jointly normal, mean zero, Var x = alpha^2,
// Var y = beta^2, Corr(x/alpha, y/beta) = rho.  Zero when m, n have
// different parity.
double scaled_pair_expectation(double alpha, double beta, double rho, int m,
                               int n);

// E[phi(x) phi(y)] for the same law, through the expansion:
//   sum_{m,n} coeffs[m] coeffs[n] E[h_m(x) h_n(y)].
// Reduces to dual_kernel(exp, rho) at alpha = beta = 1.
double nonunit_kernel(const HermiteExpansion& exp, double alpha, double beta,
                      double rho);

}  // namespace onegan
