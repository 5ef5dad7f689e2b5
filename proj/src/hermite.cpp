#include "onegan/hermite.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace onegan {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// He_n(0): 0 for odd n, (-1)^(n/2) (n-1)!! for even n.
double monic_hermite_at_zero(int n) {
  if (n < 0) return 0.0;
  if (n % 2 == 1) return 0.0;
  double v = 1.0;
  for (int i = 1; i < n; i += 2) v *= i;
  return (n / 2) % 2 == 0 ? v : -v;
}

// Exact coefficients of relu in the normalized basis via the half-line
// moments J_i = int_0^inf z He_i(z) exp(-z^2/2) dz:
//   J_0 = 1, J_1 = sqrt(pi/2), J_i = He_i(0) + i He_{i-2}(0) for i >= 2,
// giving coeffs[i] = J_i / (sqrt(i!) sqrt(2 pi)).
double relu_coeff(int i) {
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  if (i == 0) return inv_sqrt2pi;
  if (i == 1) return 0.5;
  if (i % 2 == 1) return 0.0;
  const double j = monic_hermite_at_zero(i) + i * monic_hermite_at_zero(i - 2);
  return j / std::sqrt(factorial(i)) * inv_sqrt2pi;
}

}  // namespace

double hermite_basis_eval(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_basis_eval: n < 0");
  double prev = 0.0, cur = 1.0;
  for (int i = 0; i < n; ++i) {
    const double next = (x * cur - std::sqrt(double(i)) * prev) / std::sqrt(double(i + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

Eigen::VectorXd hermite_basis_all(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_basis_all: n < 0");
  Eigen::VectorXd h(n + 1);
  h[0] = 1.0;
  if (n >= 1) h[1] = x;
  for (int i = 1; i < n; ++i)
    h[i + 1] = (x * h[i] - std::sqrt(double(i)) * h[i - 1]) / std::sqrt(double(i + 1));
  return h;
}

double GaussHermiteRule::integrate(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (int i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
  return acc;
}

namespace {

GaussHermiteRule build_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_rule: need at least one node");
  // Jacobi matrix of the monic recurrence He_{k+1} = x He_k - k He_{k-1}:
  // zero diagonal, off-diagonal sqrt(k).  Eigenvalues are the nodes in
  // z-space.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1 > 0 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite_rule: eigensolver failed");
  GaussHermiteRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  // Christoffel numbers w = 1 / sum_j h_j(x)^2 instead of squared eigenvector
  // components: the sum of positive terms keeps tiny edge weights relatively
  // accurate, where the eigenvector route leaves absolute noise near 1e-32
  // that polynomial integrands at the outermost nodes amplify.  A sum that
  // overflows means the true weight underflows; it contributes nothing.
  for (int i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    double sum = 1.0, prev = 0.0, cur = 1.0;
    for (int j = 0; j < n - 1; ++j) {
      const double next = (x * cur - std::sqrt(double(j)) * prev) / std::sqrt(double(j + 1));
      prev = cur;
      cur = next;
      sum += cur * cur;
    }
    rule.weights[i] = std::isfinite(sum) ? 1.0 / sum : 0.0;
  }
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite_rule(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, std::make_unique<GaussHermiteRule>(build_rule(n))).first;
  return *it->second;
}

HermiteExpansion expand_activation(const ActivationSpec& act, int degree, int nodes) {
  if (degree < 0 || degree > kMaxHermiteDegree)
    throw std::invalid_argument("expand_activation: degree out of range");
  if (nodes < 2 * degree + 1)
    throw std::invalid_argument("expand_activation: need at least 2*degree+1 nodes");

  HermiteExpansion exp;
  exp.truncation_degree = degree;
  exp.coeffs = Eigen::VectorXd::Zero(degree + 1);

  double second_moment = 0.0;
  switch (act.kind) {
    case ActivationKind::Identity:
      if (degree >= 1) exp.coeffs[1] = 1.0;
      second_moment = 1.0;
      break;
    case ActivationKind::Relu:
      for (int i = 0; i <= degree; ++i) exp.coeffs[i] = relu_coeff(i);
      second_moment = 0.5;
      break;
    case ActivationKind::LeakyRelu: {
      const double a = act.leak;
      for (int i = 0; i <= degree; ++i) exp.coeffs[i] = (1.0 - a) * relu_coeff(i);
      if (degree >= 1) exp.coeffs[1] += a;
      second_moment = (1.0 + a * a) / 2.0;
      break;
    }
    case ActivationKind::Tanh:
    case ActivationKind::Sigmoid: {
      const GaussHermiteRule& rule = gauss_hermite_rule(nodes);
      const int q = static_cast<int>(rule.nodes.size());
      Eigen::VectorXd phi(q);
      for (int i = 0; i < q; ++i) phi[i] = act.value(rule.nodes[i]);
      // One recurrence sweep across all nodes.
      Eigen::VectorXd prev = Eigen::VectorXd::Zero(q);
      Eigen::VectorXd cur = Eigen::VectorXd::Ones(q);
      for (int deg = 0; deg <= degree; ++deg) {
        exp.coeffs[deg] = (rule.weights.array() * phi.array() * cur.array()).sum();
        Eigen::VectorXd next =
            (rule.nodes.array() * cur.array() - std::sqrt(double(deg)) * prev.array()) /
            std::sqrt(double(deg + 1));
        prev = cur;
        cur = next;
      }
      second_moment = (rule.weights.array() * phi.array().square()).sum();
      break;
    }
  }
  exp.tail_mass = std::max(0.0, second_moment - exp.coeffs.squaredNorm());
  return exp;
}

double dual_kernel(const HermiteExpansion& exp, double rho) {
  if (std::abs(rho) > 1.0 + 1e-12)
    throw std::invalid_argument("dual_kernel: |rho| must be <= 1");
  // Horner on sum coeffs[i]^2 rho^i.
  double acc = 0.0;
  for (int i = exp.truncation_degree; i >= 0; --i)
    acc = acc * rho + exp.coeffs[i] * exp.coeffs[i];
  return acc;
}

double mult_coeff(double alpha, int n, int i) {
  if (n < 0) throw std::invalid_argument("mult_coeff: n < 0");
  if (i < 0 || 2 * i > n)
    throw std::invalid_argument("mult_coeff: need 0 <= i <= floor(n/2)");
  // C(n, 2i) (2i)! / (i! 2^i) = C(n, 2i) (2i-1)!!.
  double comb = 1.0;
  for (int t = 0; t < 2 * i; ++t) comb = comb * (n - t) / (t + 1);
  double dfact = 1.0;
  for (int t = 1; t < 2 * i; t += 2) dfact *= t;
  return std::pow(alpha, n - 2 * i) * std::pow(alpha * alpha - 1.0, i) * comb * dfact;
}

namespace {

// Coefficient of h_{n-2i}(z) in h_n(gamma z): the monic constant times the
// normalization bridge sqrt((n-2i)! / n!).
double scaled_basis_coeff(double gamma, int n, int i) {
  return mult_coeff(gamma, n, i) *
         std::sqrt(factorial(n - 2 * i) / factorial(n));
}

}  // namespace

double scaled_pair_expectation(double alpha, double beta, double rho, int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("scaled_pair_expectation: negative degree");
  if (m > kMaxHermiteDegree || n > kMaxHermiteDegree)
    throw std::invalid_argument("scaled_pair_expectation: degree out of range");
  if (std::abs(rho) > 1.0 + 1e-12)
    throw std::invalid_argument("scaled_pair_expectation: |rho| must be <= 1");
  if ((m - n) % 2 != 0) return 0.0;
  // Expand both sides onto the standard basis and use
  // E[h_p(z) h_q(w)] = delta_{pq} rho^p for unit-variance (z, w).
  const int l = std::min(m, n);
  double acc = 0.0;
  for (int i = 0; 2 * i <= l; ++i) {
    const int p = l - 2 * i;  // shared surviving degree
    const int im = (m - p) / 2;
    const int in = (n - p) / 2;
    acc += scaled_basis_coeff(alpha, m, im) * scaled_basis_coeff(beta, n, in) *
           std::pow(rho, p);
  }
  return acc;
}

double nonunit_kernel(const HermiteExpansion& exp, double alpha, double beta, double rho) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("nonunit_kernel: scales must be positive");
  if (std::abs(rho) > 1.0 + 1e-12)
    throw std::invalid_argument("nonunit_kernel: |rho| must be <= 1");
  const int degree = exp.truncation_degree;
  double acc = 0.0;
  for (int m = 0; m <= degree; ++m) {
    if (exp.coeffs[m] == 0.0) continue;
    for (int n = m % 2; n <= degree; n += 2) {
      if (exp.coeffs[n] == 0.0) continue;
      acc += exp.coeffs[m] * exp.coeffs[n] * scaled_pair_expectation(alpha, beta, rho, m, n);
    }
  }
  return acc;
}

}  // namespace onegan
