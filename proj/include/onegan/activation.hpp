#pragma once

#include <Eigen/Dense>
#include <string>

namespace onegan {

enum class ActivationKind { Identity, Tanh, Sigmoid, Relu, LeakyRelu };

// Pointwise activation with first and second derivatives and the structural
// flags the losses and optimizer dispatch on:
//   odd_plus_constant  phi(x) + phi(-x) == 2C for all x
//   positive_even_part phi(x) + phi(-x) is positive and increasing on (0, inf)
//   odd_coefficients   even Hermite coefficients of degree >= 2 vanish
//   lipschitz_smooth   phi and phi' are both 1-Lipschitz
struct ActivationSpec {
  ActivationKind kind = ActivationKind::Tanh;
  double leak = 0.0;           // slope on the negative side, LeakyRelu only
  double bias_constant = 0.0;  // C = (phi(x) + phi(-x)) / 2 when constant
  bool odd_plus_constant = false;
  bool positive_even_part = false;
  bool odd_coefficients = false;
  bool lipschitz_smooth = false;

  double value(double x) const;
  double d1(double x) const;
  // Kink points report 0; LeakyRelu and Relu are affine away from 0.
  double d2(double x) const;

  // Vectorised evaluation for the training loops.
  void value_inplace(Eigen::MatrixXd& x) const;
  Eigen::MatrixXd value_of(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd d1_of(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd d2_of(const Eigen::MatrixXd& x) const;

  std::string name() const;

  static ActivationSpec identity();
  static ActivationSpec tanh();
  static ActivationSpec sigmoid();
  static ActivationSpec relu();
  static ActivationSpec leaky_relu(double leak);
  // Names: identity | tanh | sigmoid | relu | leaky_relu (uses `leak`).
  static ActivationSpec by_name(const std::string& name, double leak = 0.2);
};

}  // namespace onegan
