#include "onegan/activation.hpp"

#include <cmath>
#include <stdexcept>

namespace onegan {

namespace {
inline double sigmoid_scalar(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

double ActivationSpec::value(double x) const {
  switch (kind) {
    case ActivationKind::Identity: return x;
    case ActivationKind::Tanh: return std::tanh(x);
    case ActivationKind::Sigmoid: return sigmoid_scalar(x);
    case ActivationKind::Relu: return x > 0.0 ? x : 0.0;
    case ActivationKind::LeakyRelu: return x > 0.0 ? x : leak * x;
  }
  return 0.0;
}

double ActivationSpec::d1(double x) const {
  switch (kind) {
    case ActivationKind::Identity: return 1.0;
    case ActivationKind::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case ActivationKind::Sigmoid: {
      const double s = sigmoid_scalar(x);
      return s * (1.0 - s);
    }
    case ActivationKind::Relu: return x > 0.0 ? 1.0 : 0.0;
    case ActivationKind::LeakyRelu: return x > 0.0 ? 1.0 : leak;
  }
  return 0.0;
}

double ActivationSpec::d2(double x) const {
  switch (kind) {
    case ActivationKind::Identity: return 0.0;
    case ActivationKind::Tanh: {
      const double t = std::tanh(x);
      return -2.0 * t * (1.0 - t * t);
    }
    case ActivationKind::Sigmoid: {
      const double s = sigmoid_scalar(x);
      return s * (1.0 - s) * (1.0 - 2.0 * s);
    }
    case ActivationKind::Relu:
    case ActivationKind::LeakyRelu: return 0.0;
  }
  return 0.0;
}

void ActivationSpec::value_inplace(Eigen::MatrixXd& x) const {
  switch (kind) {
    case ActivationKind::Identity: return;
    case ActivationKind::Tanh: x = x.array().tanh(); return;
    case ActivationKind::Sigmoid:
      x = 1.0 / (1.0 + (-x.array()).exp());
      return;
    case ActivationKind::Relu: x = x.array().max(0.0); return;
    case ActivationKind::LeakyRelu:
      x = x.array().max(leak * x.array());
      return;
  }
}

Eigen::MatrixXd ActivationSpec::value_of(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd y = x;
  value_inplace(y);
  return y;
}

Eigen::MatrixXd ActivationSpec::d1_of(const Eigen::MatrixXd& x) const {
  switch (kind) {
    case ActivationKind::Identity: return Eigen::MatrixXd::Ones(x.rows(), x.cols());
    case ActivationKind::Tanh: return 1.0 - x.array().tanh().square();
    case ActivationKind::Sigmoid: {
      Eigen::ArrayXXd s = 1.0 / (1.0 + (-x.array()).exp());
      return s * (1.0 - s);
    }
    case ActivationKind::Relu:
      return (x.array() > 0.0).cast<double>();
    case ActivationKind::LeakyRelu:
      return (x.array() > 0.0).select(Eigen::ArrayXXd::Constant(x.rows(), x.cols(), 1.0),
                                      Eigen::ArrayXXd::Constant(x.rows(), x.cols(), leak));
  }
  return Eigen::MatrixXd::Zero(x.rows(), x.cols());
}

Eigen::MatrixXd ActivationSpec::d2_of(const Eigen::MatrixXd& x) const {
  switch (kind) {
    case ActivationKind::Identity:
    case ActivationKind::Relu:
    case ActivationKind::LeakyRelu:
      return Eigen::MatrixXd::Zero(x.rows(), x.cols());
    case ActivationKind::Tanh: {
      Eigen::ArrayXXd t = x.array().tanh();
      return -2.0 * t * (1.0 - t.square());
    }
    case ActivationKind::Sigmoid: {
      Eigen::ArrayXXd s = 1.0 / (1.0 + (-x.array()).exp());
      return s * (1.0 - s) * (1.0 - 2.0 * s);
    }
  }
  return Eigen::MatrixXd::Zero(x.rows(), x.cols());
}

std::string ActivationSpec::name() const {
  switch (kind) {
    case ActivationKind::Identity: return "identity";
    case ActivationKind::Tanh: return "tanh";
    case ActivationKind::Sigmoid: return "sigmoid";
    case ActivationKind::Relu: return "relu";
    case ActivationKind::LeakyRelu: return "leaky_relu";
  }
  return "?";
}

ActivationSpec ActivationSpec::identity() {
  ActivationSpec s;
  s.kind = ActivationKind::Identity;
  s.bias_constant = 0.0;
  s.odd_plus_constant = true;
  s.positive_even_part = false;  // even part is identically zero
  s.odd_coefficients = true;
  s.lipschitz_smooth = true;
  return s;
}

ActivationSpec ActivationSpec::tanh() {
  ActivationSpec s;
  s.kind = ActivationKind::Tanh;
  s.bias_constant = 0.0;
  s.odd_plus_constant = true;
  s.positive_even_part = false;
  s.odd_coefficients = true;
  s.lipschitz_smooth = true;
  return s;
}

ActivationSpec ActivationSpec::sigmoid() {
  ActivationSpec s;
  s.kind = ActivationKind::Sigmoid;
  s.bias_constant = 0.5;
  s.odd_plus_constant = true;
  s.positive_even_part = false;  // even part is the constant 1/2
  s.odd_coefficients = true;
  s.lipschitz_smooth = true;
  return s;
}

ActivationSpec ActivationSpec::relu() {
  ActivationSpec s;
  s.kind = ActivationKind::Relu;
  s.odd_plus_constant = false;
  s.positive_even_part = true;  // even part is |x| / 2
  s.odd_coefficients = false;
  s.lipschitz_smooth = false;  // derivative jumps at 0
  return s;
}

ActivationSpec ActivationSpec::leaky_relu(double leak) {
  if (!(leak > 0.0 && leak < 1.0))
    throw std::invalid_argument("leaky_relu: leak must be in (0, 1)");
  ActivationSpec s;
  s.kind = ActivationKind::LeakyRelu;
  s.leak = leak;
  s.odd_plus_constant = false;
  s.positive_even_part = true;  // even part is (1 - leak) |x| / 2
  s.odd_coefficients = false;
  s.lipschitz_smooth = false;
  return s;
}

ActivationSpec ActivationSpec::by_name(const std::string& name, double leak) {
  if (name == "identity") return identity();
  if (name == "tanh") return tanh();
  if (name == "sigmoid") return sigmoid();
  if (name == "relu") return relu();
  if (name == "leaky_relu") return leaky_relu(leak);
  throw std::invalid_argument("unknown activation: " + name);
}

}  // namespace onegan
