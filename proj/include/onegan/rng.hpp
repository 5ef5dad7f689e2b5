#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace onegan {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// splitmix64 step; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic child seed for (master, a, b). Different (a, b) give
// decorrelated streams, so trial results do not depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

// Seeded generator with a fixed normal transform. std::normal_distribution is
// implementation-defined, so Box-Muller is done explicitly to keep sampled
// values identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform();
  // Standard normal. Draws are produced in pairs; the spare is cached.
  double normal();

  Matrix normal_matrix(int rows, int cols);
  Vector normal_vector(int n);

  // Uniform direction on the Frobenius unit sphere of rows x cols matrices.
  Matrix sphere_matrix(int rows, int cols);
  // Uniform direction on the unit sphere in R^n.
  Vector sphere_vector(int n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace onegan
