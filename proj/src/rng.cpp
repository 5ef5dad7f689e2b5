#include "onegan/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace onegan {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = master;
  splitmix64(s);
  s ^= a * 0xd6e8feb86659fd93ULL;
  splitmix64(s);
  s ^= b * 0xa0761d6478bd642fULL;
  return splitmix64(s);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Matrix Rng::normal_matrix(int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = normal();
  return m;
}

Vector Rng::normal_vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Matrix Rng::sphere_matrix(int rows, int cols) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix m = normal_matrix(rows, cols);
    const double norm = m.norm();
    if (norm > 1e-12) return m / norm;
  }
  throw std::runtime_error("sphere_matrix: degenerate draws");
}

Vector Rng::sphere_vector(int n) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vector v = normal_vector(n);
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
  throw std::runtime_error("sphere_vector: degenerate draws");
}

}  // namespace onegan
