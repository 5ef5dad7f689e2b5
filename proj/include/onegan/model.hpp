#pragma once

#include <Eigen/Dense>
#include <optional>

#include "onegan/activation.hpp"
#include "onegan/rng.hpp"

namespace onegan {

// Generator x = phi(A z), z ~ N(0, I_k).  A is d x k; samples are stored
// column-major as d x batch.
struct GeneratorParams {
  Matrix a;
  std::optional<Vector> row_norm_targets;

  int d() const { return static_cast<int>(a.rows()); }
  int k() const { return static_cast<int>(a.cols()); }
};

// The planted generator and the quantities recovery is measured against.
struct GroundTruth {
  Matrix a_star;
  Matrix z_star;      // a_star a_star'
  Vector row_norms;   // ||a_star_i||

  static GroundTruth from_matrix(const Matrix& a_star);
};

// k x m matrix of i.i.d. standard normals.  Deterministic given the
// generator state.
Matrix sample_latent(int k, int m, Rng& rng);

// phi(A z) for a k x m latent batch; result is d x m.
Matrix generate(const GeneratorParams& params, const Matrix& latents,
                const ActivationSpec& act);

// v' relu(x - c 1): the first-stage discriminator for activations whose odd
// part sits above the constant c.
double rectified_adjusted_disc(const Vector& x, const Vector& v, double c);

// x' V x: the quadratic discriminator of the second stage.
double quad_disc(const Vector& x, const Matrix& v);

}  // namespace onegan
