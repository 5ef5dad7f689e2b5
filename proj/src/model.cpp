#include "onegan/model.hpp"

#include <stdexcept>

namespace onegan {

GroundTruth GroundTruth::from_matrix(const Matrix& a_star) {
  if (a_star.rows() == 0 || a_star.cols() == 0)
    throw std::invalid_argument("GroundTruth: empty matrix");
  GroundTruth t;
  t.a_star = a_star;
  t.z_star = a_star * a_star.transpose();
  t.row_norms = a_star.rowwise().norm();
  return t;
}

Matrix sample_latent(int k, int m, Rng& rng) {
  if (k < 1 || m < 1) throw std::invalid_argument("sample_latent: need k, m >= 1");
  return rng.normal_matrix(k, m);
}

Matrix generate(const GeneratorParams& params, const Matrix& latents,
                const ActivationSpec& act) {
  if (latents.rows() != params.a.cols())
    throw std::invalid_argument("generate: latent dimension mismatch");
  Matrix out = params.a * latents;
  act.value_inplace(out);
  return out;
}

double rectified_adjusted_disc(const Vector& x, const Vector& v, double c) {
  if (x.size() != v.size())
    throw std::invalid_argument("rectified_adjusted_disc: size mismatch");
  return v.dot((x.array() - c).max(0.0).matrix());
}

double quad_disc(const Vector& x, const Matrix& v) {
  if (v.rows() != x.size() || v.cols() != x.size())
    throw std::invalid_argument("quad_disc: size mismatch");
  return x.dot(v * x);
}

}  // namespace onegan
