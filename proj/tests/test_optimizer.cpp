#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "onegan/model.hpp"
#include "onegan/optimizer.hpp"
#include "support/oracles.hpp"

using namespace onegan;

TEST_CASE("row projection") {
  Matrix a(2, 2);
  a << 3.0, 4.0, 0.1, 0.0;
  Vector t(2);
  t << 1.0, 2.0;

  SUBCASE("scales rows to their targets, keeping direction") {
    const Matrix p = project_rows(a, t);
    CHECK(p.row(0).norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.row(1).norm() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(p(0, 0) / p(0, 1) == doctest::Approx(0.75).epsilon(1e-12));
  }

  SUBCASE("is exactly idempotent") {
    const Matrix once = project_rows(a, t);
    const Matrix twice = project_rows(once, t);
    CHECK((once.array() == twice.array()).all());
  }

  SUBCASE("zero rows need a generator") {
    Matrix z = a;
    z.row(1).setZero();
    CHECK_THROWS(project_rows(z, t));
    Rng rng(3);
    int resampled = 0;
    const Matrix p = project_rows(z, t, &rng, &resampled);
    CHECK(resampled == 1);
    CHECK(p.row(1).norm() == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("targets must be positive and match the row count") {
    Vector bad(2);
    bad << 1.0, 0.0;
    CHECK_THROWS(project_rows(a, bad));
    CHECK_THROWS(project_rows(a, Vector::Ones(3)));
  }
}

TEST_CASE("stage-one curve is strictly increasing in the scale") {
  for (const auto& act : {ActivationSpec::identity(), ActivationSpec::tanh(),
                          ActivationSpec::sigmoid(), ActivationSpec::relu(),
                          ActivationSpec::leaky_relu(0.2)}) {
    double prev = marginal_mean(act, 0.1);
    CHECK(prev > 0.0);
    for (double alpha = 0.2; alpha <= 3.01; alpha += 0.1) {
      const double cur = marginal_mean(act, alpha);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("stage-one curve closed form for the identity activation") {
  const ActivationSpec id = ActivationSpec::identity();
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (double alpha : {0.4, 1.0, 2.3}) {
    CHECK(marginal_mean(id, alpha) == doctest::Approx(alpha * inv_sqrt2pi).epsilon(1e-10));
    CHECK(marginal_mean_d1(id, alpha) == doctest::Approx(inv_sqrt2pi).epsilon(1e-10));
  }
}

TEST_CASE("stage-one curve derivative matches finite differences") {
  for (const auto& act : {ActivationSpec::tanh(), ActivationSpec::sigmoid()})
    for (double alpha : {0.5, 1.0, 1.8}) {
      const double fd =
          oracles::fd_scalar([&](double u) { return marginal_mean(act, u); }, alpha, 1e-6);
      CHECK(marginal_mean_d1(act, alpha) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("marginal norms are recovered from observations (sigmoid)") {
  const ActivationSpec act = ActivationSpec::sigmoid();
  Matrix a_star(3, 2);
  Rng rng(17);
  const double norms[] = {0.6, 1.0, 1.7};
  for (int i = 0; i < 3; ++i) a_star.row(i) = norms[i] * rng.sphere_vector(2).transpose();
  GeneratorParams params;
  params.a = a_star;
  const Matrix x = generate(params, sample_latent(2, 200000, rng), act);

  const MarginalResult res = learn_marginal_norms(x, act, MarginalConfig{});
  REQUIRE(res.norms.size() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(res.norms[i] - norms[i]) / norms[i] <= 0.03);

  // Root-finding cross-check: bisection on the same matching condition.
  const Vector target = (x.array() - act.bias_constant).max(0.0).matrix().rowwise().sum() / x.cols();
  for (int i = 0; i < 3; ++i) {
    const double root = oracles::bisect_root(
        [&](double alpha) { return marginal_mean(act, alpha); }, target[i], 1e-4, 8.0);
    CHECK(std::abs(res.norms[i] - root) / root <= 0.005);
  }
}

TEST_CASE("marginal stage rejects degenerate observations") {
  const Matrix zeros = Matrix::Zero(2, 100);
  CHECK_THROWS(learn_marginal_norms(zeros, ActivationSpec::tanh(), MarginalConfig{}));
}

TEST_CASE("marginal stage reports non-convergence with the residual") {
  const ActivationSpec act = ActivationSpec::sigmoid();
  Rng rng(5);
  GeneratorParams params;
  params.a = Matrix::Ones(2, 1);
  const Matrix x = generate(params, sample_latent(1, 5000, rng), act);
  MarginalConfig cfg;
  cfg.iterations = 2;  // far too few
  cfg.eta = 1e-6;
  CHECK_THROWS_WITH_AS(learn_marginal_norms(x, act, cfg),
                       doctest::Contains("residual"), std::runtime_error);
}

namespace {

TrainConfig small_train(std::uint64_t seed) {
  TrainConfig cfg;
  cfg.eta = 3.5;
  cfg.noise_scale = 0.2;
  cfg.iterations = 2000;
  cfg.batch_m = 2000;
  cfg.seed = seed;
  cfg.k = 1;
  return cfg;
}

Matrix planted_observations(const ActivationSpec& act, long n, std::uint64_t seed) {
  Rng rng(seed);
  GeneratorParams params;
  params.a = Matrix::Ones(2, 1);
  return generate(params, sample_latent(1, static_cast<int>(n), rng), act);
}

}  // namespace

TEST_CASE("descent-ascent run contracts") {
  const ActivationSpec act = ActivationSpec::tanh();
  const Matrix x = planted_observations(act, 2000, 1001);
  const Vector targets = Vector::Ones(2);
  const Matrix z_star = Matrix::Ones(2, 2);

  SUBCASE("row count equals the iteration budget") {
    TrainConfig cfg = small_train(7);
    cfg.iterations = 10;
    const TrajectoryRecord rec = sgda_run(x, act, cfg, targets, &z_star);
    CHECK(rec.rows.size() == 10);
    CHECK(rec.stopped_at == 10);
    for (size_t i = 0; i < rec.rows.size(); ++i)
      CHECK(rec.rows[i].iter == static_cast<int>(i) + 1);
  }

  SUBCASE("iterates stay feasible") {
    TrainConfig cfg = small_train(8);
    cfg.iterations = 200;
    const TrajectoryRecord rec = sgda_run(x, act, cfg, targets, &z_star);
    CHECK(rec.max_feas_violation <= 1e-10);
    CHECK(rec.final_a.rows() == 2);
    CHECK(rec.final_a.cols() == 1);
  }

  SUBCASE("bitwise deterministic in the seed") {
    TrainConfig cfg = small_train(9);
    cfg.iterations = 300;
    const TrajectoryRecord r1 = sgda_run(x, act, cfg, targets, &z_star);
    const TrajectoryRecord r2 = sgda_run(x, act, cfg, targets, &z_star);
    CHECK((r1.final_a.array() == r2.final_a.array()).all());
    REQUIRE(r1.rows.size() == r2.rows.size());
    for (size_t i = 0; i < r1.rows.size(); ++i) {
      CHECK(r1.rows[i].g_emp == r2.rows[i].g_emp);
      CHECK(r1.rows[i].grad_norm == r2.rows[i].grad_norm);
      CHECK(r1.rows[i].rec_err == r2.rows[i].rec_err);
    }
  }

  SUBCASE("different seeds decorrelate") {
    TrainConfig c1 = small_train(10), c2 = small_train(11);
    c1.iterations = c2.iterations = 50;
    const TrajectoryRecord r1 = sgda_run(x, act, c1, targets, &z_star);
    const TrajectoryRecord r2 = sgda_run(x, act, c2, targets, &z_star);
    CHECK(r1.rows[5].g_emp != r2.rows[5].g_emp);
  }

  SUBCASE("recovers the planted covariance and descends on average") {
    for (std::uint64_t seed : {21, 22, 23}) {
      const TrajectoryRecord rec = sgda_run(x, act, small_train(seed), targets, &z_star);
      CHECK(rec.final_rec_err <= 0.1);
      double head = 0.0, tail = 0.0;
      for (int i = 0; i < 50; ++i) {
        head += rec.rows[i].g_emp;
        tail += rec.rows[rec.rows.size() - 1 - i].g_emp;
      }
      // Both windows sit at the batch-sampling noise floor once the run has
      // converged, so an exact comparison is a coin flip; a factor-two bound
      // still catches a run that drifts away from the optimum.
      CHECK(tail <= 2.0 * head);
      CHECK(rec.final_rec_err <= rec.rows.front().rec_err + 1e-12);
    }
  }

  SUBCASE("early stop needs 50 consecutive quiet iterations") {
    TrainConfig cfg = small_train(12);
    cfg.stop_tol = 1e9;  // every iteration is quiet
    const TrajectoryRecord rec = sgda_run(x, act, cfg, targets, &z_star);
    CHECK(rec.stopped_at == 50);
    CHECK(rec.rows.size() == 50);
  }

  SUBCASE("missing ground truth turns the recovery column into NaN") {
    TrainConfig cfg = small_train(13);
    cfg.iterations = 5;
    const TrajectoryRecord rec = sgda_run(x, act, cfg, targets, nullptr);
    CHECK(std::isnan(rec.rows[0].rec_err));
    CHECK(std::isnan(rec.final_rec_err));
  }

  SUBCASE("non-finite losses abort with the iteration index") {
    Matrix bad = x;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    TrainConfig cfg = small_train(14);
    CHECK_THROWS_WITH_AS(sgda_run(bad, act, cfg, targets, &z_star),
                         doctest::Contains("iteration 1"), std::runtime_error);
  }

  SUBCASE("the ascent step is fixed at the exact maximizer") {
    TrainConfig cfg = small_train(15);
    cfg.eta_v = 0.5;
    CHECK_THROWS(sgda_run(x, act, cfg, targets, &z_star));
  }
}

TEST_CASE("leaky relu run also recovers the planted covariance") {
  const ActivationSpec act = ActivationSpec::leaky_relu(0.2);
  const Matrix x = planted_observations(act, 2000, 2001);
  const Vector targets = Vector::Ones(2);
  const Matrix z_star = Matrix::Ones(2, 2);
  const TrajectoryRecord rec = sgda_run(x, act, small_train(31), targets, &z_star);
  CHECK(rec.final_rec_err <= 0.1);
}
