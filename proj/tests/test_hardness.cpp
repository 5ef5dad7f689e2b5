#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "onegan/hardness.hpp"
#include "onegan/rng.hpp"
#include "support/oracles.hpp"

using namespace onegan;

namespace {

Sat3Instance padded(std::vector<std::array<int, 3>> clauses, int num_vars) {
  // Instances must carry at least 4 clauses; duplicate the last to pad.
  while (clauses.size() < 4) clauses.push_back(clauses.back());
  return Sat3Instance{num_vars, std::move(clauses)};
}

Vector hypercube_point(unsigned bits, int d) {
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = (bits >> i) & 1u ? 1.0 : -1.0;
  return x;
}

}  // namespace

TEST_CASE("clause rows sum signed unit vectors") {
  const Sat3Instance sat = padded({{{1, 2, -3}}, {{1, 1, 1}}, {{-2, 2, 3}}}, 3);
  const MinMaxForm form = build_minmax(sat);
  REQUIRE(form.a.rows() == 4);
  REQUIRE(form.a.cols() == 3);
  CHECK(form.a.row(0) == Eigen::RowVector3d(1, 1, -1));
  CHECK(form.a.row(1) == Eigen::RowVector3d(3, 0, 0));   // repeated literal
  CHECK(form.a.row(2) == Eigen::RowVector3d(0, 0, 1));   // tautological pair cancels
  CHECK(form.y_size() == 4 + 1 + 2 * 3);
}

TEST_CASE("bilinear form values") {
  const Sat3Instance sat = padded({{{1, 2, 3}}, {{-1, 2, 3}}, {{1, -2, 3}}, {{1, 2, -3}}}, 3);
  const MinMaxForm form = build_minmax(sat);
  const int d = 3;
  Rng rng(91);

  SUBCASE("y = 0 kills the form") {
    for (int t = 0; t < 5; ++t)
      CHECK(form.eval(rng.normal_vector(d), Vector::Zero(form.y_size())) == 0.0);
  }

  SUBCASE("a satisfying assignment kills the form for every y") {
    const Vector x = Vector::Ones(d);  // satisfies every clause above
    CHECK(form.grad_y(x).cwiseAbs().maxCoeff() == 0.0);
    for (int t = 0; t < 5; ++t) CHECK(form.eval(x, rng.normal_vector(form.y_size())) == 0.0);
  }

  SUBCASE("counting block measures the distance to the cube") {
    Vector x = Vector::Constant(d, 0.5);
    Vector y = Vector::Zero(form.y_size());
    y[form.a.rows()] = 1.0;  // y2 only
    CHECK(form.eval(x, y) == doctest::Approx(0.5 * d - d).epsilon(1e-15));
  }

  SUBCASE("a violated clause contributes relu(-a'x - 2)") {
    const Vector x = Vector::Constant(d, -1.0);  // violates the all-positive clause
    Vector y = Vector::Zero(form.y_size());
    y[0] = 1.0;
    CHECK(form.eval(x, y) == doctest::Approx(1.0).epsilon(1e-15));  // relu(3 - 2)
  }

  SUBCASE("box blocks activate outside [-1, 1]") {
    Vector x = Vector::Zero(d);
    x[1] = 1.75;
    Vector y = Vector::Zero(form.y_size());
    y[form.a.rows() + 1 + 1] = 2.0;  // y3 for coordinate 1
    CHECK(form.eval(x, y) == doctest::Approx(2.0 * 0.75).epsilon(1e-14));
    x[1] = -1.75;
    y.setZero();
    y[form.a.rows() + 1 + d + 1] = 2.0;  // y4 for coordinate 1
    CHECK(form.eval(x, y) == doctest::Approx(2.0 * 0.75).epsilon(1e-14));
  }

  SUBCASE("dimension checks") {
    CHECK_THROWS(form.eval(Vector::Zero(d + 1), Vector::Zero(form.y_size())));
    CHECK_THROWS(form.eval(Vector::Zero(d), Vector::Zero(form.y_size() + 2)));
    CHECK_THROWS(form.grad_y(Vector::Zero(d - 1)));
  }
}

TEST_CASE("the x-gradient vanishes at a satisfying corner with y = 0") {
  const Sat3Instance sat = padded({{{1, -2, 3}}, {{-1, -2, -3}}, {{2, 3, 1}}}, 3);
  const MinMaxForm form = build_minmax(sat);
  const Vector x_star = hypercube_point(0b101, 3);  // x = (+1, -1, +1) satisfies all
  REQUIRE(form.grad_y(x_star).cwiseAbs().maxCoeff() == 0.0);

  const Vector y = Vector::Zero(form.y_size());
  const Matrix grad = oracles::fd_gradient(
      [&](const Matrix& x) { return form.eval(Vector(x.col(0)), y); }, x_star, 1e-5);
  CHECK(grad.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("brute force matches satisfiability") {
  SUBCASE("a contradictory instance has no stationary corner") {
    const Sat3Instance sat{2,
                           {{{1, 1, 1}}, {{-1, -1, -1}}, {{2, 2, 2}}, {{-2, -2, -2}}}};
    CHECK_FALSE(stationary_exists_bruteforce(build_minmax(sat)));
    CHECK_FALSE(oracles::dpll_satisfiable(sat));
  }

  SUBCASE("random instances agree with a DPLL oracle") {
    for (int d = 4; d <= 8; ++d) {
      const int m = std::max(4, 2 * d);
      for (int t = 0; t < (d == 4 ? 50 : 12); ++t) {
        const Sat3Instance sat = oracles::random_sat(d, m, 1000u * d + t);
        sat.validate();
        const bool via_form = stationary_exists_bruteforce(build_minmax(sat));
        const bool via_dpll = oracles::dpll_satisfiable(sat);
        CHECK(via_form == via_dpll);
      }
    }
  }

  SUBCASE("the exhaustive budget is enforced") {
    Sat3Instance sat{25, {{{1, 2, 3}}, {{4, 5, 6}}, {{7, 8, 9}}, {{10, 11, 12}}}};
    CHECK_THROWS(stationary_exists_bruteforce(build_minmax(sat)));
  }
}

TEST_CASE("instance validation") {
  CHECK_THROWS(Sat3Instance{2, {{{1, 2, 0}}, {{1, 1, 1}}, {{2, 2, 2}}, {{1, 2, 1}}}}.validate());
  CHECK_THROWS(Sat3Instance{2, {{{1, 2, 3}}, {{1, 1, 1}}, {{2, 2, 2}}, {{1, 2, 1}}}}.validate());
  CHECK_THROWS(Sat3Instance{2, {{{1, 2, 2}}, {{1, 1, 1}}, {{2, 2, 2}}}}.validate());  // 3 clauses
  Sat3Instance ok{2, {{{1, 2, 2}}, {{1, 1, 1}}, {{2, 2, 2}}, {{-1, -2, 1}}}};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("DIMACS parsing") {
  SUBCASE("round trip on a well-formed file") {
    std::istringstream in(
        "c a small instance\n"
        "p cnf 3 4\n"
        "1 2 -3 0\n"
        "-1 2 3 0\n"
        "c interleaved comment\n"
        "3 3 3 0\n"
        "-2 -3 1 0\n");
    const Sat3Instance sat = parse_dimacs(in);
    CHECK(sat.num_vars == 3);
    REQUIRE(sat.clauses.size() == 4);
    CHECK(sat.clauses[0] == std::array<int, 3>{1, 2, -3});
    CHECK(sat.clauses[2] == std::array<int, 3>{3, 3, 3});
  }

  SUBCASE("malformed inputs throw") {
    std::istringstream bad_header("p sat 3 4\n1 2 3 0\n");
    CHECK_THROWS(parse_dimacs(bad_header));
    std::istringstream two_lit("p cnf 3 4\n1 2 0\n1 2 3 0\n1 2 3 0\n1 2 3 0\n");
    CHECK_THROWS(parse_dimacs(two_lit));
    std::istringstream unterminated("p cnf 3 4\n1 2 3 0\n1 2 3 0\n1 2 3 0\n1 2 3\n");
    CHECK_THROWS(parse_dimacs(unterminated));
    std::istringstream count_mismatch("p cnf 3 5\n1 2 3 0\n1 2 3 0\n1 2 3 0\n1 2 3 0\n");
    CHECK_THROWS(parse_dimacs(count_mismatch));
    CHECK_THROWS(parse_dimacs_file("/nonexistent/path.cnf"));
  }
}
