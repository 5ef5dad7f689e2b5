#include "support/oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracles {

McEstimate mc_pair_expectation(const std::function<double(double, double)>& f, double rho,
                               long samples, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double mix = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double g1 = gauss(eng);
    const double g2 = gauss(eng);
    const double v = f(g1, rho * g1 + mix * g2);
    sum += v;
    sumsq += v * v;
  }
  McEstimate est;
  est.mean = sum / samples;
  const double var = std::max(0.0, sumsq / samples - est.mean * est.mean);
  est.se = std::sqrt(var / samples);
  return est;
}

McEstimate mc_scalar_expectation(const std::function<double(double)>& f, long samples,
                                 std::uint64_t seed) {
  return mc_pair_expectation([&](double x, double) { return f(x); }, 0.0, samples, seed);
}

Matrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& at, double h) {
  Matrix g(at.rows(), at.cols());
  Matrix probe = at;
  for (int i = 0; i < at.rows(); ++i)
    for (int j = 0; j < at.cols(); ++j) {
      probe(i, j) = at(i, j) + h;
      const double up = f(probe);
      probe(i, j) = at(i, j) - h;
      const double down = f(probe);
      probe(i, j) = at(i, j);
      g(i, j) = (up - down) / (2.0 * h);
    }
  return g;
}

double fd_scalar(const std::function<double(double)>& f, double at, double h) {
  return (f(at + h) - f(at - h)) / (2.0 * h);
}

double explicit_hermite(int n, double x) {
  switch (n) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return (x * x - 1.0) / std::sqrt(2.0);
    case 3: return (x * x * x - 3.0 * x) / std::sqrt(6.0);
    case 4: return (x * x * x * x - 6.0 * x * x + 3.0) / std::sqrt(24.0);
    default: throw std::invalid_argument("explicit_hermite: only n <= 4");
  }
}

double bisect_root(const std::function<double(double)>& curve, double target, double lo,
                   double hi, int iters) {
  double flo = curve(lo) - target;
  double fhi = curve(hi) - target;
  if (flo > 0.0 || fhi < 0.0)
    throw std::invalid_argument("bisect_root: target not bracketed");
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = curve(mid) - target;
    if (fm <= 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// assignment values: 0 unknown, +1 true, -1 false.
bool dpll(const std::vector<std::array<int, 3>>& clauses, std::vector<int>& assign) {
  for (;;) {
    int unit_literal = 0;
    for (const auto& clause : clauses) {
      bool satisfied = false;
      int unassigned = 0, last_free = 0;
      for (int lit : clause) {
        const int v = assign[std::abs(lit)];
        if (v == 0) {
          ++unassigned;
          last_free = lit;
        } else if ((v > 0) == (lit > 0)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      if (unassigned == 0) return false;
      if (unassigned == 1 && unit_literal == 0) unit_literal = last_free;
    }
    if (unit_literal == 0) break;
    assign[std::abs(unit_literal)] = unit_literal > 0 ? 1 : -1;
  }

  int var = 0;
  for (size_t v = 1; v < assign.size(); ++v)
    if (assign[v] == 0) {
      var = static_cast<int>(v);
      break;
    }
  if (var == 0) return true;  // nothing unassigned and no clause falsified
  for (int choice : {1, -1}) {
    std::vector<int> saved = assign;
    assign[var] = choice;
    if (dpll(clauses, assign)) return true;
    assign = saved;
  }
  return false;
}

}  // namespace

bool dpll_satisfiable(const onegan::Sat3Instance& sat) {
  std::vector<int> assign(sat.num_vars + 1, 0);
  return dpll(sat.clauses, assign);
}

onegan::Sat3Instance random_sat(int d, int clauses, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_int_distribution<int> var(1, d);
  std::bernoulli_distribution flip(0.5);
  onegan::Sat3Instance sat;
  sat.num_vars = d;
  for (int c = 0; c < clauses; ++c) {
    std::array<int, 3> clause{};
    for (int i = 0; i < 3; ++i) clause[i] = flip(eng) ? var(eng) : -var(eng);
    sat.clauses.push_back(clause);
  }
  return sat;
}

double naive_half_sqdiff(const Matrix& x, const Matrix& s) {
  double acc = 0.0;
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) {
      const double diff = x(i, j) - s(i, j);
      acc += diff * diff;
    }
  return 0.5 * acc;
}

}  // namespace oracles
