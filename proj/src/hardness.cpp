#include "onegan/hardness.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace onegan {

void Sat3Instance::validate() const {
  if (num_vars < 1) throw std::invalid_argument("Sat3Instance: need at least one variable");
  if (clauses.size() < 4)
    throw std::invalid_argument("Sat3Instance: at least 4 clauses required");
  for (const auto& c : clauses)
    for (int lit : c) {
      const int v = std::abs(lit);
      if (lit == 0 || v > num_vars)
        throw std::invalid_argument("Sat3Instance: literal out of range");
    }
}

Sat3Instance parse_dimacs(std::istream& in) {
  Sat3Instance sat;
  int declared_clauses = -1;
  std::string line;
  std::vector<int> pending;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream hdr(line);
      std::string p, fmt;
      if (!(hdr >> p >> fmt >> sat.num_vars >> declared_clauses) || fmt != "cnf")
        throw std::invalid_argument("parse_dimacs: malformed problem line");
      continue;
    }
    std::istringstream body(line);
    int lit;
    while (body >> lit) {
      if (lit == 0) {
        if (pending.size() != 3)
          throw std::invalid_argument("parse_dimacs: clause must have exactly 3 literals");
        sat.clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
      } else {
        pending.push_back(lit);
      }
    }
  }
  if (!pending.empty()) throw std::invalid_argument("parse_dimacs: unterminated clause");
  if (declared_clauses >= 0 && sat.clauses.size() != static_cast<size_t>(declared_clauses))
    throw std::invalid_argument("parse_dimacs: clause count does not match header");
  sat.validate();
  return sat;
}

Sat3Instance parse_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("parse_dimacs_file: cannot open " + path);
  return parse_dimacs(in);
}

int MinMaxForm::y_size() const { return static_cast<int>(a.rows()) + 1 + 2 * num_vars; }

namespace {
inline double relu(double v) { return v > 0.0 ? v : 0.0; }
}  // namespace

Vector MinMaxForm::grad_y(const Vector& x) const {
  if (x.size() != num_vars) throw std::invalid_argument("MinMaxForm: x dimension mismatch");
  const int m = static_cast<int>(a.rows());
  Vector g(y_size());
  const Vector ax = a * x;
  for (int i = 0; i < m; ++i) g[i] = relu(-ax[i] - 2.0);
  double counting = 0.0;
  for (int i = 0; i < num_vars; ++i) counting += relu(x[i]) + relu(-x[i]);
  g[m] = counting - num_vars;
  for (int i = 0; i < num_vars; ++i) {
    g[m + 1 + i] = relu(x[i] - 1.0);
    g[m + 1 + num_vars + i] = relu(-x[i] - 1.0);
  }
  return g;
}

double MinMaxForm::eval(const Vector& x, const Vector& y) const {
  if (y.size() != y_size()) throw std::invalid_argument("MinMaxForm: y dimension mismatch");
  return grad_y(x).dot(y);
}

MinMaxForm build_minmax(const Sat3Instance& sat) {
  sat.validate();
  MinMaxForm form;
  form.num_vars = sat.num_vars;
  form.a = Matrix::Zero(static_cast<int>(sat.clauses.size()), sat.num_vars);
  for (size_t i = 0; i < sat.clauses.size(); ++i)
    for (int lit : sat.clauses[i])
      form.a(static_cast<int>(i), std::abs(lit) - 1) += lit > 0 ? 1.0 : -1.0;
  return form;
}

bool stationary_exists_bruteforce(const MinMaxForm& form) {
  const int d = form.num_vars;
  if (d > 24) throw std::invalid_argument("stationary_exists_bruteforce: d exceeds budget");
  const int m = static_cast<int>(form.a.rows());
  Vector x(d);
  for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << d); ++bits) {
    for (int i = 0; i < d; ++i) x[i] = (bits >> i) & 1 ? 1.0 : -1.0;
    const Vector ax = form.a * x;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) ok = ax[i] >= -2.0;
    if (ok) return true;
  }
  return false;
}

}  // namespace onegan
