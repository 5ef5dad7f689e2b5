#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "onegan/model.hpp"

namespace onegan {

// A 3SAT instance over variables 1..num_vars. Literals are signed variable
// indices (DIMACS style): +v is the variable, -v its negation. Clauses may
// repeat literals.
struct Sat3Instance {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;

  // Throws std::invalid_argument if a literal is out of range, a clause does
  // not have exactly 3 literals, or there are fewer than 4 clauses.
  void validate() const;
};

// Parses DIMACS CNF restricted to 3-literal clauses. Throws on malformed
// input or clauses of the wrong width.
Sat3Instance parse_dimacs(std::istream& in);
Sat3Instance parse_dimacs_file(const std::string& path);

// The relu-bilinear form compiled from a 3SAT instance:
//   f(x, y) = relu(-A x - 2*1)^T y1
//           + (sum_i [relu(x_i) + relu(-x_i)] - d) * y2
//           + relu(x - 1)^T y3 + relu(-x - 1)^T y4.
// Row i of A sums the signed unit vectors of clause i's literals, so
// a_i^T x >= -2 on x in {-1,+1}^d exactly when clause i is satisfied.
struct MinMaxForm {
  Matrix a;           // clause matrix, one row per clause
  int num_vars = 0;   // d
  int y_size() const; // clauses + 1 + 2d

  // Stacked y layout: [y1 (clauses)] [y2 (1)] [y3 (d)] [y4 (d)].
  double eval(const Vector& x, const Vector& y) const;
  Vector grad_y(const Vector& x) const;
};

MinMaxForm build_minmax(const Sat3Instance& sat);

// True iff some x in {-1,+1}^d zeroes every term group, i.e. A x >= -2
// entrywise. Exhaustive; requires num_vars <= 24.
bool stationary_exists_bruteforce(const MinMaxForm& form);

}  // namespace onegan
