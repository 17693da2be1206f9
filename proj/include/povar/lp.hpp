#pragma once
// Small dense linear programs, solved by a two-phase primal simplex on a full
// tableau with Bland's pivot rule (deterministic and cycle-free). Built for
// the row-wise l1 programs of the sparse estimator: a few hundred variables
// and constraints at most.

#include <vector>

#include "povar/matrix.hpp"

namespace povar {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus s);

// minimize cost'x  subject to  A x (<= or =) rhs,  x_j >= 0 where nonneg[j].
// Free variables are split internally into differences of nonnegative pairs.
struct LinearProgram {
  Matrix A;                   // m x n
  std::vector<double> rhs;    // m
  std::vector<double> cost;   // n
  std::vector<char> is_le;    // m: 1 = "<=", 0 = "="
  std::vector<char> nonneg;   // n: 1 = "x >= 0", 0 = free
};

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  std::vector<double> x;      // n, meaningful when status == optimal
  double objective = 0.0;     // cost'x when optimal
  int iterations = 0;         // pivots across both phases
};

// tol is used for feasibility, optimality, and pivot admission. max_iter = 0
// picks an automatic cap from the problem size.
LpSolution solve_lp(const LinearProgram& lp, double tol = 1e-9, int max_iter = 0);

}  // namespace povar
