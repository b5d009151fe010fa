#pragma once

// Dense bounded dual simplex for
//
//   minimize    c^T x
//   subject to  row_lower <= A x <= row_upper
//               0 <= x <= var_upper
//
// Each row gets a logical variable s = A x carrying the row bounds, so the
// all-logical basis with x at a bound is a valid start whenever c >= 0 (the
// Dantzig selector's case); negative costs on unbounded columns are handled
// with a temporary box. Leaving rows are picked by largest bound violation;
// after a run of dual-degenerate pivots the solver switches to Bland's
// smallest-index rule until progress resumes.

#include <cstddef>
#include <limits>
#include <vector>

namespace mmtrain {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinearProgram {
  std::size_t variables = 0;
  std::size_t constraints = 0;
  std::vector<double> cost;        // variables
  std::vector<double> matrix;      // constraints x variables, row-major
  std::vector<double> row_lower;   // constraints, may be -inf
  std::vector<double> row_upper;   // constraints, may be +inf
  std::vector<double> var_upper;   // variables; empty means all +inf

  /// Appends the row lo <= a^T x <= hi.
  void add_row(const std::vector<double>& a, double lo, double hi);
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status) noexcept;

struct SimplexOptions {
  double tolerance = 1e-9;
  /// 0 means 50 * variables.
  std::size_t max_iterations = 0;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_switch = 50;
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  /// Largest row or variable bound violation of x.
  double max_violation = 0.0;
};

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Largest amount by which x breaks a row or variable bound (0 if feasible).
double bound_violation(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace mmtrain
