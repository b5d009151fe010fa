#include "mmtrain/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mmtrain/error.hpp"
#include "mmtrain/kernels.hpp"

namespace mmtrain {

const char* to_string(LpStatus status) noexcept {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
  }
  return "?";
}

void LinearProgram::add_row(const std::vector<double>& a, double lo, double hi) {
  if (a.size() != variables) throw Error(ErrorCode::dimension_mismatch, "row length");
  matrix.insert(matrix.end(), a.begin(), a.end());
  row_lower.push_back(lo);
  row_upper.push_back(hi);
  ++constraints;
}

double bound_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < lp.variables; ++j) {
    worst = std::max(worst, -x[j]);
    if (!lp.var_upper.empty()) worst = std::max(worst, x[j] - lp.var_upper[j]);
  }
  for (std::size_t i = 0; i < lp.constraints; ++i) {
    double s = 0.0;
    const double* row = lp.matrix.data() + i * lp.variables;
    for (std::size_t j = 0; j < lp.variables; ++j) s += row[j] * x[j];
    worst = std::max({worst, lp.row_lower[i] - s, s - lp.row_upper[i]});
  }
  return worst;
}

namespace {

enum class Where : unsigned char { basic, lower, upper };

// Columns 0..n-1 are structural, n..n+m-1 the logicals s = A x. The tableau
// holds B^{-1} [A, -I] row-major with the reduced-cost row appended, so every
// row update is one axpy over `width` doubles.
class DualSimplex {
 public:
  DualSimplex(const LinearProgram& lp, const SimplexOptions& opt)
      : lp_(lp), opt_(opt), n_(lp.variables), m_(lp.constraints), width_(n_ + m_) {
    lo_.resize(width_);
    hi_.resize(width_);
    where_.resize(width_);
    x_.assign(width_, 0.0);
    boxed_.assign(n_, false);
    tab_.assign((m_ + 1) * width_, 0.0);
    basis_.resize(m_);

    double scale = 1.0;
    for (double v : lp.row_lower) if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
    for (double v : lp.row_upper) if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
    const double big = 1e9 * scale;

    double* d = cost_row();
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = 0.0;
      hi_[j] = lp.var_upper.empty() ? kInf : lp.var_upper[j];
      d[j] = lp.cost[j];
      if (d[j] < 0.0) {
        if (!std::isfinite(hi_[j])) {
          hi_[j] = big;
          boxed_[j] = true;
        }
        where_[j] = Where::upper;
        x_[j] = hi_[j];
      } else {
        where_[j] = Where::lower;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = n_ + i;
      lo_[j] = lp.row_lower[i];
      hi_[j] = lp.row_upper[i];
      where_[j] = Where::basic;
      basis_[i] = j;
      double* row = row_ptr(i);
      const double* a = lp.matrix.data() + i * n_;
      for (std::size_t k = 0; k < n_; ++k) row[k] = -a[k];
      row[j] = 1.0;
    }
    refresh_basic_values();
  }

  LpSolution run() {
    const std::size_t limit = opt_.max_iterations ? opt_.max_iterations
                                                  : 50 * std::max<std::size_t>(n_, 1);
    LpSolution out;
    std::size_t degenerate_run = 0;
    while (true) {
      const bool bland = degenerate_run >= opt_.degenerate_switch;
      const std::size_t r = choose_leaving(bland);
      if (r == m_) break;
      if (out.iterations >= limit) {
        out.status = LpStatus::iteration_limit;
        out.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
        return out;
      }
      const std::size_t leaving = basis_[r];
      const bool increase = x_[leaving] < lo_[leaving];
      double ratio = 0.0;
      const std::size_t q = choose_entering(r, increase, bland, ratio);
      if (q == width_) {
        out.status = LpStatus::infeasible;
        return out;
      }
      degenerate_run = ratio <= opt_.tolerance ? degenerate_run + 1 : 0;
      pivot(r, q, increase ? lo_[leaving] : hi_[leaving], increase ? Where::lower : Where::upper);
      ++out.iterations;
      if (out.iterations % 64 == 0) refresh_basic_values();
    }
    refresh_basic_values();

    for (std::size_t j = 0; j < n_; ++j) {
      if (boxed_[j] && x_[j] >= hi_[j] * (1.0 - 1e-9)) {
        out.status = LpStatus::unbounded;
        return out;
      }
    }
    out.status = LpStatus::optimal;
    out.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    out.max_violation = bound_violation(lp_, out.x);
    if (out.max_violation > opt_.tolerance) {
      std::vector<double> polished = polish();
      const double v = bound_violation(lp_, polished);
      if (v < out.max_violation) {
        out.x = std::move(polished);
        out.max_violation = v;
      }
    }
    for (std::size_t j = 0; j < n_; ++j) out.objective += lp_.cost[j] * out.x[j];
    return out;
  }

 private:
  double* row_ptr(std::size_t i) { return tab_.data() + i * width_; }
  const double* row_ptr(std::size_t i) const { return tab_.data() + i * width_; }
  double* cost_row() { return row_ptr(m_); }

  double feas_tol(double bound) const {
    return opt_.tolerance * std::max(1.0, std::abs(bound));
  }

  double infeasibility(std::size_t j) const {
    if (x_[j] < lo_[j] - feas_tol(lo_[j])) return lo_[j] - x_[j];
    if (x_[j] > hi_[j] + feas_tol(hi_[j])) return x_[j] - hi_[j];
    return 0.0;
  }

  std::size_t choose_leaving(bool bland) const {
    std::size_t r = m_;
    double worst = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double v = infeasibility(basis_[i]);
      if (v <= 0.0) continue;
      if (bland) {
        if (r == m_ || basis_[i] < basis_[r]) r = i;
      } else if (v > worst) {
        worst = v;
        r = i;
      }
    }
    return r;
  }

  // Entering column for leaving row r; x_B[r] = -sum_N T_rj x_j must move up
  // (increase) or down. Returns width_ when the row cannot be repaired.
  std::size_t choose_entering(std::size_t r, bool increase, bool bland, double& ratio_out) const {
    const double* row = row_ptr(r);
    const double* d = row_ptr(m_);
    const double sigma = increase ? 1.0 : -1.0;
    std::size_t q = width_;
    double best = kInf;
    double best_alpha = 0.0;
    for (std::size_t j = 0; j < width_; ++j) {
      const Where w = where_[j];
      if (w == Where::basic || lo_[j] == hi_[j]) continue;
      const double alpha = sigma * row[j];
      const bool eligible = (w == Where::lower && alpha < -opt_.tolerance) ||
                            (w == Where::upper && alpha > opt_.tolerance);
      if (!eligible) continue;
      const double ratio = std::abs(d[j]) / std::abs(alpha);
      bool take = q == width_ || ratio < best - opt_.tolerance;
      if (!take && ratio <= best + opt_.tolerance) {
        take = bland ? false : std::abs(alpha) > best_alpha;
      }
      if (take) {
        q = j;
        best = std::min(best, ratio);
        best_alpha = std::abs(alpha);
      }
    }
    ratio_out = best;
    return q;
  }

  void pivot(std::size_t r, std::size_t q, double target, Where leaves_to) {
    const std::size_t leaving = basis_[r];
    double* prow = row_ptr(r);
    const double piv = prow[q];
    const double step = (x_[leaving] - target) / piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) x_[basis_[i]] -= row_ptr(i)[q] * step;
    }
    x_[q] += step;
    x_[leaving] = target;
    where_[leaving] = leaves_to;
    where_[q] = Where::basic;
    basis_[r] = q;

    const double inv = 1.0 / piv;
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    const std::span<const double> pivot_row(prow, width_);
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* row = row_ptr(i);
      const double f = row[q];
      if (f == 0.0) continue;
      kernels::axpy(-f, pivot_row, {row, width_});
      row[q] = 0.0;
    }
  }

  // x_B = -T_N x_N from the nonbasic values.
  void refresh_basic_values() {
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < width_; ++j) {
      if (where_[j] != Where::basic && x_[j] != 0.0) active.push_back(j);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = row_ptr(i);
      double v = 0.0;
      for (std::size_t j : active) v -= row[j] * x_[j];
      x_[basis_[i]] = v;
    }
  }

  // Solves B x_B = -N x_N against the original columns.
  std::vector<double> polish() const {
    using Eigen::Index;
    const auto mm = static_cast<Index>(m_);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(mm, mm);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mm);
    auto column = [&](std::size_t j, auto&& emit) {
      if (j < n_) {
        for (std::size_t i = 0; i < m_; ++i) emit(i, lp_.matrix[i * n_ + j]);
      } else {
        emit(j - n_, -1.0);
      }
    };
    for (std::size_t k = 0; k < m_; ++k) {
      column(basis_[k], [&](std::size_t i, double v) { b(static_cast<Index>(i), static_cast<Index>(k)) = v; });
    }
    for (std::size_t j = 0; j < width_; ++j) {
      if (where_[j] == Where::basic || x_[j] == 0.0) continue;
      column(j, [&](std::size_t i, double v) { rhs(static_cast<Index>(i)) -= v * x_[j]; });
    }
    const Eigen::VectorXd xb = b.partialPivLu().solve(rhs);
    std::vector<double> x(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    for (std::size_t k = 0; k < m_; ++k) {
      if (basis_[k] < n_) x[basis_[k]] = xb(static_cast<Index>(k));
    }
    return x;
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::size_t n_, m_, width_;
  std::vector<double> lo_, hi_, x_;
  std::vector<Where> where_;
  std::vector<bool> boxed_;
  std::vector<double> tab_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  if (lp.cost.size() != lp.variables || lp.row_lower.size() != lp.constraints ||
      lp.row_upper.size() != lp.constraints || lp.matrix.size() != lp.variables * lp.constraints ||
      (!lp.var_upper.empty() && lp.var_upper.size() != lp.variables)) {
    throw Error(ErrorCode::dimension_mismatch, "linear program arrays do not match its shape");
  }
  for (std::size_t i = 0; i < lp.constraints; ++i) {
    if (lp.row_lower[i] > lp.row_upper[i]) {
      return LpSolution{LpStatus::infeasible, {}, 0.0, 0, 0.0};
    }
  }
  return DualSimplex(lp, options).run();
}

}  // namespace mmtrain
