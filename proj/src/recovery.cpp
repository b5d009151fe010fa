#include "mmtrain/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mmtrain/error.hpp"
#include "mmtrain/kernels.hpp"

namespace mmtrain {

namespace {

using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using Eigen::Index;

Eigen::Map<const CMatrix> as_matrix(const SensingMatrix& x) {
  return {x.data().data(), static_cast<Index>(x.rows()), static_cast<Index>(x.cols())};
}

Eigen::Map<const CVector> as_vector(std::span<const cplx> v) {
  return {v.data(), static_cast<Index>(v.size())};
}

void check_measurement(std::span<const cplx> y, const SensingMatrix& x, const OfdmParams& params) {
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::dimension_mismatch, std::to_string(y.size()) + " measurements for " +
                                                   std::to_string(x.rows()) + " tones");
  }
  if (x.cols() != params.taps) {
    throw Error(ErrorCode::dimension_mismatch, "sensing matrix width differs from tap count");
  }
}

// sqrt(E) X restricted to the given columns.
CMatrix gather_columns(const SensingMatrix& x, double amp, std::span<const std::size_t> cols) {
  CMatrix sub(static_cast<Index>(x.rows()), static_cast<Index>(cols.size()));
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      sub(static_cast<Index>(r), static_cast<Index>(k)) = amp * x(r, cols[k]);
    }
  }
  return sub;
}

}  // namespace

const char* to_string(SolverStatus status) noexcept {
  switch (status) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::infeasible: return "infeasible";
    case SolverStatus::iteration_limit: return "iteration-limit";
  }
  return "?";
}

double RecoveryResult::score(std::span<const cplx> truth) {
  nmse_db = mmtrain::nmse_db(truth, estimate);
  return *nmse_db;
}

double DantzigConfig::resolve_epsilon(const OfdmParams& params) const {
  if (epsilon_rule == EpsilonRule::explicit_value) return epsilon;
  return scale * std::sqrt(noise_variance) *
         std::sqrt(params.symbol_energy * static_cast<double>(params.pilot_tones)) *
         std::sqrt(2.0 * std::log(static_cast<double>(params.taps)));
}

void DantzigConfig::validate() const {
  if (epsilon_rule == EpsilonRule::explicit_value && !(epsilon > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "explicit epsilon must be > 0");
  }
  if (epsilon_rule == EpsilonRule::scaled && !(scale > 0.0 && noise_variance >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "scaled epsilon needs c > 0 and sigma^2 >= 0");
  }
  if (magnitude_floor < 0.0 || relative_floor < 0.0) {
    throw Error(ErrorCode::invalid_argument, "support floors must be >= 0");
  }
}

std::vector<std::size_t> support_of(std::span<const cplx> taps, double magnitude_floor,
                                    double relative_floor) {
  double peak = 0.0;
  for (const cplx& t : taps) peak = std::max(peak, std::abs(t));
  const double cut = std::max(magnitude_floor, relative_floor * peak);
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    if (std::abs(taps[i]) > cut) support.push_back(i);
  }
  return support;
}

LinearProgram dantzig_program(std::span<const cplx> y, const SensingMatrix& x,
                              const OfdmParams& params, double epsilon) {
  check_measurement(y, x, params);
  const auto X = as_matrix(x);
  const double amp = std::sqrt(params.symbol_energy);
  const Eigen::MatrixXcd gram = amp * (X.adjoint() * X);  // D x D
  const std::vector<cplx> corr = x.apply_adjoint(y);      // X^H y

  const std::size_t d = params.taps;
  const std::size_t half = 2 * d;   // [u, v]
  LinearProgram lp;
  lp.variables = 2 * half;           // [u+, v+, u-, v-]
  lp.constraints = half;
  lp.cost.assign(lp.variables, 1.0);
  lp.matrix.assign(lp.variables * lp.constraints, 0.0);
  lp.row_lower.resize(half);
  lp.row_upper.resize(half);
  const double e = epsilon / std::numbers::sqrt2;

  // Real embedding of A h with A = gram: [Re; Im] = G [u; v] with
  // G = [[Ar, -Ai], [Ai, Ar]]; row i bounds (G w)_i to c_i -+ e.
  for (std::size_t i = 0; i < half; ++i) {
    const bool imag_row = i >= d;
    const std::size_t k = imag_row ? i - d : i;
    const double c = imag_row ? corr[k].imag() : corr[k].real();
    double* row = lp.matrix.data() + i * lp.variables;
    for (std::size_t j = 0; j < half; ++j) {
      const bool imag_col = j >= d;
      const cplx a = gram(static_cast<Index>(k), static_cast<Index>(imag_col ? j - d : j));
      double g;
      if (!imag_row) g = imag_col ? -a.imag() : a.real();
      else g = imag_col ? a.real() : a.imag();
      row[j] = g;
      row[j + half] = -g;
    }
    lp.row_lower[i] = c - e;
    lp.row_upper[i] = c + e;
  }
  return lp;
}

std::vector<cplx> restricted_least_squares(std::span<const cplx> y, const SensingMatrix& x,
                                           const OfdmParams& params,
                                           std::span<const std::size_t> support) {
  std::vector<cplx> h(params.taps, cplx{0.0, 0.0});
  if (support.empty()) return h;
  const CMatrix sub = gather_columns(x, std::sqrt(params.symbol_energy), support);
  const CVector coef = sub.completeOrthogonalDecomposition().solve(as_vector(y));
  for (std::size_t k = 0; k < support.size(); ++k) h[support[k]] = coef(static_cast<Index>(k));
  return h;
}

RecoveryResult dantzig_recover(std::span<const cplx> y, const SensingMatrix& x,
                               const OfdmParams& params, const DantzigConfig& config,
                               const SimplexOptions& solver) {
  config.validate();
  const double epsilon = config.resolve_epsilon(params);
  if (!(epsilon > 0.0)) throw Error(ErrorCode::invalid_argument, "epsilon must be > 0");
  const LinearProgram lp = dantzig_program(y, x, params, epsilon);
  const LpSolution sol = solve_lp(lp, solver);

  RecoveryResult out;
  out.iterations = sol.iterations;
  out.estimate.assign(params.taps, cplx{0.0, 0.0});
  switch (sol.status) {
    case LpStatus::optimal: out.solver_status = SolverStatus::optimal; break;
    case LpStatus::infeasible: out.solver_status = SolverStatus::infeasible; return out;
    case LpStatus::iteration_limit: out.solver_status = SolverStatus::iteration_limit; return out;
    case LpStatus::unbounded:
      // The objective is a sum of nonnegative variables.
      throw Error(ErrorCode::invalid_argument, "Dantzig program reported unbounded");
  }
  const std::size_t d = params.taps;
  const std::size_t half = 2 * d;
  for (std::size_t k = 0; k < d; ++k) {
    const double re = sol.x[k] - sol.x[half + k];
    const double im = sol.x[d + k] - sol.x[half + d + k];
    out.estimate[k] = {re, im};
  }
  for (std::size_t k = 0; k < d; ++k) {
    out.objective_value += std::abs(out.estimate[k].real()) + std::abs(out.estimate[k].imag());
  }
  out.recovered_support = support_of(out.estimate, config.magnitude_floor, config.relative_floor);
  if (config.debias) {
    out.estimate = restricted_least_squares(y, x, params, out.recovered_support);
  }
  return out;
}

RecoveryResult omp_recover(std::span<const cplx> y, const SensingMatrix& x,
                           const OfdmParams& params, std::size_t sparsity) {
  check_measurement(y, x, params);
  if (sparsity > x.rows()) {
    throw Error(ErrorCode::invalid_argument, "OMP sparsity exceeds the number of measurements");
  }
  RecoveryResult out;
  out.estimate.assign(params.taps, cplx{0.0, 0.0});
  if (sparsity == 0) return out;

  const double amp = std::sqrt(params.symbol_energy);
  const auto yv = as_vector(y);
  std::vector<cplx> residual(y.begin(), y.end());
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(params.taps, false);
  CVector coef;
  for (std::size_t step = 0; step < sparsity; ++step) {
    const std::vector<cplx> corr = x.apply_adjoint(residual);
    std::size_t best = params.taps;
    double best_mag = -1.0;
    for (std::size_t k = 0; k < params.taps; ++k) {
      if (taken[k]) continue;
      const double mag = std::norm(corr[k]);
      if (mag > best_mag) {
        best_mag = mag;
        best = k;
      }
    }
    chosen.push_back(best);
    taken[best] = true;

    const CMatrix sub = gather_columns(x, amp, chosen);
    const Eigen::ColPivHouseholderQR<CMatrix> qr(sub);
    if (qr.rank() < static_cast<Index>(chosen.size())) {
      throw Error(ErrorCode::rank_deficient,
                  "OMP step " + std::to_string(step + 1) + " selected dependent columns");
    }
    coef = qr.solve(yv);
    const CVector r = yv - sub * coef;
    residual.assign(r.data(), r.data() + r.size());
  }
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    out.estimate[chosen[k]] = coef(static_cast<Index>(k));
  }
  out.recovered_support = chosen;
  std::sort(out.recovered_support.begin(), out.recovered_support.end());
  for (const cplx& t : out.estimate) out.objective_value += std::abs(t.real()) + std::abs(t.imag());
  return out;
}

RecoveryResult fde_ls_recover(std::span<const cplx> y_full, const SensingMatrix& x_full,
                              const OfdmParams& params) {
  check_measurement(y_full, x_full, params);
  if (x_full.rows() < params.taps) {
    throw Error(ErrorCode::singular_system, "FDE needs at least Wtau_max pilot tones");
  }
  const CMatrix a = std::sqrt(params.symbol_energy) * as_matrix(x_full);
  const Eigen::ColPivHouseholderQR<CMatrix> qr(a);
  if (qr.rank() < static_cast<Index>(params.taps)) {
    throw Error(ErrorCode::singular_system, "FDE pilot matrix is rank deficient");
  }
  const CVector h = qr.solve(as_vector(y_full));
  RecoveryResult out;
  out.estimate.assign(h.data(), h.data() + h.size());
  out.recovered_support = support_of(out.estimate, 0.0, 0.0);
  for (const cplx& t : out.estimate) out.objective_value += std::abs(t.real()) + std::abs(t.imag());
  return out;
}

double nmse_db(std::span<const cplx> truth, std::span<const cplx> estimate) {
  if (truth.size() != estimate.size()) {
    throw Error(ErrorCode::dimension_mismatch, "estimate and channel lengths differ");
  }
  const double signal = kernels::sum_abs2(truth);
  if (!(signal > 0.0)) throw Error(ErrorCode::zero_channel, "NMSE of an all-zero channel");
  double err = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) err += std::norm(estimate[i] - truth[i]);
  if (err == 0.0) return kNmseFloorDb;
  return std::max(kNmseFloorDb, 10.0 * std::log10(err / signal));
}

}  // namespace mmtrain
