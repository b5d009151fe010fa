#pragma once

// Channel estimators for the pilot measurements y = sqrt(E) X h + z:
//  - Dantzig selector (l1 minimisation under an l-infinity bound on the
//    correlated residual), solved as a real linear program;
//  - orthogonal matching pursuit, used as an independent cross-check;
//  - dense least squares over all Wtau_max taps (the FDE baseline).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mmtrain/channel.hpp"
#include "mmtrain/simplex.hpp"

namespace mmtrain {

inline constexpr double kNmseFloorDb = -200.0;

enum class SolverStatus { optimal, infeasible, iteration_limit };

const char* to_string(SolverStatus status) noexcept;

struct RecoveryResult {
  std::vector<cplx> estimate;               // length Wtau_max
  std::vector<std::size_t> recovered_support;
  std::optional<double> nmse_db;            // filled by score()
  SolverStatus solver_status = SolverStatus::optimal;
  double objective_value = 0.0;             // |Re|_1 + |Im|_1 of the LP solution
  std::size_t iterations = 0;

  bool ok() const { return solver_status == SolverStatus::optimal; }
  /// Sets nmse_db against the true taps and returns it.
  double score(std::span<const cplx> truth);
};

enum class EpsilonRule { explicit_value, scaled };

struct DantzigConfig {
  EpsilonRule epsilon_rule = EpsilonRule::scaled;
  double epsilon = 0.0;          // used when epsilon_rule == explicit_value
  double scale = 1.0;            // c in the scaled rule
  double noise_variance = 1.0;   // sigma^2 in the scaled rule
  bool debias = false;
  double magnitude_floor = 0.0;  // absolute support cut, see support_of
  double relative_floor = 0.01;  // support cut as a fraction of the peak tap

  /// explicit epsilon, or c * sigma * sqrt(E M) * sqrt(2 ln Wtau_max).
  double resolve_epsilon(const OfdmParams& params) const;
  void validate() const;
};

/// Indices whose magnitude exceeds max(magnitude_floor, relative_floor * peak).
std::vector<std::size_t> support_of(std::span<const cplx> taps, double magnitude_floor,
                                    double relative_floor);

RecoveryResult dantzig_recover(std::span<const cplx> y, const SensingMatrix& x,
                               const OfdmParams& params, const DantzigConfig& config,
                               const SimplexOptions& solver = {});

/// The real LP behind dantzig_recover. Variables are [u+, v+, u-, v-] with
/// h = (u+ - u-) + j (v+ - v-); row i is the ranged constraint
/// |Re or Im of (X^H y - sqrt(E) X^H X h)_k| <= epsilon / sqrt(2).
LinearProgram dantzig_program(std::span<const cplx> y, const SensingMatrix& x,
                              const OfdmParams& params, double epsilon);

/// Exactly `sparsity` greedy steps with a least-squares refit after each.
/// Throws Error(rank_deficient) if the chosen columns become dependent.
RecoveryResult omp_recover(std::span<const cplx> y, const SensingMatrix& x,
                           const OfdmParams& params, std::size_t sparsity);

/// Least squares over all taps; needs at least Wtau_max tones and full rank.
RecoveryResult fde_ls_recover(std::span<const cplx> y_full, const SensingMatrix& x_full,
                              const OfdmParams& params);

/// Least squares of y on sqrt(E) X restricted to `support`; zero elsewhere.
std::vector<cplx> restricted_least_squares(std::span<const cplx> y, const SensingMatrix& x,
                                           const OfdmParams& params,
                                           std::span<const std::size_t> support);

/// 10 log10(|est - h|^2 / |h|^2), floored at kNmseFloorDb.
double nmse_db(std::span<const cplx> truth, std::span<const cplx> estimate);

}  // namespace mmtrain
