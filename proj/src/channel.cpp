#include "mmtrain/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mmtrain/error.hpp"
#include "mmtrain/kernels.hpp"

namespace mmtrain {

namespace {

// First `count` entries of a partial Fisher-Yates shuffle of `pool`.
std::vector<std::size_t> draw_without_replacement(std::vector<std::size_t> pool, std::size_t count,
                                                  Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

OfdmParams OfdmParams::with_sparsity(std::size_t subcarriers, std::size_t taps,
                                     std::size_t sparsity, double symbol_energy) {
  return OfdmParams{subcarriers, taps, sparsity, 5 * sparsity, symbol_energy};
}

void OfdmParams::validate() const {
  if (sparsity == 0 || taps == 0 || subcarriers == 0 || pilot_tones == 0) {
    throw Error(ErrorCode::invalid_argument, "OFDM dimensions must be positive");
  }
  if (!(sparsity <= taps && taps <= subcarriers)) {
    throw Error(ErrorCode::invalid_argument, "need sparsity <= taps <= subcarriers");
  }
  if (pilot_tones < sparsity) {
    throw Error(ErrorCode::invalid_argument, "need pilot_tones >= sparsity");
  }
  if (!(symbol_energy > 0.0) || !std::isfinite(symbol_energy)) {
    throw Error(ErrorCode::invalid_argument, "symbol energy must be positive");
  }
}

double SparseChannel::energy() const { return kernels::sum_abs2(taps); }

SensingMatrix::SensingMatrix(ToneSet tones, std::size_t subcarriers, std::size_t taps)
    : tones_(std::move(tones)), subcarriers_(subcarriers), cols_(taps) {
  std::sort(tones_.begin(), tones_.end());
  if (std::adjacent_find(tones_.begin(), tones_.end()) != tones_.end()) {
    throw Error(ErrorCode::invalid_argument, "duplicate pilot tone");
  }
  if (!tones_.empty() && tones_.back() >= subcarriers_) {
    throw Error(ErrorCode::invalid_argument, "pilot tone outside [0, WT)");
  }
  // Phases are reduced mod WT first so every entry comes from one table.
  std::vector<cplx> roots(subcarriers_);
  for (std::size_t k = 0; k < subcarriers_; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(subcarriers_);
    roots[k] = {std::cos(angle), std::sin(angle)};
  }
  roots[0] = {1.0, 0.0};
  entries_.resize(tones_.size() * cols_);
  for (std::size_t r = 0; r < tones_.size(); ++r) {
    const std::size_t n = tones_[r];
    for (std::size_t d = 0; d < cols_; ++d) {
      entries_[r * cols_ + d] = roots[(n * d) % subcarriers_];
    }
  }
}

std::vector<cplx> SensingMatrix::apply(std::span<const cplx> h) const {
  std::vector<cplx> y(rows());
  kernels::matvec(entries_, rows(), cols_, h, y);
  return y;
}

std::vector<cplx> SensingMatrix::apply_adjoint(std::span<const cplx> r) const {
  std::vector<cplx> out(cols_);
  kernels::matvec_adjoint(entries_, rows(), cols_, r, out);
  return out;
}

SparseChannel sample_channel(const OfdmParams& params, Rng& rng) {
  params.validate();
  std::vector<std::size_t> all(params.taps);
  std::iota(all.begin(), all.end(), std::size_t{0});
  SparseChannel ch;
  ch.support = draw_without_replacement(std::move(all), params.sparsity, rng);
  ch.taps.assign(params.taps, cplx{0.0, 0.0});
  for (std::size_t idx : ch.support) {
    // A zero draw has probability zero; redraw anyway to keep |support| = S exact.
    cplx g;
    do {
      g = rng.complex_normal(1.0);
    } while (g == cplx{0.0, 0.0});
    ch.taps[idx] = g;
  }
  return ch;
}

ToneSet select_pilot_tones(const OfdmParams& params, std::span<const std::size_t> exclude,
                           Rng& rng) {
  std::vector<bool> blocked(params.subcarriers, false);
  for (std::size_t t : exclude) {
    if (t < params.subcarriers) blocked[t] = true;
  }
  std::vector<std::size_t> pool;
  pool.reserve(params.subcarriers);
  for (std::size_t t = 0; t < params.subcarriers; ++t) {
    if (!blocked[t]) pool.push_back(t);
  }
  if (pool.size() < params.pilot_tones) {
    throw Error(ErrorCode::insufficient_tones,
                std::to_string(pool.size()) + " free tones, " +
                    std::to_string(params.pilot_tones) + " requested");
  }
  return draw_without_replacement(std::move(pool), params.pilot_tones, rng);
}

ToneSet fde_pilot_tones(const OfdmParams& params) {
  ToneSet tones(params.taps);
  for (std::size_t k = 0; k < params.taps; ++k) {
    tones[k] = k * params.subcarriers / params.taps;
  }
  return tones;
}

SensingMatrix build_sensing_matrix(ToneSet tones, const OfdmParams& params) {
  return SensingMatrix(std::move(tones), params.subcarriers, params.taps);
}

std::vector<cplx> synthesize_measurement(const SensingMatrix& x, const SparseChannel& h,
                                         const OfdmParams& params, double noise_variance,
                                         Rng& rng) {
  if (h.taps.size() != x.cols()) {
    throw Error(ErrorCode::dimension_mismatch,
                "channel has " + std::to_string(h.taps.size()) + " taps, matrix has " +
                    std::to_string(x.cols()) + " columns");
  }
  if (noise_variance < 0.0) throw Error(ErrorCode::invalid_argument, "negative noise variance");
  std::vector<cplx> y = x.apply(h.taps);
  const double amp = std::sqrt(params.symbol_energy);
  for (cplx& v : y) {
    v *= amp;
    if (noise_variance > 0.0) v += rng.complex_normal(noise_variance);
  }
  return y;
}

}  // namespace mmtrain
