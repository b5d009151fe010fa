#pragma once

// OFDM training model: sparse multipath channels, pilot tone selection and
// the partial-DFT sensing matrix relating taps to matched-filter outputs.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mmtrain/rng.hpp"

namespace mmtrain {

using cplx = std::complex<double>;
using ToneSet = std::vector<std::size_t>;

struct OfdmParams {
  std::size_t subcarriers = 1000;  // WT
  std::size_t taps = 100;          // W * tau_max
  std::size_t sparsity = 4;        // S
  std::size_t pilot_tones = 20;    // M, defaults to 5 * S
  double symbol_energy = 1.0;      // E

  /// Defaults with M = 5 S.
  static OfdmParams with_sparsity(std::size_t subcarriers, std::size_t taps, std::size_t sparsity,
                                  double symbol_energy = 1.0);

  /// Throws Error(invalid_argument) when the invariants do not hold.
  void validate() const;
};

struct SparseChannel {
  std::vector<cplx> taps;           // length OfdmParams::taps
  std::vector<std::size_t> support; // ascending

  double energy() const;
};

/// M x taps matrix, row-major, one row per pilot tone (ascending).
class SensingMatrix {
 public:
  SensingMatrix(ToneSet tones, std::size_t subcarriers, std::size_t taps);

  std::size_t rows() const { return tones_.size(); }
  std::size_t cols() const { return cols_; }
  std::size_t subcarriers() const { return subcarriers_; }
  const ToneSet& tones() const { return tones_; }
  std::span<const cplx> data() const { return entries_; }
  std::span<const cplx> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
  cplx operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  /// y = X h
  std::vector<cplx> apply(std::span<const cplx> h) const;
  /// X^H r
  std::vector<cplx> apply_adjoint(std::span<const cplx> r) const;

 private:
  ToneSet tones_;
  std::size_t subcarriers_;
  std::size_t cols_;
  std::vector<cplx> entries_;
};

/// Uniform support without replacement, CN(0,1) gains.
SparseChannel sample_channel(const OfdmParams& params, Rng& rng);

/// M distinct tones drawn uniformly from [0, WT) minus `exclude`; ascending.
ToneSet select_pilot_tones(const OfdmParams& params, std::span<const std::size_t> exclude, Rng& rng);

/// One pilot per coherence band: Wtau_max tones spread evenly over [0, WT).
ToneSet fde_pilot_tones(const OfdmParams& params);

/// Rows exp(-j 2 pi n d / WT) for n in `tones` (sorted ascending), d in [0, taps).
SensingMatrix build_sensing_matrix(ToneSet tones, const OfdmParams& params);

/// sqrt(E) X h + z, z ~ CN(0, noise_variance I).
std::vector<cplx> synthesize_measurement(const SensingMatrix& x, const SparseChannel& h,
                                         const OfdmParams& params, double noise_variance,
                                         Rng& rng);

}  // namespace mmtrain
