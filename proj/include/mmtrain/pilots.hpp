#pragma once

// Multi-user pilot machinery: orthogonal tone pre-allocation, the binary
// (L', l) codebook family (L' transmit dimensions and l silent dimensions per
// column) and decoding of thresholded per-dimension energy vectors.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mmtrain/channel.hpp"

namespace mmtrain {

struct PilotAllocation {
  std::vector<ToneSet> sequences;  // pairwise disjoint, M tones each
};

/// Sequential pseudo-random draws, each from the tones not yet taken.
/// Error(capacity_exceeded) when K * M > WT.
PilotAllocation allocate_orthogonal(std::size_t users, const OfdmParams& params, Rng& rng);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// K^l_max = C(L' + l, l)
inline std::uint64_t codebook_capacity(std::size_t ones, std::size_t zeros) noexcept {
  return binomial(ones + zeros, zeros);
}

/// Smallest l >= 1 with K <= C(L' + l, l).
std::size_t choose_l(std::size_t users, std::size_t ones);

/// L x K binary matrix; column i is UE i's pilot pattern (1 = transmit).
///
/// Columns are the first K l-subsets (the silent rows) in colexicographic
/// order over the reversed row labels r' = L - 1 - r. For l = 1 and K = L this
/// is the single-zero code with column i silent in row L - 1 - i.
class PilotCodebook {
 public:
  PilotCodebook(std::size_t users, std::size_t ones, std::size_t zeros);

  std::size_t ones_per_column() const { return ones_; }
  std::size_t zeros_per_column() const { return zeros_; }
  std::size_t dimension() const { return ones_ + zeros_; }
  std::size_t users() const { return zero_sets_.size(); }

  bool bit(std::size_t row, std::size_t col) const;
  std::vector<std::uint8_t> column(std::size_t col) const;
  /// Silent rows of column `col`, ascending.
  const std::vector<std::size_t>& zero_rows(std::size_t col) const { return zero_sets_[col]; }
  /// Transmit rows of column `col`, ascending (the L' usable pilot dimensions).
  std::vector<std::size_t> transmit_rows(std::size_t col) const;

  /// Column index whose silent rows are exactly `rows` (ascending), if any.
  std::optional<std::size_t> find(std::span<const std::size_t> rows) const;

  friend bool operator==(const PilotCodebook&, const PilotCodebook&) = default;

 private:
  std::size_t ones_;
  std::size_t zeros_;
  std::vector<std::vector<std::size_t>> zero_sets_;
};

/// Error(capacity_exceeded) if K > C(L' + l, l).
PilotCodebook build_codebook(std::size_t users, std::size_t ones, std::size_t zeros);

enum class DecodeKind { empty, identified, collision, invalid };

const char* to_string(DecodeKind kind) noexcept;

struct DecodeOutcome {
  DecodeKind kind = DecodeKind::invalid;
  std::optional<std::size_t> ue;  // set iff kind == identified

  friend bool operator==(const DecodeOutcome&, const DecodeOutcome&) = default;
};

/// observed[r] is 1 when dimension r carried high energy.
DecodeOutcome decode_energy_vector(std::span<const std::uint8_t> observed,
                                   const PilotCodebook& book);

/// Componentwise OR of the active columns (noiseless energy detection).
std::vector<std::uint8_t> superpose(std::span<const std::size_t> active, const PilotCodebook& book);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// L' / (L' + l) in lowest terms.
Rational code_efficiency(std::size_t ones, std::size_t zeros);

/// Text form: header "L K L_prime l", then L lines of K '0'/'1' characters.
void write_codebook(std::ostream& out, const PilotCodebook& book);
PilotCodebook read_codebook(std::istream& in);

}  // namespace mmtrain
