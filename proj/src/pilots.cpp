#include "mmtrain/pilots.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "mmtrain/error.hpp"

namespace mmtrain {

PilotAllocation allocate_orthogonal(std::size_t users, const OfdmParams& params, Rng& rng) {
  params.validate();
  if (users * params.pilot_tones > params.subcarriers) {
    throw Error(ErrorCode::capacity_exceeded,
                std::to_string(users) + " x " + std::to_string(params.pilot_tones) +
                    " tones exceed " + std::to_string(params.subcarriers) + " subcarriers");
  }
  PilotAllocation alloc;
  std::vector<std::size_t> taken;
  taken.reserve(users * params.pilot_tones);
  for (std::size_t k = 0; k < users; ++k) {
    ToneSet tones = select_pilot_tones(params, taken, rng);
    taken.insert(taken.end(), tones.begin(), tones.end());
    alloc.sequences.push_back(std::move(tones));
  }
  return alloc;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;  // exact: acc * (n-k+i) is divisible by i here
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(acc);
}

std::size_t choose_l(std::size_t users, std::size_t ones) {
  if (users < 1 || ones < 1) throw Error(ErrorCode::invalid_argument, "need K >= 1 and L' >= 1");
  std::size_t l = 1;
  while (codebook_capacity(ones, l) < users) ++l;
  return l;
}

namespace {

// Next l-subset in colexicographic order; false past the last subset of {0..n-1}.
bool next_colex(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t limit = i + 1 < k ? c[i + 1] : n;
    if (c[i] + 1 < limit) {
      ++c[i];
      for (std::size_t j = 0; j < i; ++j) c[j] = j;
      return true;
    }
  }
  return false;
}

}  // namespace

PilotCodebook::PilotCodebook(std::size_t users, std::size_t ones, std::size_t zeros)
    : ones_(ones), zeros_(zeros) {
  if (ones < 1 || zeros < 1) throw Error(ErrorCode::invalid_argument, "need L' >= 1 and l >= 1");
  const std::uint64_t cap = codebook_capacity(ones, zeros);
  if (users > cap) {
    throw Error(ErrorCode::capacity_exceeded,
                std::to_string(users) + " users > C(" + std::to_string(ones + zeros) + ", " +
                    std::to_string(zeros) + ") = " + std::to_string(cap));
  }
  const std::size_t dim = ones + zeros;
  std::vector<std::size_t> c(zeros);
  std::iota(c.begin(), c.end(), std::size_t{0});
  zero_sets_.reserve(users);
  for (std::size_t k = 0; k < users; ++k) {
    std::vector<std::size_t> rows(zeros);
    for (std::size_t i = 0; i < zeros; ++i) rows[i] = dim - 1 - c[i];
    std::sort(rows.begin(), rows.end());
    zero_sets_.push_back(std::move(rows));
    if (k + 1 < users) next_colex(c, dim);
  }
}

bool PilotCodebook::bit(std::size_t row, std::size_t col) const {
  const auto& z = zero_sets_.at(col);
  return !std::binary_search(z.begin(), z.end(), row);
}

std::vector<std::uint8_t> PilotCodebook::column(std::size_t col) const {
  std::vector<std::uint8_t> v(dimension(), 1);
  for (std::size_t r : zero_sets_.at(col)) v[r] = 0;
  return v;
}

std::vector<std::size_t> PilotCodebook::transmit_rows(std::size_t col) const {
  std::vector<std::size_t> rows;
  rows.reserve(ones_);
  for (std::size_t r = 0; r < dimension(); ++r) {
    if (bit(r, col)) rows.push_back(r);
  }
  return rows;
}

std::optional<std::size_t> PilotCodebook::find(std::span<const std::size_t> rows) const {
  if (rows.size() != zeros_) return std::nullopt;
  // Colex rank over reversed labels: sum_i C(c_i, i + 1) with c ascending.
  const std::size_t dim = dimension();
  std::vector<std::size_t> c(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= dim) return std::nullopt;
    c[i] = dim - 1 - rows[i];
  }
  std::sort(c.begin(), c.end());
  if (std::adjacent_find(c.begin(), c.end()) != c.end()) return std::nullopt;
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < c.size(); ++i) rank += binomial(c[i], i + 1);
  if (rank >= users()) return std::nullopt;
  return static_cast<std::size_t>(rank);
}

PilotCodebook build_codebook(std::size_t users, std::size_t ones, std::size_t zeros) {
  return PilotCodebook(users, ones, zeros);
}

const char* to_string(DecodeKind kind) noexcept {
  switch (kind) {
    case DecodeKind::empty: return "empty";
    case DecodeKind::identified: return "identified";
    case DecodeKind::collision: return "collision";
    case DecodeKind::invalid: return "invalid";
  }
  return "?";
}

DecodeOutcome decode_energy_vector(std::span<const std::uint8_t> observed,
                                   const PilotCodebook& book) {
  if (observed.size() != book.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "energy vector length differs from L");
  }
  std::vector<std::size_t> silent;
  for (std::size_t r = 0; r < observed.size(); ++r) {
    if (!observed[r]) silent.push_back(r);
  }
  if (silent.size() == book.dimension()) return {DecodeKind::empty, std::nullopt};
  if (silent.size() < book.zeros_per_column()) return {DecodeKind::collision, std::nullopt};
  if (silent.size() == book.zeros_per_column()) {
    if (auto ue = book.find(silent)) return {DecodeKind::identified, ue};
  }
  return {DecodeKind::invalid, std::nullopt};
}

std::vector<std::uint8_t> superpose(std::span<const std::size_t> active, const PilotCodebook& book) {
  std::vector<std::uint8_t> out(book.dimension(), 0);
  for (std::size_t ue : active) {
    if (ue >= book.users()) throw Error(ErrorCode::invalid_argument, "UE index out of range");
    for (std::size_t r = 0; r < out.size(); ++r) out[r] |= static_cast<std::uint8_t>(book.bit(r, ue));
  }
  return out;
}

Rational code_efficiency(std::size_t ones, std::size_t zeros) {
  if (ones < 1 || zeros < 1) throw Error(ErrorCode::invalid_argument, "need L' >= 1 and l >= 1");
  const std::uint64_t g = std::gcd<std::uint64_t>(ones, ones + zeros);
  return {ones / g, (ones + zeros) / g};
}

void write_codebook(std::ostream& out, const PilotCodebook& book) {
  out << book.dimension() << ' ' << book.users() << ' ' << book.ones_per_column() << ' '
      << book.zeros_per_column() << '\n';
  std::string line(book.users(), '1');
  for (std::size_t r = 0; r < book.dimension(); ++r) {
    for (std::size_t k = 0; k < book.users(); ++k) line[k] = book.bit(r, k) ? '1' : '0';
    out << line << '\n';
  }
}

PilotCodebook read_codebook(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::io, "codebook: missing header");
  std::istringstream hs(header);
  std::size_t dim = 0, users = 0, ones = 0, zeros = 0;
  if (!(hs >> dim >> users >> ones >> zeros) || dim != ones + zeros) {
    throw Error(ErrorCode::io, "codebook: bad header '" + header + "'");
  }
  std::vector<std::string> rows(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    if (!std::getline(in, rows[r]) || rows[r].size() != users ||
        rows[r].find_first_not_of("01") != std::string::npos) {
      throw Error(ErrorCode::io, "codebook: bad matrix row " + std::to_string(r));
    }
  }
  PilotCodebook book(users, ones, zeros);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t k = 0; k < users; ++k) {
      if ((rows[r][k] == '1') != book.bit(r, k)) {
        throw Error(ErrorCode::io, "codebook: matrix is not the canonical (L', l) code");
      }
    }
  }
  return book;
}

}  // namespace mmtrain
