#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "mmtrain/error.hpp"
#include "mmtrain/pilots.hpp"

using namespace mmtrain;

TEST(Codebook, ReproducesSingleZeroExample) {
  // rows of the 4 x 4 example: zero of column i at row L - 1 - i
  const std::vector<std::string> expected{"1110", "1101", "1011", "0111"};
  const PilotCodebook book = build_codebook(4, 3, 1);
  ASSERT_EQ(book.dimension(), 4u);
  for (std::size_t r = 0; r < 4; ++r) {
    std::string row;
    for (std::size_t c = 0; c < 4; ++c) row += book.bit(r, c) ? '1' : '0';
    EXPECT_EQ(row, expected[r]);
  }
}

TEST(Codebook, TwoZerosEnumerateAllPatterns) {
  const PilotCodebook book = build_codebook(6, 2, 2);
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t c = 0; c < 6; ++c) {
    EXPECT_EQ(book.zero_rows(c).size(), 2u);
    seen.insert(book.zero_rows(c));
  }
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Codebook, SingleColumn) {
  const PilotCodebook book = build_codebook(1, 5, 1);
  EXPECT_EQ(book.users(), 1u);
  EXPECT_EQ(book.transmit_rows(0).size(), 5u);
}

TEST(Codebook, CapacityBoundaryErrors) {
  for (std::size_t ones : {1u, 3u, 20u}) {
    for (std::size_t l : {1u, 2u, 3u}) {
      const auto cap = codebook_capacity(ones, l);
      EXPECT_NO_THROW(build_codebook(cap, ones, l));
      EXPECT_THROW(build_codebook(cap + 1, ones, l), Error);
    }
  }
}

TEST(Codebook, ChooseL) {
  EXPECT_EQ(choose_l(1, 20), 1u);
  EXPECT_EQ(choose_l(21, 20), 1u);
  EXPECT_EQ(choose_l(22, 20), 2u);
  EXPECT_EQ(choose_l(231, 20), 2u);
  EXPECT_EQ(choose_l(232, 20), 3u);
  EXPECT_THROW(choose_l(0, 20), Error);
}

TEST(Codebook, EfficiencyIsReduced) {
  EXPECT_EQ(code_efficiency(20, 1), (Rational{20, 21}));
  EXPECT_EQ(code_efficiency(20, 2), (Rational{10, 11}));
  EXPECT_THROW(code_efficiency(20, 0), Error);
}

TEST(Codebook, BinomialAgainstPascal) {
  std::vector<std::vector<std::uint64_t>> pascal(61);
  for (std::size_t n = 0; n <= 60; ++n) {
    pascal[n].assign(n + 1, 1);
    for (std::size_t k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
    for (std::size_t k = 0; k <= n; ++k) EXPECT_EQ(binomial(n, k), pascal[n][k]) << n << " " << k;
  }
  EXPECT_EQ(binomial(3, 5), 0u);
}

TEST(Decode, BasicOutcomes) {
  const PilotCodebook book = build_codebook(4, 3, 1);
  const std::vector<std::uint8_t> ones{1, 1, 1, 1}, zeros{0, 0, 0, 0}, first{1, 1, 1, 0};
  EXPECT_EQ(decode_energy_vector(ones, book).kind, DecodeKind::collision);
  EXPECT_EQ(decode_energy_vector(zeros, book).kind, DecodeKind::empty);
  const DecodeOutcome id = decode_energy_vector(first, book);
  EXPECT_EQ(id.kind, DecodeKind::identified);
  EXPECT_EQ(id.ue, 0u);
  const std::vector<std::uint8_t> two_zeros{1, 0, 1, 0};
  EXPECT_EQ(decode_energy_vector(two_zeros, book).kind, DecodeKind::invalid);
  EXPECT_THROW(decode_energy_vector(std::vector<std::uint8_t>{1, 1}, book), Error);
}

TEST(Decode, OutOfBookPatternIsInvalid) {
  const PilotCodebook book = build_codebook(3, 3, 1);  // capacity 4, one pattern unused
  std::size_t invalid = 0;
  for (std::size_t z = 0; z < 4; ++z) {
    std::vector<std::uint8_t> v(4, 1);
    v[z] = 0;
    invalid += decode_energy_vector(v, book).kind == DecodeKind::invalid ? 1 : 0;
  }
  EXPECT_EQ(invalid, 1u);
}

TEST(Decode, RoundTripAndPairCollisionsExhaustive) {
  for (auto [ones, l] : {std::pair<std::size_t, std::size_t>{20, 1}, {20, 2}, {20, 3}}) {
    const std::size_t k = std::min<std::uint64_t>(codebook_capacity(ones, l), 300);
    const PilotCodebook book = build_codebook(k, ones, l);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t a[1] = {i};
      const DecodeOutcome d = decode_energy_vector(superpose(a, book), book);
      ASSERT_EQ(d.kind, DecodeKind::identified);
      ASSERT_EQ(d.ue, i);
      for (std::size_t j = i + 1; j < k; ++j) {
        const std::size_t p[2] = {i, j};
        ASSERT_EQ(decode_energy_vector(superpose(p, book), book).kind, DecodeKind::collision);
      }
    }
  }
}

TEST(Decode, SuperposeIsOr) {
  const PilotCodebook book = build_codebook(4, 3, 1);
  EXPECT_EQ(superpose({}, book), (std::vector<std::uint8_t>{0, 0, 0, 0}));
  const std::size_t one[1] = {2};
  EXPECT_EQ(superpose(one, book), book.column(2));
}

TEST(CodebookIo, RoundTrip) {
  const PilotCodebook book = build_codebook(10, 4, 2);
  std::stringstream s;
  write_codebook(s, book);
  EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "6 10 4 2");
  EXPECT_EQ(read_codebook(s), book);
}

TEST(CodebookIo, RejectsTampering) {
  const PilotCodebook book = build_codebook(4, 3, 1);
  std::stringstream s;
  write_codebook(s, book);
  std::string text = s.str();
  text[text.size() - 2] = text[text.size() - 2] == '1' ? '0' : '1';
  std::istringstream in(text);
  EXPECT_THROW(read_codebook(in), Error);
  std::istringstream garbage("4 4 3");
  EXPECT_THROW(read_codebook(garbage), Error);
}

TEST(Orthogonal, DisjointCoveringAllocation) {
  Rng rng(1);
  const OfdmParams p;
  const PilotAllocation a = allocate_orthogonal(50, p, rng);
  ASSERT_EQ(a.sequences.size(), 50u);
  std::set<std::size_t> used;
  for (const auto& s : a.sequences) {
    EXPECT_EQ(s.size(), 20u);
    used.insert(s.begin(), s.end());
  }
  EXPECT_EQ(used.size(), 1000u);
  EXPECT_EQ(allocate_orthogonal(0, p, rng).sequences.size(), 0u);
  EXPECT_EQ(allocate_orthogonal(1, p, rng).sequences.size(), 1u);
  EXPECT_THROW(allocate_orthogonal(51, p, rng), Error);
}
