#include <gtest/gtest.h>

#include <string>

#include "omegalab/oracle.hpp"
#include "support.hpp"

using namespace omegalab;
using testing_support::explorer;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

// Turing's number straight from the reference interpreter.
std::string reference_turing(std::uint64_t n) {
  std::string bits;
  for (std::uint64_t i = 1; i <= n; ++i)
    bits += ref::run(candidate_at(i).to_string(), 10000).kind == ref::Kind::halted ? '1' : '0';
  return bits;
}

}  // namespace

TEST(TuringNumber, Examples) {
  const Explorer& ex = explorer(8, 10000);
  EXPECT_EQ(turing_number(ex, 0).to_string(), "");
  EXPECT_EQ(turing_number(ex, 8).to_string(), "00000001");
  EXPECT_EQ(turing_number(ex, 8).to_string(), reference_turing(8));
  // Regression value, confirmed by the reference interpreter.
  EXPECT_EQ(turing_number(ex, 14).to_string(), "00000001000000");
  EXPECT_EQ(turing_number(ex, 14).to_string(), reference_turing(14));
}

TEST(TuringNumber, MatchesReferenceUpToTwelveBitCandidates) {
  const Explorer& ex = explorer(12, 10000);
  const std::uint64_t n = (std::uint64_t{1} << 13) - 1;  // every string of <= 12 bits
  EXPECT_EQ(turing_number(ex, n).to_string(), reference_turing(n));
}

TEST(TuringNumber, UnresolvedCandidateCarriesItsIndex) {
  Explorer ex;
  ex.expand(3, 10);
  try {
    turing_number(ex, 20);
    FAIL() << "expected UnresolvedCandidate";
  } catch (const UnresolvedCandidate& e) {
    // "0000" and "0001" extend the halted "000"; "0010" sits under pending "001".
    EXPECT_EQ(e.index(), 18u);
    EXPECT_EQ(e.candidate(), "0010");
  }
}

TEST(CompressCount, Examples) {
  auto a = compress_count(bs("00000000"));
  EXPECT_EQ(a.k, 0u);
  EXPECT_EQ(a.encoded.to_string(), "1");
  auto b = compress_count(bs("00000001"));
  EXPECT_EQ(b.k, 1u);
  EXPECT_EQ(b.encoded.to_string(), "010");
  auto c = compress_count(bs("1111"));
  EXPECT_EQ(c.k, 4u);
  EXPECT_EQ(c.encoded.to_string(), "00101");
}

TEST(CompressCount, LengthBound) {
  for (std::uint64_t n = 0; n <= 5000; ++n) {
    // Worst case: every bit set.
    const std::size_t len = encode_gamma(n + 1).size();
    std::size_t floor_log = 0;
    while ((std::uint64_t{2} << floor_log) <= n + 1) ++floor_log;
    ASSERT_LE(len, 2 * floor_log + 1) << n;
  }
}

TEST(ExpandCount, Examples) {
  const auto candidates = first_candidates(8);
  const auto none = expand_count(candidates, 0);
  EXPECT_EQ(none.classification.as_bits().to_string(), "00000000");
  EXPECT_EQ(none.total_steps, 0u);

  const auto one = expand_count(candidates, 1);
  EXPECT_EQ(one.classification.as_bits().to_string(), "00000001");
  EXPECT_EQ(one.classification.as_bits(), turing_number(explorer(8, 10000), 8));

  const std::vector<BitString> single{bs("000")};
  EXPECT_THROW(expand_count(single, 2), Inconclusive);
}

TEST(ExpandCount, UndercountIsAContradiction) {
  const auto candidates = first_candidates(200);
  const std::uint64_t k = turing_number(explorer(8, 10000), 200).popcount();
  ASSERT_GE(k, 2u);
  EXPECT_THROW(expand_count(candidates, k - 1), ContradictionError);
  EXPECT_THROW(expand_count(candidates, k + 1), Inconclusive);
}

TEST(ExpandCount, RoundTripThroughTheCount) {
  const Explorer& ex = explorer(12, 10000);
  for (std::uint64_t n : {1u, 8u, 15u, 100u, 511u, 1000u, 4095u}) {
    const BitString truth = turing_number(ex, n);
    const CountEncoding enc = compress_count(truth);
    const auto k = std::get<GammaDecoded>(decode_gamma(enc.encoded, 0)).value - 1;
    const auto res = expand_count(first_candidates(n), k.convert_to<std::uint64_t>());
    ASSERT_EQ(res.classification.as_bits(), truth) << n;
  }
}

TEST(OracleDigits, Examples) {
  EXPECT_EQ(oracle_digits([](std::uint64_t) { return false; }, 5).to_string(), "00000");
  EXPECT_EQ(oracle_digits(halting_evaluator(explorer(8, 10000)), 8).to_string(), "00000001");
  EXPECT_EQ(oracle_digits([](std::uint64_t i) { return i % 2 == 1; }, 4).to_string(), "1010");
}

TEST(OracleDigits, FailuresCarryTheIndex) {
  try {
    oracle_digits([](std::uint64_t i) -> bool {
      if (i == 3) throw std::runtime_error("no answer");
      return true;
    }, 5);
    FAIL();
  } catch (const EvaluatorError& e) {
    EXPECT_EQ(e.index(), 3u);
  }
  Explorer shallow;
  shallow.expand(3, 10);
  EXPECT_THROW(oracle_digits(halting_evaluator(shallow), 20), EvaluatorError);
}
