#include <gtest/gtest.h>

#include <map>
#include <random>
#include <string>

#include "omegalab/complexity.hpp"
#include "support.hpp"

using namespace omegalab;
using testing_support::bits_of;
using testing_support::explorer;
using testing_support::rng;

namespace {

BitString bs(const std::string& s) { return BitString::parse(s); }
Dyadic dy(const char* s) { return Dyadic::parse(s); }

// k by brute force over the reference interpreter, for short outputs only.
std::map<std::string, std::size_t> reference_k(std::size_t max_len) {
  std::map<std::string, std::size_t> k;
  for (std::size_t len = 0; len <= max_len; ++len)
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      const auto r = ref::run(bits_of(v, len), 10000);
      if (r.kind == ref::Kind::halted) k.try_emplace(r.output, len);
    }
  return k;
}

}  // namespace

TEST(LiteralProgram, Examples) {
  EXPECT_EQ(literal_program(bs("")).to_string(), "000");
  EXPECT_EQ(literal_program(bs("0")).to_string(), "100000");
  EXPECT_EQ(literal_program(bs("10")).to_string(), "101100000");
}

TEST(LiteralProgram, RunsToItsData) {
  std::uniform_int_distribution<std::size_t> len(0, 32);
  for (int i = 0; i < 1000; ++i) {
    const BitString x = bs(bits_of(rng()(), len(rng())));
    const BitString p = literal_program(x);
    ASSERT_EQ(p.size(), 3 * x.size() + 3);
    const auto h = std::get<Halted>(run(p, 100));
    ASSERT_EQ(h.output, x);
  }
}

TEST(KComplexity, Examples) {
  const Explorer& ex = explorer(8, 10000);
  const auto empty = k_complexity(ex, bs(""), 6);
  EXPECT_EQ(empty.k_value, 3u);
  EXPECT_EQ(empty.witness->to_string(), "000");
  const auto zero = k_complexity(ex, bs("0"), 6);
  EXPECT_EQ(zero.k_value, 6u);
  EXPECT_EQ(zero.witness->to_string(), "100000");
  EXPECT_EQ(zero.literal_bound, 6u);
  const auto eight = k_complexity(ex, bs("01101001"), 4);
  EXPECT_FALSE(eight.k_value.has_value());
  EXPECT_EQ(eight.ceiling, 4u);
  EXPECT_FALSE(eight.witness.has_value());
}

TEST(KComplexity, RequiresResolution) {
  Explorer ex;
  ex.expand(3, 10);
  EXPECT_THROW(k_complexity(ex, bs("0"), 6), UnresolvedCandidate);
}

TEST(KComplexity, AgreesWithReferenceSearch) {
  const std::size_t ceiling = 15;
  const auto want = reference_k(ceiling);
  const ComplexityIndex index(explorer(15, 10000), ceiling);
  EXPECT_EQ(index.distinct_outputs(), want.size());
  for (const auto& [out, k] : want) {
    const auto rec = index.k_complexity(bs(out), ceiling);
    ASSERT_EQ(rec.k_value, k) << out;
  }
}

TEST(KComplexity, WitnessesAreValidAndElegant) {
  const Explorer& ex = explorer(15, 10000);
  const ComplexityIndex index(ex, 15);
  for (std::size_t n = 0; n <= 4; ++n)
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
      const auto rec = index.k_complexity(BitString::from_uint(v, n), 15);
      ASSERT_TRUE(rec.witness.has_value());
      ASSERT_LE(*rec.k_value, rec.literal_bound);
      const auto h = std::get<Halted>(run(*rec.witness, 10000));
      ASSERT_EQ(h.output, rec.target);
      ASSERT_TRUE(is_elegant(ex, *rec.witness).elegant);
    }
}

TEST(Elegance, Examples) {
  const Explorer& ex = explorer(8, 10000);
  EXPECT_TRUE(is_elegant(ex, bs("000")).elegant);
  EXPECT_TRUE(is_elegant(ex, bs("100000")).elegant);
  // INC; DEC; HALT prints "" in 9 bits.
  const auto padded = is_elegant(ex, bs("001010000"));
  EXPECT_FALSE(padded.elegant);
  EXPECT_EQ(padded.shorter->to_string(), "000");
  EXPECT_THROW(is_elegant(ex, bs("0011111")), NotAProgram);
  EXPECT_THROW(is_elegant(ex, bs("00")), NotAProgram);
  Explorer shallow;
  shallow.expand(3, 10);
  EXPECT_THROW(is_elegant(shallow, bs("001010000")), UnresolvedCandidate);
}

TEST(Census, Examples) {
  const Explorer& ex = explorer(8, 10000);
  const auto zero = census(ex, 0, 6);
  EXPECT_EQ(zero.by_k, (std::map<std::size_t, std::uint64_t>{{3, 1}}));
  EXPECT_EQ(zero.unknown, 0u);
  const auto one = census(ex, 1, 6);
  EXPECT_EQ(one.by_k, (std::map<std::size_t, std::uint64_t>{{6, 2}}));
  const auto eight = census(ex, 8, 4);
  EXPECT_TRUE(eight.by_k.empty());
  EXPECT_EQ(eight.unknown, 256u);
}

TEST(Census, CountingBound) {
  const ComplexityIndex index(explorer(16, 10000), 16);
  for (std::size_t m = 0; m <= 16; ++m) ASSERT_LE(index.count_at_most(m), (std::size_t{2} << m) - 1) << m;
}

TEST(BestTheory, Examples) {
  const BitString zeros = bs(std::string(64, '0'));
  const auto rec = best_theory(nullptr, zeros, 0, true);
  EXPECT_TRUE(rec.upper_bound_only);
  // Recorded: LDI 64; OUT0; DEC; BRNZ back; HALT.
  EXPECT_EQ(*rec.k_value, 37u);
  EXPECT_EQ(rec.witness->to_string(), "0110000001000000100010111000010001000");
  EXPECT_LT(*rec.k_value, 195u);
  EXPECT_EQ(std::get<Halted>(run(*rec.witness, 10000)).output, zeros);

  const Explorer& ex = explorer(15, 10000);
  for (bool constructive : {false, true}) {
    const auto empty = best_theory(&ex, bs(""), 15, constructive);
    EXPECT_EQ(empty.k_value, 3u);
    EXPECT_FALSE(empty.upper_bound_only);
  }
  for (int i = 0; i < 16; ++i) {
    const BitString four = BitString::from_uint(static_cast<std::uint64_t>(i), 4);
    const auto r = best_theory(&ex, four, 15, false);
    EXPECT_EQ(r.k_value, 15u) << four.to_string();
    EXPECT_EQ(*r.witness, literal_program(four));
  }
  EXPECT_THROW(best_theory(nullptr, zeros, 0, false), DomainError);
}

TEST(BestTheory, RunLengthProgramsReproduceTheirData) {
  std::uniform_int_distribution<int> runs(1, 6), run_len(1, 90);
  for (int i = 0; i < 200; ++i) {
    std::string data;
    bool bit = rng()() & 1;
    for (int r = runs(rng()); r > 0; --r, bit = !bit) data += std::string(static_cast<std::size_t>(run_len(rng())), bit ? '1' : '0');
    const BitString p = run_length_program(bs(data));
    const auto h = std::get<Halted>(run(p, 100000));
    ASSERT_EQ(h.output.to_string(), data);
    ASSERT_LE(p.size(), 3 * data.size() + 3);
  }
}

TEST(BorelCover, Examples) {
  EXPECT_EQ(borel_cover(3, {}).total, Dyadic::zero());
  const auto c = borel_cover(3, {dy("0/2^0"), dy("1/2^1"), dy("1/2^2"), dy("3/2^2")});
  ASSERT_EQ(c.intervals.size(), 4u);
  EXPECT_EQ(c.intervals[0].length, dy("1/2^4"));
  EXPECT_EQ(c.intervals[1].length, dy("1/2^5"));
  EXPECT_EQ(c.intervals[2].length, dy("1/2^6"));
  EXPECT_EQ(c.intervals[3].length, dy("1/2^7"));
  EXPECT_EQ(c.total, dy("15/2^7"));
  EXPECT_LT(c.total, dy("1/2^3"));
  // Clipped at 0 for reporting only.
  EXPECT_EQ(c.intervals[0].lo, Dyadic::zero());
  EXPECT_EQ(c.intervals[0].hi, dy("1/2^5"));
  EXPECT_THROW(borel_cover(3, {Dyadic::one()}), DomainError);
  EXPECT_THROW(borel_cover(3, {dy("1/2^1"), dy("2/2^2")}), DomainError);
}

TEST(BorelCover, HaltedOutputsAreCovered) {
  const Explorer& ex = explorer(12, 10000);
  const auto reals = reals_from_outputs(ex.halted_set(12));
  ASSERT_FALSE(reals.empty());
  const auto c = borel_cover(5, reals);
  Dyadic total;
  for (std::size_t i = 0; i < reals.size(); ++i) {
    const auto& iv = c.intervals[i];
    ASSERT_EQ(iv.center, reals[i]);
    ASSERT_LE(iv.lo, reals[i]);
    ASSERT_LE(reals[i], iv.hi);
    total += iv.length;
  }
  EXPECT_EQ(total, c.total);
  EXPECT_EQ(c.total, Dyadic::pow2_neg(5) - Dyadic::pow2_neg(5 + reals.size()));
}
