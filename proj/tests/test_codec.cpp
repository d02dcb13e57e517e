#include <gmpxx.h>
#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "omegalab/bit_string.hpp"
#include "omegalab/codec.hpp"
#include "omegalab/dyadic.hpp"
#include "support.hpp"

using namespace omegalab;
using testing_support::rng;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

// Elias gamma straight from its definition, on text.
std::string gamma_text(std::uint64_t n) {
  std::string bin;
  for (std::uint64_t v = n; v; v >>= 1) bin.insert(bin.begin(), static_cast<char>('0' + (v & 1)));
  return std::string(bin.size() - 1, '0') + bin;
}

mpq_class as_mpq(const Dyadic& d) {
  mpz_class num(d.numerator().str());
  mpz_class den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), d.exponent());
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

Dyadic random_dyadic(std::uint64_t max_exp) {
  std::uniform_int_distribution<std::uint64_t> e(0, max_exp);
  const std::uint64_t exp = e(rng());
  Natural num = 0;
  for (std::uint64_t w = 0; w <= exp / 64; ++w) num = (num << 64) | Natural(rng()());
  num &= (Natural(1) << static_cast<unsigned>(exp + 1)) - 1;  // value below 2
  return {num, exp};
}

}  // namespace

TEST(BitString, ParseAndRender) {
  EXPECT_EQ(bs("").size(), 0u);
  EXPECT_EQ(bs("0110").to_string(), "0110");
  EXPECT_THROW(bs("012"), DomainError);
  EXPECT_EQ(BitString::from_uint(5, 4).to_string(), "0101");
}

TEST(BitString, LengthLexOrderAndCandidates) {
  const char* order[] = {"", "0", "1", "00", "01", "10", "11", "000"};
  for (std::uint64_t i = 1; i <= 8; ++i) {
    EXPECT_EQ(candidate_at(i).to_string(), order[i - 1]);
    EXPECT_EQ(candidate_index(bs(order[i - 1])), i);
  }
  EXPECT_THROW(candidate_at(0), DomainError);
  EXPECT_TRUE(length_lex_less(bs("1"), bs("00")));
  EXPECT_FALSE(length_lex_less(bs("01"), bs("01")));
}

TEST(Gamma, Examples) {
  EXPECT_EQ(encode_gamma(1).to_string(), "1");
  EXPECT_EQ(encode_gamma(2).to_string(), "010");
  EXPECT_EQ(encode_gamma(4).to_string(), "00100");
  EXPECT_THROW(encode_gamma(0), DomainError);

  auto one = std::get<GammaDecoded>(decode_gamma(bs("1"), 0));
  EXPECT_EQ(one.value, 1);
  EXPECT_EQ(one.consumed, 1u);
  auto four = std::get<GammaDecoded>(decode_gamma(bs("00100"), 0));
  EXPECT_EQ(four.value, 4);
  EXPECT_EQ(four.consumed, 5u);
  EXPECT_TRUE(std::holds_alternative<DemandMoreBits>(decode_gamma(bs("00"), 0)));
  EXPECT_TRUE(std::holds_alternative<DemandMoreBits>(decode_gamma(bs("0010"), 0)));
  EXPECT_TRUE(std::holds_alternative<DemandMoreBits>(decode_gamma(bs("1"), 1)));
}

TEST(Gamma, RoundTripAgainstTextDefinition) {
  for (std::uint64_t n = 1; n <= (1u << 16); ++n) {
    const BitString code = encode_gamma(n);
    ASSERT_EQ(code.to_string(), gamma_text(n)) << n;
    ASSERT_EQ(code.size(), gamma_length(n));
    const auto d = std::get<GammaDecoded>(decode_gamma(code, 0));
    ASSERT_EQ(d.value, n);
    ASSERT_EQ(d.consumed, code.size());
  }
}

TEST(Gamma, DecodesAtOffsetWithTrailingBits) {
  BitString s = bs("111");
  s.append(encode_gamma(37));
  s.append(bs("0101"));
  const auto d = std::get<GammaDecoded>(decode_gamma(s, 3));
  EXPECT_EQ(d.value, 37);
  EXPECT_EQ(d.consumed, gamma_length(37));
}

TEST(Gamma, WideValuesRoundTrip) {
  const Natural big = (Natural(1) << 200) + 12345;
  const BitString code = encode_gamma(big);
  EXPECT_EQ(code.size(), 2u * 200 + 1);
  const auto d = std::get<GammaDecoded>(decode_gamma(code, 0));
  EXPECT_EQ(d.value, big);
}

TEST(Gamma, CodesArePrefixFree) {
  std::vector<BitString> codes;
  for (std::uint64_t n = 1; n <= (1u << 12); ++n) codes.push_back(encode_gamma(n));
  EXPECT_TRUE(std::holds_alternative<PrefixFree>(check_prefix_free(codes)));
}

TEST(Dyadic, Examples) {
  const Dyadic eighth = Dyadic::parse("1/2^3");
  EXPECT_EQ(dyadic_add(eighth, eighth), Dyadic::parse("1/2^2"));
  EXPECT_EQ(dyadic_add(Dyadic::parse("1/2^1"), Dyadic::zero()), Dyadic::parse("1/2^1"));
  EXPECT_EQ(dyadic_cmp(Dyadic::parse("3/2^3"), Dyadic::parse("1/2^2")), std::strong_ordering::greater);
  EXPECT_THROW(dyadic_sub(eighth, Dyadic::one()), DomainError);
  EXPECT_EQ(Dyadic::parse("4/2^3").to_string(), "1/2^1");
  EXPECT_EQ(Dyadic::parse("0/2^9").to_string(), "0/2^0");
  EXPECT_THROW(Dyadic::parse("1/3"), DomainError);
  EXPECT_THROW(Dyadic::parse("-1/2^3"), DomainError);
}

TEST(Dyadic, AgreesWithGmpRationals) {
  for (int i = 0; i < 10000; ++i) {
    const Dyadic a = random_dyadic(i % 10 == 0 ? 300 : 40);
    const Dyadic b = random_dyadic(i % 7 == 0 ? 300 : 40);
    const mpq_class qa = as_mpq(a), qb = as_mpq(b);
    ASSERT_EQ(as_mpq(a + b), mpq_class(qa + qb));
    ASSERT_EQ((a <=> b) == std::strong_ordering::less, qa < qb);
    ASSERT_EQ(a == b, qa == qb);
    if (qa >= qb) {
      ASSERT_EQ(as_mpq(a - b), mpq_class(qa - qb));
    } else {
      ASSERT_THROW(a - b, DomainError);
    }
    // Normal form: odd numerator unless the exponent is already 0.
    const Dyadic s = a + b;
    ASSERT_TRUE(s.exponent() == 0 || boost::multiprecision::bit_test(s.numerator(), 0));
  }
}

TEST(Dyadic, BinaryExpansion) {
  EXPECT_EQ(binary_expansion(Dyadic::parse("1/2^3"), 3).to_string(), "001");
  EXPECT_EQ(binary_expansion(Dyadic::zero(), 4).to_string(), "0000");
  EXPECT_EQ(binary_expansion(Dyadic::parse("11/2^4"), 4).to_string(), "1011");
  EXPECT_EQ(binary_expansion(Dyadic::parse("11/2^4"), 2).to_string(), "10");
  EXPECT_EQ(binary_expansion(Dyadic::one(), 0).to_string(), "");
  EXPECT_THROW(binary_expansion(Dyadic::one(), 1), DomainError);
}

TEST(Dyadic, IntervalValidation) {
  EXPECT_NO_THROW(DyadicInterval(Dyadic::zero(), Dyadic::one()));
  EXPECT_THROW(DyadicInterval(Dyadic::one(), Dyadic::zero()), DomainError);
  EXPECT_THROW(DyadicInterval(Dyadic::zero(), Dyadic::parse("3/2^1")), DomainError);
}

TEST(Kraft, Examples) {
  EXPECT_EQ(kraft_sum(std::vector{bs("0"), bs("10"), bs("11")}), Dyadic::one());
  EXPECT_EQ(kraft_sum(std::vector<BitString>{}), Dyadic::zero());
  EXPECT_EQ(kraft_sum(std::vector{bs("000")}), Dyadic::parse("1/2^3"));
}

TEST(PrefixCheck, Examples) {
  EXPECT_TRUE(std::holds_alternative<PrefixFree>(check_prefix_free(std::vector{bs("0"), bs("10"), bs("11")})));
  EXPECT_EQ(std::get<PrefixViolation>(check_prefix_free(std::vector{bs("0"), bs("01")})),
            (PrefixViolation{bs("0"), bs("01")}));
  EXPECT_TRUE(std::holds_alternative<PrefixFree>(check_prefix_free(std::vector<BitString>{})));
  // Scan order is length-lex, not input order.
  EXPECT_EQ(std::get<PrefixViolation>(check_prefix_free(std::vector{bs("110"), bs("1"), bs("10")})),
            (PrefixViolation{bs("1"), bs("10")}));
}

TEST(PrefixCheck, RandomPrefixFreeSetsSatisfyKraft) {
  // Random prefix-free sets: leaves of random binary trees, optionally thinned.
  std::bernoulli_distribution split(0.55), keep(0.7);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<BitString> set, stack{BitString{}};
    while (!stack.empty()) {
      BitString node = stack.back();
      stack.pop_back();
      if (node.size() < 12 && split(rng())) {
        BitString a = node, b = node;
        a.push_back(false);
        b.push_back(true);
        stack.push_back(a);
        stack.push_back(b);
      } else if (keep(rng())) {
        set.push_back(node);
      }
    }
    ASSERT_TRUE(std::holds_alternative<PrefixFree>(check_prefix_free(set)));
    ASSERT_LE(kraft_sum(set), Dyadic::one());
    // Adding any extension of a member breaks prefix-freeness.
    if (!set.empty()) {
      BitString ext = set.front();
      ext.push_back(true);
      set.push_back(ext);
      ASSERT_TRUE(std::holds_alternative<PrefixViolation>(check_prefix_free(set)));
    }
  }
}

TEST(PrefixCheck, AgreesWithPairwiseScan) {
  std::uniform_int_distribution<int> len(0, 6), count(0, 12);
  for (int trial = 0; trial < 2000; ++trial) {
    std::set<std::string> texts;
    const int m = count(rng());
    for (int i = 0; i < m; ++i) {
      const int l = len(rng());
      texts.insert(testing_support::bits_of(rng()(), static_cast<std::size_t>(l)));
    }
    bool violation = false;
    for (const auto& a : texts)
      for (const auto& b : texts)
        if (a.size() < b.size() && b.compare(0, a.size(), a) == 0) violation = true;
    std::vector<BitString> set;
    for (const auto& t : texts) set.push_back(BitString::parse(t));
    ASSERT_EQ(std::holds_alternative<PrefixViolation>(check_prefix_free(set)), violation);
  }
}
