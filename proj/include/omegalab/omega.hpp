#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "omegalab/classification.hpp"
#include "omegalab/dyadic.hpp"
#include "omegalab/errors.hpp"
#include "omegalab/explore.hpp"

namespace omegalab {

/// Certified enclosure of this machine's halting probability.
///
/// lo is the mass of programs seen to halt; hi adds the frontier mass that
/// could still halt. Dead mass can never contribute.
struct OmegaBracket {
  DyadicInterval interval;
  std::size_t depth = 0;
  std::uint64_t budget = 0;
  std::string isa_version{kIsaVersion};
};

inline OmegaBracket omega_bracket(const MassLedger& ledger, std::size_t depth = 0, std::uint64_t budget = 0) {
  return {DyadicInterval(ledger.halted, ledger.halted + ledger.frontier), depth, budget, std::string(kIsaVersion)};
}

inline OmegaBracket omega_bracket(const Explorer& ex) {
  return omega_bracket(ex.ledger(), ex.depth(), ex.budget());
}

namespace detail {

// k-th bit after the binary point (k >= 1) of a dyadic below 1.
inline bool fraction_bit(const Dyadic& d, std::uint64_t k) {
  if (k > d.exponent()) return false;
  return boost::multiprecision::bit_test(d.numerator(), static_cast<unsigned>(d.exponent() - k));
}

}  // namespace detail

/// The longest k with floor(lo * 2^k) == floor(hi * 2^k), as k bits.
///
/// Floor agreement is conservative at dyadic boundaries: [1/4, 1/2] yields
/// nothing even though every point but 1/2 starts with 0. A degenerate
/// interval yields the expansion of its point up to its last 1 bit.
inline BitString certified_bits(const DyadicInterval& iv) {
  const Dyadic& lo = iv.lo();
  const Dyadic& hi = iv.hi();
  if (hi == Dyadic::one()) return {};  // floor(2^k) never matches floor(lo 2^k) for lo < 1
  const std::uint64_t horizon =
      lo == hi ? lo.exponent() : std::max(lo.exponent(), hi.exponent());
  std::uint64_t k = 0;
  while (k < horizon && detail::fraction_bit(lo, k + 1) == detail::fraction_bit(hi, k + 1)) ++k;
  return binary_expansion(lo, k);
}

inline BitString certified_bits(const OmegaBracket& bracket) { return certified_bits(bracket.interval); }

/// Schedule for the dovetailing inside halting_from_prefix: round j explores
/// to depth min(N + j, max_depth) with budget min(start_budget * 2^j, max_budget).
struct DovetailLimits {
  std::size_t max_depth = 22;
  std::uint64_t start_budget = 64;
  std::uint64_t max_budget = 10000;
};

struct PrefixOracleAnswer {
  HaltingClassification classification;  // every candidate of 1..N bits
  Dyadic lower_bound;                     // halted mass when the answer was declared
  std::size_t rounds = 0;
  std::size_t depth = 0;
  std::uint64_t budget = 0;
};

/// Decides halting for every program of at most N = |prefix| bits, given the
/// first N bits of Omega.
///
/// Dovetails the whole program space until the halted mass L reaches
/// value(prefix). From then on no further program of <= N bits can halt: it
/// would add at least 2^-N and push Omega to value(prefix) + 2^-N or beyond,
/// past what its first N bits allow. The stopping condition is re-checked
/// exactly, and a prefix that contradicts the explorer's own certified
/// bracket is rejected rather than trusted.
inline PrefixOracleAnswer halting_from_prefix(Explorer& ex, const BitString& prefix,
                                              const DovetailLimits& limits = {},
                                              const ExpandOptions& options = {}) {
  const std::size_t n = prefix.size();
  PrefixOracleAnswer answer;
  if (n == 0) return answer;
  if (limits.max_depth < n) throw DomainError("max_depth must reach the prefix length");

  const Dyadic target = Dyadic::from_fraction_bits(prefix);
  const Dyadic cell = Dyadic::pow2_neg(n);
  std::uint64_t budget = std::max<std::uint64_t>(1, std::min(limits.start_budget, limits.max_budget));
  for (std::size_t round = 0;; ++round) {
    const std::size_t depth = std::min(n + round, limits.max_depth);
    ex.expand(depth, budget, options);
    const OmegaBracket bracket = omega_bracket(ex);
    if (target > bracket.interval.hi())
      throw DomainError("prefix " + prefix.to_string() + " lies above the certified upper bound " +
                        bracket.interval.hi().to_string());
    if (target + cell <= bracket.interval.lo())
      throw DomainError("prefix " + prefix.to_string() + " lies below the certified lower bound " +
                        bracket.interval.lo().to_string());

    const Dyadic& halted_mass = bracket.interval.lo();
    if (halted_mass >= target) {
      answer.lower_bound = halted_mass;
      answer.rounds = round + 1;
      answer.depth = ex.depth();
      answer.budget = ex.budget();
      for (BitString& c : candidates_up_to(n)) {
        const bool halts = ex.classify(c) == CandidateStatus::halts;
        answer.classification.entries.push_back({std::move(c), halts});
      }
      return answer;
    }
    if (depth == limits.max_depth && budget == limits.max_budget)
      throw Inconclusive("halted mass " + halted_mass.to_string() + " never reached " + target.to_string() +
                         " (rounds " + std::to_string(round + 1) + ", depth " + std::to_string(ex.depth()) +
                         ", budget " + std::to_string(ex.budget()) + ")");
    budget = budget >= limits.max_budget / 2 ? limits.max_budget : budget * 2;
  }
}

}  // namespace omegalab
