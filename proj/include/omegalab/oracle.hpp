#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "omegalab/bit_string.hpp"
#include "omegalab/classification.hpp"
#include "omegalab/codec.hpp"
#include "omegalab/errors.hpp"
#include "omegalab/explore.hpp"
#include "omegalab/machine.hpp"

namespace omegalab {

/// Bit i (1-based) says whether the i-th length-lex string halts as a
/// program. Non-programs (proper prefixes, extensions) score 0.
inline BitString turing_number(const Explorer& ex, std::uint64_t n) {
  BitString bits;
  bits.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) {
    const BitString c = candidate_at(i);
    const CandidateStatus s = ex.classify(c);
    if (s == CandidateStatus::unresolved) throw UnresolvedCandidate(i, c.to_string());
    bits.push_back(s == CandidateStatus::halts);
  }
  return bits;
}

/// The first n length-lex strings, "" included.
inline std::vector<BitString> first_candidates(std::uint64_t n) {
  std::vector<BitString> out;
  out.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) out.push_back(candidate_at(i));
  return out;
}

struct CountEncoding {
  std::uint64_t k = 0;  // number of 1 bits
  BitString encoded;    // gamma(k + 1)
};

inline CountEncoding compress_count(const BitString& bits) {
  const std::uint64_t k = bits.popcount();
  return {k, encode_gamma(k + 1)};
}

struct CountLimits {
  std::uint64_t start_budget = 16;
  std::uint64_t max_budget = 10000;
};

struct CountTrickResult {
  HaltingClassification classification;
  std::uint64_t total_steps = 0;  // machine steps spent over all rounds
  std::size_t rounds = 0;
};

/// Runs all candidates side by side with doubling budgets until exactly k of
/// them have halted; everything else is then declared never-halting.
///
/// Each candidate is run on its own, independent of any explorer. Once a
/// candidate is seen to halt, diverge, or be a non-program it is not rerun.
inline CountTrickResult expand_count(std::span<const BitString> candidates, std::uint64_t k,
                                     const CountLimits& limits = {}) {
  CountTrickResult result;
  result.classification.entries.reserve(candidates.size());
  for (const BitString& c : candidates) result.classification.entries.push_back({c, false});
  if (k == 0) return result;

  std::vector<std::size_t> open(candidates.size());
  for (std::size_t i = 0; i < open.size(); ++i) open[i] = i;
  std::uint64_t halted = 0;
  std::uint64_t budget = std::max<std::uint64_t>(1, std::min(limits.start_budget, limits.max_budget));
  for (;;) {
    ++result.rounds;
    std::vector<std::size_t> still_open;
    for (std::size_t i : open) {
      const RunResult r = run(candidates[i], budget);
      if (const auto* h = std::get_if<Halted>(&r)) {
        result.classification.entries[i].halts = true;
        result.total_steps += h->steps;
        ++halted;
      } else if (const auto* d = std::get_if<Diverges>(&r)) {
        result.total_steps += d->steps;
      } else if (std::holds_alternative<Unknown>(r)) {
        result.total_steps += budget;
        still_open.push_back(i);
      }
    }
    open = std::move(still_open);
    if (halted > k)
      throw ContradictionError(std::to_string(halted) + " candidates halted but the count said " +
                               std::to_string(k));
    if (halted == k) return result;
    if (open.empty() || budget == limits.max_budget)
      throw Inconclusive("only " + std::to_string(halted) + " of " + std::to_string(k) +
                         " halts observed (budget " + std::to_string(budget) + ", " +
                         std::to_string(open.size()) + " candidates still running)");
    budget = budget >= limits.max_budget / 2 ? limits.max_budget : budget * 2;
  }
}

/// Maps a 1-based question index to its yes/no answer.
using QuestionEvaluator = std::function<bool(std::uint64_t)>;

/// Digit i answers question i.
inline BitString oracle_digits(const QuestionEvaluator& answer, std::uint64_t n) {
  BitString bits;
  bits.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) {
    try {
      bits.push_back(answer(i));
    } catch (const EvaluatorError&) {
      throw;
    } catch (const std::exception& e) {
      throw EvaluatorError(i, e.what());
    }
  }
  return bits;
}

/// "Does the i-th length-lex candidate halt?", answered from a resolved tree.
inline QuestionEvaluator halting_evaluator(const Explorer& ex) {
  return [&ex](std::uint64_t i) {
    const BitString c = candidate_at(i);
    const CandidateStatus s = ex.classify(c);
    if (s == CandidateStatus::unresolved) throw UnresolvedCandidate(i, c.to_string());
    return s == CandidateStatus::halts;
  };
}

}  // namespace omegalab
