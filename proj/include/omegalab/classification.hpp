#pragma once

#include <cstdint>
#include <vector>

#include "omegalab/bit_string.hpp"
#include "omegalab/errors.hpp"
#include "omegalab/explore.hpp"

namespace omegalab {

/// Halting answers for a list of candidates, length-lex, no duplicates.
struct HaltingClassification {
  struct Entry {
    BitString candidate;
    bool halts = false;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;

  std::size_t halting_count() const {
    std::size_t n = 0;
    for (const Entry& e : entries) n += e.halts ? 1 : 0;
    return n;
  }

  BitString as_bits() const {
    BitString bits;
    bits.reserve(entries.size());
    for (const Entry& e : entries) bits.push_back(e.halts);
    return bits;
  }

  friend bool operator==(const HaltingClassification&, const HaltingClassification&) = default;
};

/// Every string of length 1..max_len, length-lex.
inline std::vector<BitString> candidates_up_to(std::size_t max_len) {
  std::vector<BitString> out;
  if (max_len >= 63) throw DomainError("candidate length too large");
  const std::uint64_t last = (std::uint64_t{1} << (max_len + 1)) - 1;
  for (std::uint64_t i = 2; i <= last; ++i) out.push_back(candidate_at(i));
  return out;
}

/// Brute-force answer for each candidate, read off a resolved tree.
/// Throws UnresolvedCandidate (1-based position in the list) otherwise.
inline HaltingClassification ground_truth(const Explorer& ex, const std::vector<BitString>& candidates) {
  HaltingClassification out;
  out.entries.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const CandidateStatus s = ex.classify(candidates[i]);
    if (s == CandidateStatus::unresolved) throw UnresolvedCandidate(i + 1, candidates[i].to_string());
    out.entries.push_back({candidates[i], s == CandidateStatus::halts});
  }
  return out;
}

}  // namespace omegalab
