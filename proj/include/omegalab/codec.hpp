#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "omegalab/bit_string.hpp"
#include "omegalab/dyadic.hpp"
#include "omegalab/errors.hpp"

namespace omegalab {

/// Signal: the reader ran off the end of the available bits. Not a failure;
/// it is how on-demand program reading is driven.
struct DemandMoreBits {
  friend bool operator==(DemandMoreBits, DemandMoreBits) { return true; }
};

// Elias gamma: floor(log2 n) zeros, then n in binary (leading 1 included).

inline BitString encode_gamma(const Natural& n) {
  if (n < 1) throw DomainError("gamma code needs n >= 1");
  auto top = static_cast<std::size_t>(boost::multiprecision::msb(n));
  BitString out;
  out.reserve(2 * top + 1);
  for (std::size_t i = 0; i < top; ++i) out.push_back(false);
  for (std::size_t i = top + 1; i-- > 0;)
    out.push_back(boost::multiprecision::bit_test(n, static_cast<unsigned>(i)));
  return out;
}

inline BitString encode_gamma(std::uint64_t n) { return encode_gamma(Natural(n)); }

/// Length of the gamma code of n (n >= 1).
inline std::size_t gamma_length(std::uint64_t n) {
  std::size_t top = 0;
  while ((n >> (top + 1)) != 0) ++top;
  return 2 * top + 1;
}

struct GammaDecoded {
  Natural value;
  std::size_t consumed;
  friend bool operator==(const GammaDecoded&, const GammaDecoded&) = default;
};

inline std::variant<GammaDecoded, DemandMoreBits> decode_gamma(const BitString& stream,
                                                               std::size_t offset) {
  if (offset > stream.size()) throw DomainError("decode offset past end of stream");
  std::size_t zeros = 0;
  while (true) {
    if (offset + zeros >= stream.size()) return DemandMoreBits{};
    if (stream[offset + zeros]) break;
    ++zeros;
  }
  const std::size_t consumed = 2 * zeros + 1;
  if (offset + consumed > stream.size()) return DemandMoreBits{};
  Natural value = 0;
  for (std::size_t i = offset + zeros; i < offset + consumed; ++i) {
    value <<= 1;
    if (stream[i]) value |= 1;
  }
  return GammaDecoded{std::move(value), consumed};
}

/// Sum of 2^-|s| over the members.
template <class Range>
Dyadic kraft_sum(const Range& set) {
  std::size_t longest = 0;
  for (const BitString& s : set) longest = std::max(longest, s.size());
  std::vector<std::uint64_t> per_length(longest + 1, 0);
  for (const BitString& s : set) ++per_length[s.size()];
  Natural num = 0;
  for (std::size_t len = 0; len <= longest; ++len)
    if (per_length[len] != 0) num += Natural(per_length[len]) << static_cast<unsigned>(longest - len);
  return {std::move(num), longest};
}

struct PrefixFree {
  friend bool operator==(PrefixFree, PrefixFree) { return true; }
};

/// `shorter` is a proper prefix of `longer`.
struct PrefixViolation {
  BitString shorter;
  BitString longer;
  friend bool operator==(const PrefixViolation&, const PrefixViolation&) = default;
};

using PrefixCheck = std::variant<PrefixFree, PrefixViolation>;

/// Scans members in length-lex order and reports the first one that has a
/// proper prefix in the set (its shortest such prefix).
template <class Range>
PrefixCheck check_prefix_free(const Range& set) {
  std::vector<BitString> sorted(std::begin(set), std::end(set));
  std::sort(sorted.begin(), sorted.end(), LengthLexLess{});
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::unordered_set<BitString> seen;
  seen.reserve(sorted.size());
  for (const BitString& s : sorted) {
    BitString probe;
    probe.reserve(s.size());
    for (std::size_t len = 0; len < s.size(); ++len) {
      if (seen.contains(probe)) return PrefixViolation{probe, s};
      probe.push_back(s[len]);
    }
    seen.insert(s);
  }
  return PrefixFree{};
}

}  // namespace omegalab
