#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "omegalab/errors.hpp"

namespace omegalab {

/// Finite sequence of bits, first-read bit at index 0.
///
/// One byte per bit: the strings handled here are programs and outputs of a
/// few dozen bits, and the interpreter indexes them on every fetch.
class BitString {
public:
  BitString() = default;
  BitString(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) push_back(b != 0);
  }

  /// Parses the canonical '0'/'1' text form.
  static BitString parse(std::string_view text) {
    BitString out;
    out.bits_.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1')
        throw DomainError("bit string may only contain '0' and '1': \"" +
                          std::string(text) + "\"");
      out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
  }

  /// The low `width` bits of `value`, most significant first.
  static BitString from_uint(std::uint64_t value, std::size_t width) {
    BitString out;
    out.bits_.resize(width);
    for (std::size_t i = 0; i < width && i < 64; ++i)
      out.bits_[width - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
    return out;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }

  void push_back(bool bit) { bits_.push_back(static_cast<std::uint8_t>(bit)); }
  void pop_back() { bits_.pop_back(); }
  void reserve(std::size_t n) { bits_.reserve(n); }
  void clear() noexcept { bits_.clear(); }

  void append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  }

  BitString substr(std::size_t pos, std::size_t len) const {
    BitString out;
    auto first = bits_.begin() + static_cast<std::ptrdiff_t>(std::min(pos, size()));
    auto last = bits_.begin() + static_cast<std::ptrdiff_t>(std::min(pos + len, size()));
    out.bits_.assign(first, last);
    return out;
  }

  std::size_t popcount() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
  }

  /// True when *this is a prefix of `other` (equality included).
  bool is_prefix_of(const BitString& other) const noexcept {
    return size() <= other.size() &&
           std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
  }

  bool is_proper_prefix_of(const BitString& other) const noexcept {
    return size() < other.size() && is_prefix_of(other);
  }

  std::string to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) s[i] = '1';
    return s;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

  /// Plain lexicographic order; see `length_lex_less` for the canonical
  /// enumeration order.
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    return a.bits_ <=> b.bits_;
  }

  std::string_view raw() const noexcept {
    return {reinterpret_cast<const char*>(bits_.data()), bits_.size()};
  }

private:
  std::vector<std::uint8_t> bits_;
};

/// Length-lex ("", "0", "1", "00", ...): the global enumeration order.
inline bool length_lex_less(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct LengthLexLess {
  bool operator()(const BitString& a, const BitString& b) const {
    return length_lex_less(a, b);
  }
};

/// The i-th string in length-lex order, 1-based: the binary expansion of i
/// with its leading 1 removed.
inline BitString candidate_at(std::uint64_t index) {
  if (index == 0) throw DomainError("candidate indices start at 1");
  std::size_t width = 0;
  while ((index >> (width + 1)) != 0) ++width;
  return BitString::from_uint(index, width);
}

/// Inverse of `candidate_at`.
inline std::uint64_t candidate_index(const BitString& s) {
  if (s.size() >= 63) throw DomainError("candidate index overflows 64 bits");
  std::uint64_t index = 1;
  for (std::size_t i = 0; i < s.size(); ++i) index = (index << 1) | (s[i] ? 1U : 0U);
  return index;
}

}  // namespace omegalab

template <>
struct std::hash<omegalab::BitString> {
  std::size_t operator()(const omegalab::BitString& s) const noexcept {
    return std::hash<std::string_view>{}(s.raw());
  }
};
