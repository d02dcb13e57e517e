#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "omegalab/bit_string.hpp"
#include "omegalab/errors.hpp"

namespace omegalab {

using Natural = boost::multiprecision::cpp_int;

inline std::string to_decimal(const Natural& n) { return n.str(); }

inline Natural parse_natural(std::string_view text) {
  if (text.empty()) throw DomainError("empty integer");
  for (char c : text)
    if (c < '0' || c > '9')
      throw DomainError("not a non-negative decimal integer: \"" + std::string(text) + "\"");
  return Natural(std::string(text));
}

/// Exact non-negative rational numerator / 2^exponent.
///
/// Kept normalized: the numerator is odd, or it is zero and the exponent is
/// zero. Every probability mass in the system is a finite sum of such values,
/// so nothing here ever rounds.
class Dyadic {
public:
  Dyadic() = default;
  Dyadic(Natural numerator, std::uint64_t exponent)
      : num_(std::move(numerator)), exp_(exponent) {
    if (num_ < 0) throw DomainError("dyadic numerator must be non-negative");
    normalize();
  }

  static Dyadic zero() { return {}; }
  static Dyadic one() { return {Natural(1), 0}; }
  /// 2^-k
  static Dyadic pow2_neg(std::uint64_t k) { return {Natural(1), k}; }

  /// The bits read as a binary fraction .b1 b2 b3 ...
  static Dyadic from_fraction_bits(const BitString& bits) {
    Natural n = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      n <<= 1;
      if (bits[i]) n |= 1;
    }
    return {std::move(n), bits.size()};
  }

  /// Parses "num/2^exp".
  static Dyadic parse(std::string_view text) {
    auto slash = text.find("/2^");
    if (slash == std::string_view::npos)
      throw DomainError("dyadic must look like \"num/2^exp\": \"" + std::string(text) + "\"");
    Natural num = parse_natural(text.substr(0, slash));
    Natural exp = parse_natural(text.substr(slash + 3));
    if (exp > Natural(UINT32_MAX)) throw DomainError("dyadic exponent too large");
    return {std::move(num), exp.convert_to<std::uint64_t>()};
  }

  const Natural& numerator() const noexcept { return num_; }
  std::uint64_t exponent() const noexcept { return exp_; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  std::string to_string() const { return num_.str() + "/2^" + std::to_string(exp_); }

  /// floor(value * 2^k)
  Natural floor_scaled(std::uint64_t k) const {
    if (k >= exp_) return num_ << static_cast<unsigned>(k - exp_);
    return num_ >> static_cast<unsigned>(exp_ - k);
  }

  Dyadic& operator+=(const Dyadic& other) {
    if (other.exp_ > exp_) {
      num_ <<= static_cast<unsigned>(other.exp_ - exp_);
      exp_ = other.exp_;
      num_ += other.num_;
    } else {
      num_ += other.num_ << static_cast<unsigned>(exp_ - other.exp_);
    }
    normalize();
    return *this;
  }

  /// Throws DomainError when other > *this.
  Dyadic& operator-=(const Dyadic& other) {
    if (*this < other) throw DomainError("dyadic subtraction below zero");
    if (other.exp_ > exp_) {
      num_ <<= static_cast<unsigned>(other.exp_ - exp_);
      exp_ = other.exp_;
      num_ -= other.num_;
    } else {
      num_ -= other.num_ << static_cast<unsigned>(exp_ - other.exp_);
    }
    normalize();
    return *this;
  }

  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }

  /// value * 2^-k
  Dyadic scaled_down(std::uint64_t k) const { return {num_, exp_ + k}; }

  friend bool operator==(const Dyadic&, const Dyadic&) = default;

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    // Normalized values with different exponents still need the common scale.
    Natural lhs = a.num_, rhs = b.num_;
    if (a.exp_ < b.exp_)
      lhs <<= static_cast<unsigned>(b.exp_ - a.exp_);
    else
      rhs <<= static_cast<unsigned>(a.exp_ - b.exp_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

private:
  void normalize() {
    if (num_.is_zero()) {
      exp_ = 0;
      return;
    }
    auto twos = static_cast<std::uint64_t>(boost::multiprecision::lsb(num_));
    if (twos > exp_) twos = exp_;
    if (twos > 0) {
      num_ >>= static_cast<unsigned>(twos);
      exp_ -= twos;
    }
  }

  Natural num_ = 0;
  std::uint64_t exp_ = 0;
};

inline Dyadic dyadic_add(const Dyadic& a, const Dyadic& b) { return a + b; }
inline Dyadic dyadic_sub(const Dyadic& a, const Dyadic& b) { return a - b; }
inline std::strong_ordering dyadic_cmp(const Dyadic& a, const Dyadic& b) { return a <=> b; }

/// Closed interval [lo, hi] with 0 <= lo <= hi <= 1.
class DyadicInterval {
public:
  DyadicInterval() : lo_(Dyadic::zero()), hi_(Dyadic::one()) {}
  DyadicInterval(Dyadic lo, Dyadic hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (!(lo_ <= hi_) || hi_ > Dyadic::one())
      throw DomainError("interval must satisfy 0 <= lo <= hi <= 1, got [" +
                        lo_.to_string() + ", " + hi_.to_string() + "]");
  }

  const Dyadic& lo() const noexcept { return lo_; }
  const Dyadic& hi() const noexcept { return hi_; }
  Dyadic width() const { return hi_ - lo_; }

  bool contains(const Dyadic& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const DyadicInterval& inner) const {
    return lo_ <= inner.lo_ && inner.hi_ <= hi_;
  }

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;

private:
  Dyadic lo_;
  Dyadic hi_;
};

/// First k bits after the binary point of d, i.e. floor(d * 2^k) padded to
/// k bits. d = 1 has two expansions and is rejected for k > 0.
inline BitString binary_expansion(const Dyadic& d, std::uint64_t k) {
  if (d > Dyadic::one()) throw DomainError("binary_expansion needs 0 <= d <= 1");
  if (k == 0) return {};
  if (d == Dyadic::one()) throw DomainError("binary expansion of 1 is ambiguous");
  Natural scaled = d.floor_scaled(k);
  BitString out;
  out.reserve(k);
  for (std::uint64_t i = k; i-- > 0;) out.push_back(boost::multiprecision::bit_test(scaled, static_cast<unsigned>(i)));
  return out;
}

}  // namespace omegalab
