#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "omegalab/dyadic.hpp"

namespace omegalab {

/// Unbounded non-negative machine register.
///
/// Values that fit in 64 bits live inline; the big representation is only
/// engaged above that, which no enumerated program short of ~128 bits can
/// reach.
class Register {
public:
  Register() = default;
  explicit Register(std::uint64_t v) : small_(v) {}
  explicit Register(const Natural& v) { assign(v); }

  bool is_zero() const noexcept { return !big_ && small_ == 0; }
  bool is_small() const noexcept { return !big_; }
  std::uint64_t small() const noexcept { return small_; }

  void increment() {
    if (big_) {
      ++*big_;
    } else if (small_ == kMax) {
      big_ = Natural(small_) + 1;
    } else {
      ++small_;
    }
  }

  /// Saturates at zero.
  void decrement() {
    if (big_) {
      --*big_;
      demote();
    } else if (small_ != 0) {
      --small_;
    }
  }

  void assign(std::uint64_t v) {
    big_.reset();
    small_ = v;
  }

  void assign(const Natural& v) {
    if (v <= Natural(kMax)) {
      big_.reset();
      small_ = v.convert_to<std::uint64_t>();
    } else {
      big_ = v;
      small_ = 0;
    }
  }

  Natural value() const { return big_ ? *big_ : Natural(small_); }
  std::string to_string() const { return big_ ? big_->str() : std::to_string(small_); }

  friend bool operator==(const Register& a, const Register& b) {
    if (a.big_.has_value() != b.big_.has_value()) return false;
    return a.big_ ? *a.big_ == *b.big_ : a.small_ == b.small_;
  }

  friend std::strong_ordering operator<=>(const Register& a, const Register& b) {
    if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
    if (!a.big_) return std::strong_ordering::less;
    if (!b.big_) return std::strong_ordering::greater;
    if (*a.big_ < *b.big_) return std::strong_ordering::less;
    if (*a.big_ > *b.big_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

private:
  static constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

  void demote() {
    if (*big_ <= Natural(kMax)) {
      small_ = big_->convert_to<std::uint64_t>();
      big_.reset();
    }
  }

  std::uint64_t small_ = 0;
  std::optional<Natural> big_;
};

}  // namespace omegalab
