#pragma once

// Shared test helpers: a deliberately naive reference interpreter written
// from the instruction table alone, plus cached explorations.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "omegalab/explore.hpp"

namespace ref {

enum class Kind { halted, needs_more, excess, timeout };

struct Result {
  Kind kind = Kind::timeout;
  std::string output;
  std::uint64_t steps = 0;
};

// Gamma-coded value starting at `pos`; nullopt when the string ends first.
// Values are capped well below overflow for the short programs used here.
inline std::optional<std::pair<std::uint64_t, std::size_t>> gamma_at(const std::string& p, std::size_t pos) {
  std::size_t zeros = 0;
  while (true) {
    if (pos + zeros >= p.size()) return std::nullopt;
    if (p[pos + zeros] == '1') break;
    ++zeros;
  }
  if (pos + 2 * zeros + 1 > p.size()) return std::nullopt;
  std::uint64_t v = 0;
  for (std::size_t i = 0; i <= zeros; ++i) v = v * 2 + static_cast<std::uint64_t>(p[pos + zeros + i] - '0');
  return std::pair{v, 2 * zeros + 1};
}

// Runs a complete program text. The register is a plain 64-bit counter,
// which cannot overflow within the budgets the tests use.
inline Result run(const std::string& p, std::uint64_t budget) {
  std::size_t ip = 0, read = 0;
  std::uint64_t r = 0, steps = 0;
  std::string out;
  auto need = [&](std::size_t upto) {  // bits [0, upto) must exist
    if (upto > p.size()) return false;
    if (upto > read) read = upto;
    return true;
  };
  for (;;) {
    if (!need(ip + 3)) return {Kind::needs_more, out, steps};
    const int op = (p[ip] - '0') * 4 + (p[ip + 1] - '0') * 2 + (p[ip + 2] - '0');
    std::size_t next = ip + 3;
    std::uint64_t operand = 0;
    if (op == 3 || op == 6 || op == 7) {
      const auto g = gamma_at(p, next);
      if (!g) return {Kind::needs_more, out, steps};
      need(next + g->second);
      operand = g->first;
      next += g->second;
    }
    const bool jump = (op == 6 && r == 0) || (op == 7 && r != 0);
    if (jump && !need(operand - 1)) return {Kind::needs_more, out, steps};
    if (steps >= budget) return {Kind::timeout, out, steps};
    ++steps;
    switch (op) {
      case 0: return {read == p.size() ? Kind::halted : Kind::excess, out, steps};
      case 1: ++r; break;
      case 2: r = r ? r - 1 : 0; break;
      case 3: r = operand; break;
      case 4: out += '0'; break;
      case 5: out += '1'; break;
      default: break;
    }
    ip = jump ? operand - 1 : next;
  }
}

}  // namespace ref

namespace testing_support {

/// One exploration per (depth, budget), built on first use and shared.
inline const omegalab::Explorer& explorer(std::size_t depth, std::uint64_t budget) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::uint64_t>, omegalab::Explorer> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({depth, budget});
  if (it == cache.end()) {
    omegalab::Explorer ex;
    ex.expand(depth, budget);
    it = cache.emplace(std::pair{depth, budget}, std::move(ex)).first;
  }
  return it->second;
}

inline std::string bits_of(std::uint64_t v, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i) s[width - 1 - i] = static_cast<char>('0' + ((v >> i) & 1));
  return s;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed'0b17'2026ULL);
  return gen;
}

}  // namespace testing_support
