#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "omegalab/bit_string.hpp"
#include "omegalab/codec.hpp"
#include "omegalab/dyadic.hpp"
#include "omegalab/errors.hpp"
#include "omegalab/explore.hpp"
#include "omegalab/machine.hpp"

namespace omegalab {

namespace detail {

inline void append_op(BitString& p, Opcode op) {
  const auto v = static_cast<unsigned>(op);
  p.push_back((v >> 2) & 1);
  p.push_back((v >> 1) & 1);
  p.push_back(v & 1);
}

}  // namespace detail

/// OUT0/OUT1 per bit of x, then HALT. Always 3|x| + 3 bits.
inline BitString literal_program(const BitString& x) {
  BitString p;
  p.reserve(3 * x.size() + 3);
  for (std::size_t i = 0; i < x.size(); ++i) detail::append_op(p, x[i] ? Opcode::out1 : Opcode::out0);
  detail::append_op(p, Opcode::halt);
  return p;
}

inline std::size_t literal_bound(const BitString& x) { return 3 * x.size() + 3; }

struct ComplexityRecord {
  BitString target;
  std::optional<std::size_t> k_value;  // empty: nothing found up to the ceiling
  std::size_t ceiling = 0;
  std::optional<BitString> witness;
  std::size_t literal_bound = 0;
  bool upper_bound_only = false;  // witness came from a construction, not a search
};

/// Minimal program per output over a resolved enumeration.
///
/// Built from the halted set in length-lex order, so the first program seen
/// for an output is both shortest and the length-lex tie-break winner.
class ComplexityIndex {
public:
  /// Requires every candidate of length <= max_len to be decided.
  ComplexityIndex(const Explorer& ex, std::size_t max_len) : max_len_(max_len) {
    require_resolved(ex, max_len);
    for (HaltRecord& h : ex.halted_set(max_len)) {
      ++halting_programs_;
      best_.try_emplace(std::move(h.output), std::move(h.program));
    }
  }

  std::size_t max_len() const noexcept { return max_len_; }
  std::size_t halting_programs() const noexcept { return halting_programs_; }
  std::size_t distinct_outputs() const noexcept { return best_.size(); }

  /// Shortest program of at most `ceiling` bits (<= max_len) printing x.
  const BitString* minimal(const BitString& x, std::size_t ceiling) const {
    if (ceiling > max_len_) throw DomainError("ceiling exceeds the indexed length");
    const auto it = best_.find(x);
    if (it == best_.end() || it->second.size() > ceiling) return nullptr;
    return &it->second;
  }

  ComplexityRecord k_complexity(const BitString& x, std::size_t ceiling) const {
    ComplexityRecord rec;
    rec.target = x;
    rec.ceiling = ceiling;
    rec.literal_bound = literal_bound(x);
    if (const BitString* p = minimal(x, ceiling)) {
      rec.k_value = p->size();
      rec.witness = *p;
    }
    return rec;
  }

  /// Number of outputs with k <= m, for m <= max_len.
  std::size_t count_at_most(std::size_t m) const {
    if (m > max_len_) throw DomainError("m exceeds the indexed length");
    std::size_t n = 0;
    for (const auto& [out, prog] : best_) n += prog.size() <= m ? 1 : 0;
    return n;
  }

  /// k value -> number of distinct outputs with that k.
  std::map<std::size_t, std::size_t> k_histogram() const {
    std::map<std::size_t, std::size_t> h;
    for (const auto& [out, prog] : best_) ++h[prog.size()];
    return h;
  }

  static void require_resolved(const Explorer& ex, std::size_t max_len) {
    if (ex.resolved_below(max_len)) return;
    for (std::uint64_t i = 1; candidate_at(i).size() <= max_len; ++i) {
      const BitString c = candidate_at(i);
      if (ex.classify(c) == CandidateStatus::unresolved) throw UnresolvedCandidate(i, c.to_string());
    }
    throw UnresolvedCandidate(0, "");  // unreachable when the tree is consistent
  }

private:
  std::size_t max_len_;
  std::size_t halting_programs_ = 0;
  std::unordered_map<BitString, BitString> best_;
};

inline ComplexityRecord k_complexity(const Explorer& ex, const BitString& x, std::size_t ceiling) {
  return ComplexityIndex(ex, ceiling).k_complexity(x, ceiling);
}

struct EleganceVerdict {
  bool elegant = true;
  BitString output;
  std::optional<BitString> shorter;  // a shorter program with the same output
};

/// Throws NotAProgram unless p runs to Halted within max_steps.
inline EleganceVerdict is_elegant(const Explorer& ex, const BitString& p, std::uint64_t max_steps = 10000) {
  const RunResult r = run(p, max_steps);
  const auto* h = std::get_if<Halted>(&r);
  if (!h) throw NotAProgram("\"" + p.to_string() + "\" is not a halting program (" + std::string(outcome_name(r)) + ")");
  EleganceVerdict v;
  v.output = h->output;
  if (p.size() == 0) return v;
  const ComplexityIndex index(ex, p.size() - 1);
  if (const BitString* q = index.minimal(h->output, p.size() - 1)) {
    v.elegant = false;
    v.shorter = *q;
  }
  return v;
}

struct Census {
  std::size_t n = 0;
  std::size_t ceiling = 0;
  std::map<std::size_t, std::uint64_t> by_k;
  std::uint64_t unknown = 0;  // k above the ceiling
};

/// Distribution of k over all 2^n strings of length n.
inline Census census(const ComplexityIndex& index, std::size_t n, std::size_t ceiling) {
  if (n > 24) throw DomainError("census length too large to enumerate");
  Census c{n, ceiling, {}, 0};
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t v = 0; v < count; ++v) {
    const BitString x = BitString::from_uint(v, n);
    if (const BitString* p = index.minimal(x, ceiling))
      ++c.by_k[p->size()];
    else
      ++c.unknown;
  }
  return c;
}

inline Census census(const Explorer& ex, std::size_t n, std::size_t ceiling) {
  return census(ComplexityIndex(ex, ceiling), n, ceiling);
}

/// Run-length program builder: a run of L equal bits is either spelled out
/// (3L bits) or looped as LDI L; OUTb; DEC; BRNZ back-to-OUTb. Each run takes
/// whichever is shorter at its position, then HALT.
inline BitString run_length_program(const BitString& data) {
  BitString p;
  for (std::size_t i = 0; i < data.size();) {
    std::size_t j = i;
    while (j < data.size() && data[j] == data[i]) ++j;
    const std::size_t len = j - i;
    const Opcode out = data[i] ? Opcode::out1 : Opcode::out0;
    const std::size_t body = p.size() + 3 + gamma_length(len);  // address of OUTb
    const std::size_t loop_cost = 3 + gamma_length(len) + 3 + 3 + 3 + gamma_length(body + 1);
    if (loop_cost < 3 * len) {
      detail::append_op(p, Opcode::ldi);
      p.append(encode_gamma(len));
      detail::append_op(p, out);
      detail::append_op(p, Opcode::dec);
      detail::append_op(p, Opcode::brnz);
      p.append(encode_gamma(body + 1));
    } else {
      for (std::size_t k = 0; k < len; ++k) detail::append_op(p, out);
    }
    i = j;
  }
  detail::append_op(p, Opcode::halt);
  return p;
}

/// Exhaustive mode needs a resolved explorer and equals k_complexity.
/// Constructive mode also tries run-length programs; a constructed program
/// shorter than anything the search proved is reported as an upper bound.
inline ComplexityRecord best_theory(const Explorer* ex, const BitString& data, std::size_t ceiling,
                                    bool constructive) {
  ComplexityRecord rec;
  if (ex) {
    rec = k_complexity(*ex, data, ceiling);
  } else {
    if (!constructive) throw DomainError("exhaustive mode needs an enumeration");
    rec.target = data;
    rec.ceiling = ceiling;
    rec.literal_bound = literal_bound(data);
  }
  if (!constructive || rec.k_value) return rec;

  // Nothing of <= ceiling bits prints data: any program found now is only an
  // upper bound on k.
  BitString best = literal_program(data);
  const BitString looped = run_length_program(data);
  if (looped.size() < best.size()) {
    const RunResult r = run(looped, 64 * (data.size() + 16));
    const auto* h = std::get_if<Halted>(&r);
    if (h && h->output == data && h->program == looped) best = looped;
  }
  rec.k_value = best.size();
  rec.witness = best;
  rec.upper_bound_only = true;
  return rec;
}

struct CoverInterval {
  Dyadic center;
  Dyadic length;  // unclipped
  Dyadic lo;      // clipped to [0, 1]
  Dyadic hi;
};

struct CoverReport {
  std::uint64_t epsilon_exponent = 0;
  std::vector<CoverInterval> intervals;
  Dyadic total;
};

/// Covers the i-th real (0-based) with an interval of length 2^-(e+i+1)
/// centered on it. The lengths sum to 2^-e (1 - 2^-M) < 2^-e.
inline CoverReport borel_cover(std::uint64_t e, const std::vector<Dyadic>& reals) {
  std::set<Dyadic> seen;
  CoverReport rep;
  rep.epsilon_exponent = e;
  for (std::size_t i = 0; i < reals.size(); ++i) {
    const Dyadic& x = reals[i];
    if (x >= Dyadic::one()) throw DomainError("real " + x.to_string() + " is outside [0,1)");
    if (!seen.insert(x).second) throw DomainError("real " + x.to_string() + " appears twice");
    const Dyadic len = Dyadic::pow2_neg(e + i + 1);
    const Dyadic half = len.scaled_down(1);
    CoverInterval iv{x, len, x >= half ? x - half : Dyadic::zero(), x + half};
    if (iv.hi > Dyadic::one()) iv.hi = Dyadic::one();
    rep.total += len;
    rep.intervals.push_back(std::move(iv));
  }
  return rep;
}

/// Outputs of halted programs read as binary fractions, in program order,
/// keeping the first program for each distinct value ("1" and "10" coincide).
inline std::vector<Dyadic> reals_from_outputs(const std::vector<HaltRecord>& halted) {
  std::vector<Dyadic> out;
  std::set<Dyadic> seen;
  for (const HaltRecord& h : halted) {
    Dyadic v = Dyadic::from_fraction_bits(h.output);
    if (seen.insert(v).second) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace omegalab
