#pragma once

// The self-delimiting virtual machine.
//
// One unbounded register r (initially 0), an output string, and a program
// tape that is read bit by bit only when an instruction needs it. ip counts
// bits. Opcodes are 3 bits; LDI/BRZ/BRNZ carry an Elias-gamma operand n:
//
//   000 HALT   001 INC    010 DEC (saturating)   011 LDI n   (r <- n)
//   100 OUT0   101 OUT1   110 BRZ n (r == 0: ip <- n-1)   111 BRNZ n (r != 0: ip <- n-1)
//
// A program is exactly the bits consumed before HALT, so no halting program
// is a proper prefix of another.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "omegalab/bit_string.hpp"
#include "omegalab/codec.hpp"
#include "omegalab/errors.hpp"
#include "omegalab/register.hpp"

namespace omegalab {

/// Tag carried by every persisted result; Omega is meaningless without it.
inline constexpr std::string_view kIsaVersion = "sdvm-1";

enum class Opcode : std::uint8_t { halt, inc, dec, ldi, out0, out1, brz, brnz };

inline constexpr std::size_t kOpcodeBits = 3;

struct ExecState {
  BitString tape;  // every bit read so far
  std::size_t ip = 0;
  Register r;
  BitString out;
  std::uint64_t steps = 0;
  bool halted = false;
};

/// A fully decoded instruction together with the ip it leaves behind.
struct Instruction {
  Opcode op = Opcode::halt;
  std::size_t next_ip = 0;
  std::uint64_t operand = 0;
  std::size_t operand_at = 0;  // tape offset of the gamma code
  bool wide = false;           // operand has 64+ significant bits; re-decode from the tape
};

/// Decodes the instruction at s.ip against the bits already on the tape.
/// Returns nullopt when more bits must be read first (including a taken
/// branch whose target lies past the end of the tape).
inline std::optional<Instruction> decode(const ExecState& s) {
  const BitString& tape = s.tape;
  const std::size_t n = tape.size();
  const std::size_t ip = s.ip;
  if (ip + kOpcodeBits > n) return std::nullopt;

  Instruction ins;
  ins.op = static_cast<Opcode>((tape[ip] ? 4 : 0) | (tape[ip + 1] ? 2 : 0) | (tape[ip + 2] ? 1 : 0));
  ins.next_ip = ip + kOpcodeBits;
  if (ins.op != Opcode::ldi && ins.op != Opcode::brz && ins.op != Opcode::brnz) return ins;

  const std::size_t at = ins.next_ip;
  std::size_t zeros = 0;
  for (;;) {
    if (at + zeros >= n) return std::nullopt;
    if (tape[at + zeros]) break;
    ++zeros;
  }
  const std::size_t end = at + 2 * zeros + 1;
  if (end > n) return std::nullopt;
  if (zeros < 64) {
    std::uint64_t v = 0;
    for (std::size_t i = at + zeros; i < end; ++i) v = (v << 1) | (tape[i] ? 1U : 0U);
    ins.operand = v;
  } else {
    ins.wide = true;
  }
  ins.operand_at = at;
  ins.next_ip = end;

  if (ins.op == Opcode::brz || ins.op == Opcode::brnz) {
    const bool taken = (ins.op == Opcode::brz) == s.r.is_zero();
    if (taken) {
      // A 64-bit-plus target can never be backed by real tape.
      if (ins.wide) return std::nullopt;
      const std::uint64_t target = ins.operand - 1;
      if (target > n) return std::nullopt;
      ins.next_ip = static_cast<std::size_t>(target);
    }
  }
  return ins;
}

inline void apply(ExecState& s, const Instruction& ins) {
  switch (ins.op) {
    case Opcode::halt: s.halted = true; break;
    case Opcode::inc: s.r.increment(); break;
    case Opcode::dec: s.r.decrement(); break;
    case Opcode::ldi:
      if (ins.wide)
        s.r.assign(std::get<GammaDecoded>(decode_gamma(s.tape, ins.operand_at)).value);
      else
        s.r.assign(ins.operand);
      break;
    case Opcode::out0: s.out.push_back(false); break;
    case Opcode::out1: s.out.push_back(true); break;
    case Opcode::brz:
    case Opcode::brnz: break;
  }
  s.ip = ins.next_ip;
  ++s.steps;
}

enum class StepStatus { executed, halted, need_bit };

/// Executes one instruction using only bits already on the tape.
inline StepStatus try_step(ExecState& s) {
  auto ins = decode(s);
  if (!ins) return StepStatus::need_bit;
  apply(s, *ins);
  return s.halted ? StepStatus::halted : StepStatus::executed;
}

/// Supplies the next program bit, or nullopt when exhausted.
using BitSource = std::function<std::optional<bool>()>;

/// Executes one instruction, pulling bits from `source` as the instruction
/// demands them. need_bit means the source ran dry (DemandMoreBits).
inline StepStatus step(ExecState& s, const BitSource& source) {
  if (s.halted) throw DomainError("step on a halted machine");
  for (;;) {
    StepStatus st = try_step(s);
    if (st != StepStatus::need_bit) return st;
    auto bit = source();
    if (!bit) return StepStatus::need_bit;
    s.tape.push_back(*bit);
  }
}

// ---------------------------------------------------------------------------
// Non-halting certificates

/// (ip, r, |tape|) recurred after `period` steps with no bits read.
struct ExactLoop {
  std::size_t ip = 0;
  Natural r;
  std::size_t tape_len = 0;
  std::uint64_t period = 0;
  friend bool operator==(const ExactLoop&, const ExactLoop&) = default;
};

/// ip recurred at equal |tape| after `period` steps, r >= 1 at every
/// configuration of the cycle, and r did not shrink across it.
struct MonotoneLoop {
  std::size_t ip = 0;
  std::size_t tape_len = 0;
  Natural r_entry;
  Natural r_min;
  Natural delta_r;
  std::uint64_t period = 0;
  friend bool operator==(const MonotoneLoop&, const MonotoneLoop&) = default;
};

using Certificate = std::variant<ExactLoop, MonotoneLoop>;

inline std::string_view certificate_kind(const Certificate& c) {
  return std::holds_alternative<ExactLoop>(c) ? "exact_loop" : "monotone_loop";
}

/// Re-executes the claimed cycle from its entry configuration and checks
/// every condition the certificate asserts.
inline bool verify_certificate(const BitString& tape, const Certificate& cert) {
  const auto [ip, tape_len, entry, period] = std::visit(
      [](const auto& c) {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, ExactLoop>)
          return std::tuple{c.ip, c.tape_len, c.r, c.period};
        else
          return std::tuple{c.ip, c.tape_len, c.r_entry, c.period};
      },
      cert);
  if (tape_len > tape.size() || ip > tape_len || period == 0) return false;

  ExecState s;
  s.tape = tape.substr(0, tape_len);
  s.ip = ip;
  s.r.assign(entry);
  Natural r_min = entry;
  for (std::uint64_t i = 0; i < period; ++i) {
    if (try_step(s) != StepStatus::executed) return false;
    Natural r = s.r.value();
    if (r < r_min) r_min = r;
  }
  if (s.ip != ip) return false;
  const Natural r_end = s.r.value();
  if (const auto* exact = std::get_if<ExactLoop>(&cert)) return r_end == exact->r;
  const auto& mono = std::get<MonotoneLoop>(cert);
  return r_min >= 1 && r_end >= entry && r_min == mono.r_min && r_end - entry == mono.delta_r;
}

/// Watches the configuration sequence of one execution and reports a
/// certificate as soon as one applies.
///
/// Bookkeeping is per "epoch", the stretch between two tape growths; within
/// an epoch no bits are read, so the machine is a deterministic system over
/// (ip, r). Two rules are enough to eventually certify every infinite run
/// that stops reading: an (ip, 0) pair seen twice, and two consecutive
/// visits to an ip with r >= 1 throughout and r not decreasing.
class DivergenceDetector {
public:
  std::optional<Certificate> observe(std::size_t ip, const Register& r, std::uint64_t step,
                                     const BitString& tape) {
    const std::size_t len = tape.size();
    if (len != epoch_len_) {
      slots_.assign(len + 1, Slot{});
      epoch_len_ = len;
      last_zero_step_ = -1;
      last_step_ = -1;
    }
    const auto t = static_cast<std::int64_t>(step);
    if (t == last_step_) return std::nullopt;
    last_step_ = t;

    Slot& slot = slots_[ip];
    if (r.is_zero()) {
      if (slot.zero_step >= 0)
        return ExactLoop{ip, Natural(0), len, static_cast<std::uint64_t>(t - slot.zero_step)};
      slot.zero_step = t;
      last_zero_step_ = t;
    } else if (slot.last_step >= 0 && last_zero_step_ < slot.last_step) {
      const auto period = static_cast<std::uint64_t>(t - slot.last_step);
      if (r == slot.last_r) return ExactLoop{ip, r.value(), len, period};
      if (r > slot.last_r) return monotone(ip, slot.last_r, r, period, tape);
    }
    slot.last_step = t;
    slot.last_r = r;
    return std::nullopt;
  }

private:
  struct Slot {
    std::int64_t last_step = -1;
    Register last_r;
    std::int64_t zero_step = -1;
  };

  static Certificate monotone(std::size_t ip, const Register& entry, const Register& now,
                              std::uint64_t period, const BitString& tape) {
    ExecState s;
    s.tape = tape;
    s.ip = ip;
    s.r = entry;
    Register lowest = entry;
    for (std::uint64_t i = 0; i < period; ++i) {
      try_step(s);
      if (s.r < lowest) lowest = s.r;
    }
    return MonotoneLoop{ip, tape.size(), entry.value(), lowest.value(), now.value() - entry.value(),
                        period};
  }

  std::vector<Slot> slots_;
  std::size_t epoch_len_ = static_cast<std::size_t>(-1);
  std::int64_t last_zero_step_ = -1;
  std::int64_t last_step_ = -1;
};

/// One configuration as seen right before an instruction executes.
struct TraceEntry {
  std::uint64_t step = 0;
  std::size_t ip = 0;
  Register r;
  std::size_t tape_len = 0;
  std::size_t out_len = 0;
};

/// "step ip r |tape| |out|"
inline std::string format_trace_line(const TraceEntry& e) {
  return std::to_string(e.step) + ' ' + std::to_string(e.ip) + ' ' + e.r.to_string() + ' ' +
         std::to_string(e.tape_len) + ' ' + std::to_string(e.out_len);
}

/// Replays a recorded trace through the detector. `tape` is the tape at the
/// end of the trace (cycles only ever touch bits below their epoch length).
inline std::optional<Certificate> certify_divergence(const BitString& tape,
                                                     std::span<const TraceEntry> trace) {
  DivergenceDetector detector;
  for (const TraceEntry& e : trace) {
    if (e.tape_len > tape.size()) throw DomainError("trace refers to bits beyond the tape");
    if (auto c = detector.observe(e.ip, e.r, e.step, tape.substr(0, e.tape_len))) return c;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Budgeted execution

enum class Progress { halted, diverged, unknown, need_bit };

/// A resumable execution: advance until it halts, is certified divergent,
/// exhausts its step budget, or needs the next program bit (then `feed` it
/// and advance again). Copying an Execution forks it.
class Execution {
public:
  explicit Execution(bool detect_divergence = true) : detect_(detect_divergence) {}

  Progress advance(std::uint64_t max_steps) {
    if (state_.halted) return Progress::halted;
    if (certificate_) return Progress::diverged;
    for (;;) {
      if (trace_)
        trace_->push_back({state_.steps, state_.ip, state_.r, state_.tape.size(), state_.out.size()});
      if (detect_) {
        if (auto c = detector_.observe(state_.ip, state_.r, state_.steps, state_.tape)) {
          certificate_ = std::move(c);
          return Progress::diverged;
        }
      }
      auto ins = decode(state_);
      if (!ins) return Progress::need_bit;
      if (state_.steps >= max_steps) return Progress::unknown;
      apply(state_, *ins);
      if (state_.halted) return Progress::halted;
    }
  }

  void feed(bool bit) { state_.tape.push_back(bit); }

  const ExecState& state() const noexcept { return state_; }
  const std::optional<Certificate>& certificate() const noexcept { return certificate_; }

  /// Records every observed configuration into `sink` (nullptr disables).
  void set_trace(std::vector<TraceEntry>* sink) noexcept { trace_ = sink; }

private:
  ExecState state_;
  DivergenceDetector detector_;
  std::optional<Certificate> certificate_;
  std::vector<TraceEntry>* trace_ = nullptr;
  bool detect_;
};

// ---------------------------------------------------------------------------
// Outcomes of running a whole bit string

struct Halted {
  BitString program;
  BitString output;
  std::uint64_t steps = 0;
};

struct Diverges {
  Certificate certificate;
  std::uint64_t steps = 0;  // steps executed when the certificate closed
};

struct Unknown {
  std::uint64_t budget = 0;
};

/// The machine halted before consuming the whole input: the input extends
/// a valid program.
struct ExcessBits {
  std::size_t consumed = 0;
  std::size_t supplied = 0;
};

using RunResult = std::variant<Halted, Diverges, Unknown, ExcessBits, DemandMoreBits>;

struct RunOptions {
  bool detect_divergence = true;
  std::vector<TraceEntry>* trace = nullptr;
};

inline RunResult run(const BitString& program, std::uint64_t max_steps, const RunOptions& options = {}) {
  if (max_steps == 0) throw DomainError("max_steps must be at least 1");
  Execution ex(options.detect_divergence);
  ex.set_trace(options.trace);
  std::size_t fed = 0;
  for (;;) {
    switch (ex.advance(max_steps)) {
      case Progress::need_bit:
        if (fed == program.size()) return DemandMoreBits{};
        ex.feed(program[fed++]);
        break;
      case Progress::halted:
        if (ex.state().tape.size() < program.size())
          return ExcessBits{ex.state().tape.size(), program.size()};
        return Halted{program, ex.state().out, ex.state().steps};
      case Progress::diverged:
        return Diverges{*ex.certificate(), ex.state().steps};
      case Progress::unknown:
        return Unknown{max_steps};
    }
  }
}

inline std::string_view outcome_name(const RunResult& r) {
  switch (r.index()) {
    case 0: return "halted";
    case 1: return "diverges";
    case 2: return "unknown";
    case 3: return "excess_bits";
    default: return "demand_more_bits";
  }
}

}  // namespace omegalab
