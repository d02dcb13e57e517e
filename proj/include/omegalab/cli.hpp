#pragma once

// Command-line front end. Everything is reachable through dispatch(), which
// never touches std::cout directly, so tests drive it in-process.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "omegalab/classification.hpp"
#include "omegalab/complexity.hpp"
#include "omegalab/errors.hpp"
#include "omegalab/explore.hpp"
#include "omegalab/machine.hpp"
#include "omegalab/omega.hpp"
#include "omegalab/oracle.hpp"
#include "omegalab/snapshot.hpp"

namespace omegalab::cli {

using nlohmann::ordered_json;

enum class OutputFormat { text, json, csv };

inline std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "text") return OutputFormat::text;
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  return std::nullopt;
}

inline constexpr std::string_view kDefaultSnapshot = "omegalab.snapshot.json";

struct RunConfig {
  std::size_t depth = 12;
  std::uint64_t step_budget = 10000;
  std::optional<std::string> snapshot_path;
  OutputFormat output_format = OutputFormat::text;
  std::string isa_version{kIsaVersion};
  unsigned workers = 1;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::uint64_t positive(std::string_view v, std::size_t line, std::string_view key) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || out == 0)
    throw ParseError(line, std::string(key) + " must be a positive integer, got \"" + std::string(v) + "\"");
  return out;
}

}  // namespace detail

/// "key = value" lines; blank lines and lines starting with # are ignored.
/// Keys: depth, step_budget, snapshot_path, output_format, isa_version, workers.
inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const std::string_view key = detail::trim(line.substr(0, eq));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    if (key == "depth") {
      const auto d = detail::positive(value, line_no, key);
      if (d > 62) throw ParseError(line_no, "depth is at most 62");
      cfg.depth = d;
    } else if (key == "step_budget") {
      cfg.step_budget = detail::positive(value, line_no, key);
    } else if (key == "snapshot_path") {
      if (value.empty()) throw ParseError(line_no, "snapshot_path is empty");
      cfg.snapshot_path = std::string(value);
    } else if (key == "output_format") {
      const auto f = parse_format(value);
      if (!f) throw ParseError(line_no, "output_format must be json, csv or text");
      cfg.output_format = *f;
    } else if (key == "isa_version") {
      if (value != kIsaVersion)
        throw ParseError(line_no, "this build runs \"" + std::string(kIsaVersion) + "\", not \"" +
                                      std::string(value) + "\"");
      cfg.isa_version = std::string(value);
    } else if (key == "workers") {
      const auto w = detail::positive(value, line_no, key);
      if (w > 256) throw ParseError(line_no, "workers is at most 256");
      cfg.workers = static_cast<unsigned>(w);
    } else {
      throw ParseError(line_no, "unknown key \"" + std::string(key) + "\"");
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw LoadError("config file not found: " + path.string());
  return parse_config(read_file(path));
}

// ---------------------------------------------------------------------------
// Reports

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  ordered_json doc;
  std::optional<Table> table;  // used for csv when present
  int exit_code = 0;
};

namespace detail {

inline std::string scalar_text(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline void render_text(const ordered_json& j, const std::string& prefix, std::ostream& out) {
  for (const auto& [key, v] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (v.is_object()) {
      render_text(v, name, out);
    } else if (v.is_array()) {
      out << name << ":\n";
      for (const auto& e : v) {
        if (e.is_object()) {
          out << ' ';
          for (const auto& [k, x] : e.items()) out << ' ' << k << '=' << (x.is_structured() ? x.dump() : scalar_text(x));
        } else {
          out << "  " << scalar_text(e);
        }
        out << '\n';
      }
    } else {
      out << name << ": " << scalar_text(v) << '\n';
    }
  }
}

inline void flatten(const ordered_json& j, const std::string& prefix, Table& t) {
  for (const auto& [key, v] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (v.is_object()) {
      flatten(v, name, t);
    } else if (!v.is_array()) {
      t.columns.push_back(name);
      t.rows.front().push_back(scalar_text(v));
    }
  }
}

}  // namespace detail

inline void emit(const Report& r, OutputFormat format, std::ostream& out) {
  switch (format) {
    case OutputFormat::json: out << r.doc.dump(2) << '\n'; break;
    case OutputFormat::text: detail::render_text(r.doc, "", out); break;
    case OutputFormat::csv: {
      Table t;
      if (r.table) {
        t = *r.table;
      } else {
        t.rows.emplace_back();
        detail::flatten(r.doc, "", t);
      }
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
      };
      line(t.columns);
      for (const auto& row : t.rows) line(row);
      break;
    }
  }
}

inline ordered_json ledger_report(const MassLedger& l) { return ledger_json(l); }

inline ordered_json header(std::string_view command) {
  ordered_json j;
  j["command"] = std::string(command);
  j["isa_version"] = std::string(kIsaVersion);
  return j;
}

// ---------------------------------------------------------------------------
// Session: resolved configuration plus explorer acquisition

struct Session {
  RunConfig config;
  std::filesystem::path snapshot_path;

  ExpandOptions expand_options() const { return {config.workers, 0}; }

  /// A tree at exactly (depth, budget): the stored snapshot is reused when
  /// it does not exceed either, otherwise exploration starts over. Either way
  /// the result is the same tree.
  Explorer explorer(std::size_t depth, std::uint64_t budget) const {
    Explorer ex;
    if (std::filesystem::exists(snapshot_path)) {
      Snapshot snap = parse_snapshot(read_file(snapshot_path));
      if (snap.depth <= depth && snap.step_budget <= budget) ex = restore(snap);
    }
    ex.expand(depth, budget, expand_options());
    return ex;
  }
};

inline ordered_json tree_summary(const Explorer& ex) {
  ordered_json j;
  j["depth"] = ex.depth();
  j["budget"] = ex.budget();
  j["ledger"] = ledger_report(ex.ledger());
  const auto c = ex.leaf_counts();
  j["leaves"] = {{"halted", c.halted}, {"diverged", c.diverged}, {"unknown", c.unknown}, {"pending", c.pending}};
  j["nodes"] = ex.node_count();
  return j;
}

// ---------------------------------------------------------------------------
// Commands

inline Report cmd_run(const Session& s, const std::string& program_text, std::optional<std::uint64_t> max_steps,
                      bool trace) {
  const BitString program = BitString::parse(program_text);
  const std::uint64_t budget = max_steps.value_or(s.config.step_budget);
  std::vector<TraceEntry> entries;
  RunOptions opts;
  if (trace) opts.trace = &entries;
  const RunResult r = run(program, budget, opts);

  Report rep;
  rep.doc = header("run");
  rep.doc["program"] = program.to_string();
  rep.doc["max_steps"] = budget;
  rep.doc["outcome"] = std::string(outcome_name(r));
  if (const auto* h = std::get_if<Halted>(&r)) {
    rep.doc["output"] = h->output.to_string();
    rep.doc["steps"] = h->steps;
  } else if (const auto* d = std::get_if<Diverges>(&r)) {
    rep.doc["steps"] = d->steps;
    rep.doc["certificate"] = omegalab::detail::certificate_json(d->certificate);
  } else if (std::holds_alternative<Unknown>(r)) {
    rep.exit_code = 3;
  } else if (const auto* e = std::get_if<ExcessBits>(&r)) {
    rep.doc["consumed"] = e->consumed;
    rep.doc["supplied"] = e->supplied;
    rep.exit_code = 2;
  } else {
    rep.doc["supplied"] = program.size();
    rep.exit_code = 2;
  }
  if (trace) {
    // A configuration is observed again after every bit it waits for; keep one.
    std::vector<TraceEntry> unique;
    for (auto& e : entries) {
      if (!unique.empty() && unique.back().step == e.step) unique.back() = e;
      else unique.push_back(e);
    }
    ordered_json lines = ordered_json::array();
    Table t{{"step", "ip", "r", "tape_len", "out_len"}, {}};
    for (const auto& e : unique) {
      lines.push_back(format_trace_line(e));
      t.rows.push_back({std::to_string(e.step), std::to_string(e.ip), e.r.to_string(), std::to_string(e.tape_len),
                        std::to_string(e.out_len)});
    }
    rep.doc["trace"] = std::move(lines);
    rep.table = std::move(t);
  }
  return rep;
}

inline Report cmd_enumerate(const Session& s, std::size_t depth, std::uint64_t budget) {
  const Explorer ex = s.explorer(depth, budget);
  save_snapshot(ex, s.snapshot_path);
  Report rep;
  rep.doc = header("enumerate");
  rep.doc.update(tree_summary(ex));
  return rep;
}

inline Report cmd_omega(const Session& s, std::size_t depth, std::uint64_t budget) {
  const Explorer ex = s.explorer(depth, budget);
  const OmegaBracket b = omega_bracket(ex);
  const BitString bits = certified_bits(b);
  Report rep;
  rep.doc = header("omega");
  rep.doc["depth"] = b.depth;
  rep.doc["budget"] = b.budget;
  rep.doc["lower"] = b.interval.lo().to_string();
  rep.doc["upper"] = b.interval.hi().to_string();
  rep.doc["width"] = b.interval.width().to_string();
  rep.doc["certified_bits"] = bits.to_string();
  rep.doc["certified_count"] = bits.size();
  return rep;
}

/// Depth needed so that candidates 1..n are all decidable.
inline std::size_t depth_for_candidates(std::uint64_t n) {
  return n == 0 ? 1 : std::max<std::size_t>(1, candidate_at(n).size());
}

inline void require_candidates(const Explorer& ex, std::uint64_t n) {
  for (std::uint64_t i = 1; i <= n; ++i) {
    const BitString c = candidate_at(i);
    if (ex.classify(c) == CandidateStatus::unresolved) throw UnresolvedCandidate(i, c.to_string());
  }
}

inline Report cmd_turing(const Session& s, std::uint64_t n, std::size_t depth, std::uint64_t budget) {
  const Explorer ex = s.explorer(depth, budget);
  const BitString bits = turing_number(ex, n);
  const CountEncoding enc = compress_count(bits);
  Report rep;
  rep.doc = header("oracle turing");
  rep.doc["n"] = n;
  rep.doc["bits"] = bits.to_string();
  rep.doc["k"] = enc.k;
  rep.doc["encoded_bits"] = enc.encoded.to_string();
  return rep;
}

inline Report cmd_count_trick(const Session& s, std::uint64_t n, std::optional<std::uint64_t> given_k,
                              std::size_t depth, std::uint64_t budget) {
  std::optional<BitString> truth;
  std::uint64_t k = 0;
  if (given_k) {
    k = *given_k;
  } else {
    truth = turing_number(s.explorer(depth, budget), n);
    k = truth->popcount();
  }
  const auto candidates = first_candidates(n);
  const CountTrickResult res = expand_count(candidates, k, {16, budget});
  const BitString encoded = encode_gamma(k + 1);
  std::size_t floor_log = 0;
  while ((std::uint64_t{2} << floor_log) <= n + 1) ++floor_log;

  Report rep;
  rep.doc = header("oracle count-trick");
  rep.doc["n"] = n;
  rep.doc["k"] = k;
  rep.doc["encoded_bits"] = encoded.to_string();
  rep.doc["encoded_length"] = encoded.size();
  rep.doc["length_bound"] = 2 * floor_log + 1;
  rep.doc["total_steps"] = res.total_steps;
  rep.doc["rounds"] = res.rounds;
  rep.doc["bits"] = res.classification.as_bits().to_string();
  if (truth) {
    const bool same = res.classification.as_bits() == *truth;
    rep.doc["matches_enumeration"] = same;
    if (!same) rep.exit_code = 2;
  }
  return rep;
}

inline Report cmd_digits(const Session& s, std::string_view eval, std::uint64_t n, std::size_t depth,
                         std::uint64_t budget) {
  BitString bits;
  if (eval == "halting") {
    const Explorer ex = s.explorer(depth, budget);
    require_candidates(ex, n);
    bits = oracle_digits(halting_evaluator(ex), n);
  } else if (eval == "parity") {
    bits = oracle_digits([](std::uint64_t i) { return i % 2 == 1; }, n);
  } else {
    bits = oracle_digits([](std::uint64_t) { return false; }, n);
  }
  Report rep;
  rep.doc = header("oracle digits");
  rep.doc["eval"] = std::string(eval);
  rep.doc["n"] = n;
  rep.doc["bits"] = bits.to_string();
  return rep;
}

inline Report cmd_from_omega(const Session& s, std::optional<std::uint64_t> n, std::optional<std::string> prefix_text,
                             std::size_t depth, std::uint64_t budget, std::size_t max_depth) {
  Explorer ex = s.explorer(depth, budget);
  BitString prefix;
  std::string source;
  if (prefix_text) {
    prefix = BitString::parse(*prefix_text);
    if (n && *n != prefix.size()) throw DomainError("-n disagrees with the length of --prefix");
    source = "given";
  } else {
    const BitString certified = certified_bits(omega_bracket(ex));
    const std::uint64_t want = n.value_or(certified.size());
    if (want > certified.size())
      throw Inconclusive("only " + std::to_string(certified.size()) + " bits of Omega are certified at depth " +
                         std::to_string(ex.depth()) + ", budget " + std::to_string(ex.budget()));
    prefix = certified.substr(0, want);
    source = "certified";
  }
  const PrefixOracleAnswer ans =
      halting_from_prefix(ex, prefix, {std::max(max_depth, prefix.size()), 64, budget}, s.expand_options());
  Report rep;
  rep.doc = header("oracle from-omega");
  rep.doc["prefix"] = prefix.to_string();
  rep.doc["source"] = source;
  rep.doc["n"] = prefix.size();
  rep.doc["bits"] = ans.classification.as_bits().to_string();
  rep.doc["halting_count"] = ans.classification.halting_count();
  rep.doc["lower_bound"] = ans.lower_bound.to_string();
  rep.doc["rounds"] = ans.rounds;
  rep.doc["depth"] = ans.depth;
  rep.doc["budget"] = ans.budget;
  ordered_json halting = ordered_json::array();
  for (const auto& e : ans.classification.entries)
    if (e.halts) halting.push_back(e.candidate.to_string());
  rep.doc["halting_programs"] = std::move(halting);
  return rep;
}

inline ordered_json record_json(const ComplexityRecord& r) {
  ordered_json j;
  j["target"] = r.target.to_string();
  j["target_length"] = r.target.size();
  j["ceiling"] = r.ceiling;
  if (r.k_value) j["k"] = *r.k_value;
  else j["k"] = "unknown";
  j["witness"] = r.witness ? r.witness->to_string() : "";
  j["literal_bound"] = r.literal_bound;
  j["upper_bound_only"] = r.upper_bound_only;
  return j;
}

inline BitString read_data_arg(const std::string& arg) {
  if (arg.empty() || arg.front() != '@') return BitString::parse(arg);
  std::string text = read_file(arg.substr(1));
  std::string bits;
  for (char c : text)
    if (c != ' ' && c != '\n' && c != '\r' && c != '\t') bits.push_back(c);
  return BitString::parse(bits);
}

inline Report cmd_k(const Session& s, const std::string& data_arg, std::size_t ceiling, bool constructive,
                    std::uint64_t budget) {
  const BitString data = read_data_arg(data_arg);
  const Explorer ex = s.explorer(std::max<std::size_t>(1, ceiling), budget);
  const ComplexityRecord rec = best_theory(&ex, data, ceiling, constructive);
  Report rep;
  rep.doc = header("k");
  rep.doc["mode"] = constructive ? "constructive" : "exhaustive";
  rep.doc.update(record_json(rec));
  if (rec.k_value) {
    rep.doc["bits_saved_vs_literal"] = static_cast<std::int64_t>(rec.literal_bound) - static_cast<std::int64_t>(*rec.k_value);
    rep.doc["bits_saved_vs_data"] = static_cast<std::int64_t>(data.size()) - static_cast<std::int64_t>(*rec.k_value);
  } else {
    rep.exit_code = 3;
  }
  return rep;
}

inline Report cmd_elegant(const Session& s, const std::string& program_text, std::uint64_t budget) {
  const BitString p = BitString::parse(program_text);
  const Explorer ex = s.explorer(std::max<std::size_t>(1, p.size() == 0 ? 1 : p.size() - 1), budget);
  const EleganceVerdict v = is_elegant(ex, p, budget);
  Report rep;
  rep.doc = header("elegant");
  rep.doc["program"] = p.to_string();
  rep.doc["output"] = v.output.to_string();
  rep.doc["elegant"] = v.elegant;
  if (v.shorter) rep.doc["shorter"] = v.shorter->to_string();
  return rep;
}

inline Report cmd_census(const Session& s, std::size_t n, std::size_t ceiling, std::uint64_t budget) {
  const Explorer ex = s.explorer(std::max<std::size_t>(1, ceiling), budget);
  const Census c = census(ex, n, ceiling);
  Report rep;
  rep.doc = header("census");
  rep.doc["n"] = n;
  rep.doc["ceiling"] = ceiling;
  rep.doc["strings"] = std::uint64_t{1} << n;
  ordered_json hist = ordered_json::array();
  Table t{{"k", "count"}, {}};
  for (const auto& [k, count] : c.by_k) {
    hist.push_back({{"k", k}, {"count", count}});
    t.rows.push_back({std::to_string(k), std::to_string(count)});
  }
  rep.doc["histogram"] = std::move(hist);
  rep.doc["unknown"] = c.unknown;
  t.rows.push_back({"unknown", std::to_string(c.unknown)});
  rep.table = std::move(t);
  return rep;
}

inline Report cmd_cover(const Session& s, std::uint64_t e, std::size_t from_depth, std::uint64_t budget) {
  const Explorer ex = s.explorer(from_depth, budget);
  const auto halted = ex.halted_set(from_depth);
  const CoverReport cov = borel_cover(e, reals_from_outputs(halted));
  Report rep;
  rep.doc = header("cover");
  rep.doc["eps_exp"] = e;
  rep.doc["epsilon"] = Dyadic::pow2_neg(e).to_string();
  rep.doc["from_depth"] = from_depth;
  rep.doc["budget"] = budget;
  rep.doc["reals"] = cov.intervals.size();
  rep.doc["total"] = cov.total.to_string();
  ordered_json ivs = ordered_json::array();
  Table t{{"index", "center", "length", "lo", "hi"}, {}};
  for (std::size_t i = 0; i < cov.intervals.size(); ++i) {
    const auto& iv = cov.intervals[i];
    ivs.push_back({{"index", i},
                   {"center", iv.center.to_string()},
                   {"length", iv.length.to_string()},
                   {"lo", iv.lo.to_string()},
                   {"hi", iv.hi.to_string()}});
    t.rows.push_back({std::to_string(i), iv.center.to_string(), iv.length.to_string(), iv.lo.to_string(),
                      iv.hi.to_string()});
  }
  rep.doc["intervals"] = std::move(ivs);
  rep.table = std::move(t);
  return rep;
}

inline Report snapshot_report(std::string_view command, const Explorer& ex) {
  Report rep;
  rep.doc = header(command);
  rep.doc.update(tree_summary(ex));
  return rep;
}

inline Report cmd_snapshot_save(const Session& s, const std::string& out, std::optional<std::size_t> depth,
                                std::optional<std::uint64_t> budget) {
  Explorer ex;
  if (depth || budget) {
    ex = s.explorer(depth.value_or(s.config.depth), budget.value_or(s.config.step_budget));
  } else {
    if (!std::filesystem::exists(s.snapshot_path))
      throw LoadError("no snapshot at " + s.snapshot_path.string() + "; run enumerate first or pass --depth");
    ex = load_snapshot(s.snapshot_path);
  }
  save_snapshot(ex, out);
  return snapshot_report("snapshot save", ex);
}

inline Report cmd_snapshot_load(const Session& s, const std::string& in) {
  const Explorer ex = load_snapshot(in);
  save_snapshot(ex, s.snapshot_path);
  return snapshot_report("snapshot load", ex);
}

inline Report cmd_snapshot_info(const Session& s, const std::optional<std::string>& in) {
  const std::filesystem::path path = in ? std::filesystem::path(*in) : s.snapshot_path;
  return snapshot_report("snapshot info", load_snapshot(path));
}

// ---------------------------------------------------------------------------
// Dispatch

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 1 usage error, 2 domain/load/parse error, 3 no answer yet
/// (budget exhausted, inconclusive search, unresolved candidates).
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                    std::optional<std::string> env_snapshot) {
  CLI::App app{"Exact experiments with a self-delimiting machine and its halting probability", "omegalab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format_flag, config_flag, snapshot_flag;
  unsigned workers_flag = 0;
  app.add_option("--format", format_flag, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--workers", workers_flag, "exploration threads (never changes output)")
      ->check(CLI::Range(1u, 256u));
  app.add_option("--config", config_flag, "key = value configuration file");
  app.add_option("--snapshot", snapshot_flag, "snapshot file");

  std::optional<std::size_t> depth;
  std::optional<std::uint64_t> budget;
  auto tree_flags = [&](CLI::App* sub) {
    sub->add_option("--depth", depth, "exploration depth in bits")->check(CLI::Range(1, 62));
    sub->add_option("--budget", budget, "step budget per program")->check(CLI::PositiveNumber);
  };

  auto* run_cmd = app.add_subcommand("run", "run one program");
  std::string program;
  std::optional<std::uint64_t> max_steps;
  bool trace = false;
  run_cmd->add_option("--program", program, "program bits")->required();
  run_cmd->add_option("--max-steps", max_steps, "step budget")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--trace", trace, "include the execution trace");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "explore program space and store a snapshot");
  tree_flags(enumerate_cmd);

  auto* omega_cmd = app.add_subcommand("omega", "certified bracket on the halting probability");
  bool emit_bits = false;
  tree_flags(omega_cmd);
  omega_cmd->add_flag("--emit-bits", emit_bits, "print only the certified bits");

  auto* oracle_cmd = app.add_subcommand("oracle", "oracle numbers");
  oracle_cmd->require_subcommand(1);
  std::uint64_t n = 0;
  std::optional<std::uint64_t> opt_n;
  auto* turing_cmd = oracle_cmd->add_subcommand("turing", "halting bit of each length-lex candidate");
  turing_cmd->add_option("-n", n, "number of candidates")->required();
  tree_flags(turing_cmd);
  auto* count_cmd = oracle_cmd->add_subcommand("count-trick", "recover halting bits from their count");
  std::optional<std::uint64_t> given_k;
  count_cmd->add_option("-n", n, "number of candidates")->required();
  count_cmd->add_option("--k", given_k, "asserted number of halting candidates");
  tree_flags(count_cmd);
  auto* from_omega_cmd = oracle_cmd->add_subcommand("from-omega", "decide halting from leading bits of Omega");
  std::optional<std::string> prefix;
  std::size_t max_depth = 22;
  from_omega_cmd->add_option("-n", opt_n, "number of bits");
  from_omega_cmd->add_option("--prefix", prefix, "leading bits of Omega");
  from_omega_cmd->add_option("--max-depth", max_depth, "deepest exploration allowed")->check(CLI::Range(1, 62));
  tree_flags(from_omega_cmd);
  auto* digits_cmd = oracle_cmd->add_subcommand("digits", "one digit per question");
  std::string eval = "halting";
  digits_cmd->add_option("-n", n, "number of digits")->required();
  digits_cmd->add_option("--eval", eval, "halting, parity or false")
      ->check(CLI::IsMember({"halting", "parity", "false"}));
  tree_flags(digits_cmd);

  auto* k_cmd = app.add_subcommand("k", "program-size complexity of a bit string");
  std::string data;
  std::size_t ceiling = 0;
  bool constructive = false;
  k_cmd->add_option("--data", data, "bits, or @file")->required();
  k_cmd->add_option("--ceiling", ceiling, "longest program searched")->required()->check(CLI::Range(0, 62));
  k_cmd->add_flag("--constructive", constructive, "also try run-length loop programs");
  k_cmd->add_option("--budget", budget, "step budget per program")->check(CLI::PositiveNumber);

  auto* elegant_cmd = app.add_subcommand("elegant", "is no shorter program printing the same output?");
  elegant_cmd->add_option("--program", program, "program bits")->required();
  elegant_cmd->add_option("--budget", budget, "step budget per program")->check(CLI::PositiveNumber);

  auto* census_cmd = app.add_subcommand("census", "distribution of k over all strings of one length");
  std::size_t census_n = 0;
  bool csv = false;
  census_cmd->add_option("-n", census_n, "string length")->required()->check(CLI::Range(0, 24));
  census_cmd->add_option("--ceiling", ceiling, "longest program searched")->required()->check(CLI::Range(0, 62));
  census_cmd->add_flag("--csv", csv, "same as --format csv");
  census_cmd->add_option("--budget", budget, "step budget per program")->check(CLI::PositiveNumber);

  auto* cover_cmd = app.add_subcommand("cover", "cover enumerated reals with intervals of small total length");
  std::uint64_t eps_exp = 0;
  std::size_t from_depth = 0;
  cover_cmd->add_option("--eps-exp", eps_exp, "epsilon = 2^-E")->required()->check(CLI::Range(0, 4096));
  cover_cmd->add_option("--from-depth", from_depth, "programs explored to this depth")
      ->required()
      ->check(CLI::Range(1, 62));
  cover_cmd->add_option("--budget", budget, "step budget per program")->check(CLI::PositiveNumber);

  auto* snapshot_cmd = app.add_subcommand("snapshot", "save, load or inspect snapshots");
  snapshot_cmd->require_subcommand(1);
  std::string path_arg;
  std::optional<std::string> info_in;
  auto* save_cmd = snapshot_cmd->add_subcommand("save", "write the current tree to a file");
  save_cmd->add_option("--out", path_arg, "destination")->required();
  tree_flags(save_cmd);
  auto* load_cmd = snapshot_cmd->add_subcommand("load", "install a snapshot file as the current tree");
  load_cmd->add_option("--in", path_arg, "source")->required();
  auto* info_cmd = snapshot_cmd->add_subcommand("info", "describe a snapshot");
  info_cmd->add_option("--in", info_in, "source (default: current snapshot)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    Session s;
    if (!config_flag.empty()) s.config = load_config(config_flag);
    if (!format_flag.empty()) s.config.output_format = *parse_format(format_flag);
    if (csv) s.config.output_format = OutputFormat::csv;
    if (workers_flag) s.config.workers = workers_flag;
    if (!snapshot_flag.empty()) s.snapshot_path = snapshot_flag;
    else if (s.config.snapshot_path) s.snapshot_path = *s.config.snapshot_path;
    else if (env_snapshot && !env_snapshot->empty()) s.snapshot_path = *env_snapshot;
    else s.snapshot_path = std::string(kDefaultSnapshot);

    const std::uint64_t b = budget.value_or(s.config.step_budget);
    auto tree_depth = [&](std::size_t needed) { return depth.value_or(std::max(s.config.depth, needed)); };

    Report rep;
    if (*run_cmd) {
      rep = cmd_run(s, program, max_steps, trace);
    } else if (*enumerate_cmd) {
      rep = cmd_enumerate(s, tree_depth(1), b);
    } else if (*omega_cmd) {
      rep = cmd_omega(s, tree_depth(1), b);
      if (emit_bits) {
        out << rep.doc["certified_bits"].get<std::string>() << '\n';
        return rep.exit_code;
      }
    } else if (*turing_cmd) {
      rep = cmd_turing(s, n, tree_depth(depth_for_candidates(n)), b);
    } else if (*count_cmd) {
      rep = cmd_count_trick(s, n, given_k, tree_depth(depth_for_candidates(n)), b);
    } else if (*digits_cmd) {
      rep = cmd_digits(s, eval, n, tree_depth(depth_for_candidates(n)), b);
    } else if (*from_omega_cmd) {
      rep = cmd_from_omega(s, opt_n, prefix, tree_depth(16), b, max_depth);
    } else if (*k_cmd) {
      rep = cmd_k(s, data, ceiling, constructive, b);
    } else if (*elegant_cmd) {
      rep = cmd_elegant(s, program, b);
    } else if (*census_cmd) {
      rep = cmd_census(s, census_n, ceiling, b);
    } else if (*cover_cmd) {
      rep = cmd_cover(s, eps_exp, from_depth, b);
    } else if (*save_cmd) {
      rep = cmd_snapshot_save(s, path_arg, depth, budget);
    } else if (*load_cmd) {
      rep = cmd_snapshot_load(s, path_arg);
    } else if (*info_cmd) {
      rep = cmd_snapshot_info(s, info_in);
    }
    emit(rep, s.config.output_format, out);
    return rep.exit_code;
  } catch (const UnresolvedCandidate& e) {
    err << "unresolved: " << e.what() << '\n';
    return 3;
  } catch (const Inconclusive& e) {
    err << "inconclusive: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const char* env = std::getenv("OMEGALAB_SNAPSHOT");
  return dispatch(args, out, err, env ? std::optional<std::string>(env) : std::nullopt);
}

}  // namespace omegalab::cli
