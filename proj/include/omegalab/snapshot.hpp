#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "omegalab/errors.hpp"
#include "omegalab/explore.hpp"

namespace omegalab {

/// Everything needed to resume an exploration.
struct Snapshot {
  std::string isa_version{kIsaVersion};
  std::size_t depth = 0;
  std::uint64_t step_budget = 0;
  MassLedger ledger;
  std::vector<LeafInfo> leaves;  // length-lex
};

inline Snapshot take_snapshot(const Explorer& ex) {
  return {std::string(kIsaVersion), ex.depth(), ex.budget(), ex.ledger(), ex.leaves()};
}

/// Rebuilds the explorer; the stored ledger must match the leaves exactly.
inline Explorer restore(const Snapshot& snap) {
  if (snap.isa_version != kIsaVersion)
    throw LoadError("snapshot is for machine \"" + snap.isa_version + "\", this build runs \"" +
                    std::string(kIsaVersion) + "\"");
  Explorer ex = Explorer::from_leaves(snap.leaves, snap.depth, snap.step_budget);
  if (!(ex.ledger() == snap.ledger)) throw LoadError("snapshot ledger does not match its leaves");
  return ex;
}

namespace detail {

using nlohmann::ordered_json;

inline ordered_json natural_json(const Natural& n) { return n.str(); }

inline ordered_json certificate_json(const Certificate& c) {
  ordered_json j;
  j["kind"] = std::string(certificate_kind(c));
  if (const auto* e = std::get_if<ExactLoop>(&c)) {
    j["ip"] = e->ip;
    j["r"] = natural_json(e->r);
    j["tape_len"] = e->tape_len;
    j["period"] = e->period;
  } else {
    const auto& m = std::get<MonotoneLoop>(c);
    j["ip"] = m.ip;
    j["tape_len"] = m.tape_len;
    j["r_entry"] = natural_json(m.r_entry);
    j["r_min"] = natural_json(m.r_min);
    j["delta_r"] = natural_json(m.delta_r);
    j["period"] = m.period;
  }
  return j;
}

inline Natural natural_field(const ordered_json& j, const char* key) {
  return parse_natural(j.at(key).get<std::string>());
}

inline Certificate certificate_from_json(const ordered_json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "exact_loop")
    return ExactLoop{j.at("ip").get<std::size_t>(), natural_field(j, "r"), j.at("tape_len").get<std::size_t>(),
                     j.at("period").get<std::uint64_t>()};
  if (kind == "monotone_loop")
    return MonotoneLoop{j.at("ip").get<std::size_t>(), j.at("tape_len").get<std::size_t>(),
                        natural_field(j, "r_entry"), natural_field(j, "r_min"), natural_field(j, "delta_r"),
                        j.at("period").get<std::uint64_t>()};
  throw LoadError("unknown certificate kind \"" + kind + "\"");
}

inline NodeStatus status_from_name(std::string_view name) {
  for (auto s : {NodeStatus::pending, NodeStatus::halted, NodeStatus::diverged, NodeStatus::unknown})
    if (status_name(s) == name) return s;
  throw LoadError("unknown leaf status \"" + std::string(name) + "\"");
}

}  // namespace detail

inline nlohmann::ordered_json ledger_json(const MassLedger& l) {
  nlohmann::ordered_json j;
  j["halted"] = l.halted.to_string();
  j["dead"] = l.dead.to_string();
  j["frontier"] = l.frontier.to_string();
  return j;
}

inline nlohmann::ordered_json to_json(const Snapshot& snap) {
  using detail::ordered_json;
  ordered_json j;
  j["format"] = "omegalab.snapshot";
  j["isa_version"] = snap.isa_version;
  j["depth"] = snap.depth;
  j["budgets"] = {{"step_budget", snap.step_budget}};
  j["ledger"] = ledger_json(snap.ledger);
  ordered_json leaves = ordered_json::array();
  for (const LeafInfo& leaf : snap.leaves) {
    ordered_json l;
    l["prefix"] = leaf.prefix.to_string();
    l["status"] = std::string(status_name(leaf.status));
    switch (leaf.status) {
      case NodeStatus::halted:
        l["output"] = leaf.output.to_string();
        l["steps"] = leaf.steps;
        break;
      case NodeStatus::diverged:
        l["steps"] = leaf.steps;
        l["certificate"] = detail::certificate_json(*leaf.certificate);
        break;
      case NodeStatus::unknown: l["budget"] = leaf.budget; break;
      default: break;
    }
    leaves.push_back(std::move(l));
  }
  j["leaves"] = std::move(leaves);
  return j;
}

/// Parses a snapshot document; any structural problem is a LoadError.
inline Snapshot parse_snapshot(std::string_view text) {
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    if (j.at("format").get<std::string>() != "omegalab.snapshot") throw LoadError("not an omegalab snapshot");
    Snapshot snap;
    snap.isa_version = j.at("isa_version").get<std::string>();
    if (snap.isa_version != kIsaVersion)
      throw LoadError("snapshot is for machine \"" + snap.isa_version + "\", this build runs \"" +
                      std::string(kIsaVersion) + "\"");
    snap.depth = j.at("depth").get<std::size_t>();
    snap.step_budget = j.at("budgets").at("step_budget").get<std::uint64_t>();
    const auto& l = j.at("ledger");
    snap.ledger = {Dyadic::parse(l.at("halted").get<std::string>()), Dyadic::parse(l.at("dead").get<std::string>()),
                   Dyadic::parse(l.at("frontier").get<std::string>())};
    for (const auto& jl : j.at("leaves")) {
      LeafInfo leaf;
      leaf.prefix = BitString::parse(jl.at("prefix").get<std::string>());
      leaf.status = detail::status_from_name(jl.at("status").get<std::string>());
      switch (leaf.status) {
        case NodeStatus::halted:
          leaf.output = BitString::parse(jl.at("output").get<std::string>());
          leaf.steps = jl.at("steps").get<std::uint64_t>();
          break;
        case NodeStatus::diverged:
          leaf.steps = jl.at("steps").get<std::uint64_t>();
          leaf.certificate = detail::certificate_from_json(jl.at("certificate"));
          break;
        case NodeStatus::unknown: leaf.budget = jl.at("budget").get<std::uint64_t>(); break;
        default: break;
      }
      snap.leaves.push_back(std::move(leaf));
    }
    return snap;
  } catch (const LoadError&) {
    throw;
  } catch (const std::exception& e) {
    throw LoadError(std::string("corrupt snapshot: ") + e.what());
  }
}

inline std::string snapshot_text(const Explorer& ex) { return to_json(take_snapshot(ex)).dump(1) + "\n"; }

inline Explorer restore_text(std::string_view text) { return restore(parse_snapshot(text)); }

/// Writes to a sibling temporary file and renames it into place.
inline void save_snapshot(const Explorer& ex, const std::filesystem::path& path) {
  const std::string text = snapshot_text(ex);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw LoadError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw LoadError("cannot move snapshot into place: " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Explorer load_snapshot(const std::filesystem::path& path) { return restore_text(read_file(path)); }

}  // namespace omegalab
