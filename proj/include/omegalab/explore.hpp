#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "omegalab/bit_string.hpp"
#include "omegalab/dyadic.hpp"
#include "omegalab/errors.hpp"
#include "omegalab/machine.hpp"

namespace omegalab {

/// Exact partition of program-space measure 1.
struct MassLedger {
  Dyadic halted;
  Dyadic dead;
  Dyadic frontier = Dyadic::one();

  Dyadic total() const { return halted + dead + frontier; }
  friend bool operator==(const MassLedger&, const MassLedger&) = default;
};

enum class NodeStatus : std::uint8_t {
  pending,   // demands another bit; children not materialized yet
  internal,  // demanded another bit; both children exist
  halted,
  diverged,
  unknown,   // step budget ran out first
};

inline std::string_view status_name(NodeStatus s) {
  switch (s) {
    case NodeStatus::pending: return "pending";
    case NodeStatus::internal: return "internal";
    case NodeStatus::halted: return "halted";
    case NodeStatus::diverged: return "diverged";
    case NodeStatus::unknown: return "unknown";
  }
  return "?";
}

/// What run() would say about one candidate string, read off the tree.
enum class CandidateStatus {
  halts,
  diverges,        // the candidate or one of its prefixes is certified divergent
  proper_prefix,   // the machine wants more bits than the candidate has
  extension,       // a proper prefix of the candidate already halts
  unresolved,
};

struct HaltRecord {
  BitString program;
  BitString output;
  std::uint64_t steps = 0;
};

struct DivergeRecord {
  BitString program;
  Certificate certificate;
  std::uint64_t steps = 0;
};

/// Flat description of one leaf; the unit of snapshots and of canonical
/// (length-lex) reporting.
struct LeafInfo {
  BitString prefix;
  NodeStatus status = NodeStatus::pending;
  BitString output;                       // halted
  std::uint64_t steps = 0;                // halted, diverged
  std::optional<Certificate> certificate; // diverged
  std::uint64_t budget = 0;               // unknown: budget it was run with
};

struct ExpandOptions {
  unsigned workers = 1;
  /// Stop after materializing this many new nodes (0 = unlimited). Work
  /// already done is kept; the tree stays consistent.
  std::size_t node_limit = 0;
};

struct ExpandReport {
  MassLedger ledger;
  bool complete = true;
  std::size_t new_nodes = 0;
};

/// Dovetailed enumeration of every program prefix as a binary tree.
///
/// The tree's content is a function of the largest depth and the largest
/// step budget ever requested: every prefix of length <= depth is classified
/// by running it with the current budget. Node storage order is an
/// implementation detail; everything observable is reported in length-lex
/// order.
class Explorer {
public:
  Explorer() { nodes_.push_back(Node{-1, -1, -1, 0, NodeStatus::pending}); }

  std::size_t depth() const noexcept { return depth_; }
  std::uint64_t budget() const noexcept { return budget_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  ExpandReport expand(std::size_t depth_limit, std::uint64_t step_budget,
                      const ExpandOptions& options = {}) {
    if (depth_limit < 1) throw DomainError("depth_limit must be at least 1");
    if (step_budget < 1) throw DomainError("step_budget must be at least 1");
    const std::size_t target_depth = std::max(depth_, depth_limit);
    const std::uint64_t target_budget = std::max(budget_, step_budget);

    ExpandReport report;
    // Fixed split depth so node layout never depends on the worker count.
    const std::size_t split = std::min<std::size_t>(target_depth, kSplitDepth);
    if (split < target_depth) {
      if (!expand_pass(split, target_budget, options, report)) {
        report.ledger = ledger();
        return report;
      }
    }
    if (expand_pass(target_depth, target_budget, options, report)) {
      depth_ = target_depth;
      budget_ = target_budget;
    }
    report.ledger = ledger();
    return report;
  }

  MassLedger ledger() const {
    std::vector<std::uint64_t> halted, dead, frontier;
    for (const Node& n : nodes_) {
      std::vector<std::uint64_t>* bucket = nullptr;
      switch (n.status) {
        case NodeStatus::halted: bucket = &halted; break;
        case NodeStatus::diverged: bucket = &dead; break;
        case NodeStatus::pending:
        case NodeStatus::unknown: bucket = &frontier; break;
        case NodeStatus::internal: break;
      }
      if (!bucket) continue;
      if (bucket->size() <= n.depth) bucket->resize(n.depth + 1, 0);
      ++(*bucket)[n.depth];
    }
    return {mass(halted), mass(dead), mass(frontier)};
  }

  struct LeafCounts {
    std::size_t halted = 0, diverged = 0, unknown = 0, pending = 0;
  };

  LeafCounts leaf_counts() const {
    LeafCounts c;
    for (const Node& n : nodes_) {
      switch (n.status) {
        case NodeStatus::halted: ++c.halted; break;
        case NodeStatus::diverged: ++c.diverged; break;
        case NodeStatus::unknown: ++c.unknown; break;
        case NodeStatus::pending: ++c.pending; break;
        case NodeStatus::internal: break;
      }
    }
    return c;
  }

  /// Every halted program of length <= max_len, length-lex.
  std::vector<HaltRecord> halted_set(std::size_t max_len) const {
    std::vector<HaltRecord> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      if (n.status == NodeStatus::halted && n.depth <= max_len) {
        const auto& rec = halts_[static_cast<std::size_t>(n.record)];
        out.push_back({prefix_of(static_cast<std::int32_t>(i)), rec.output, rec.steps});
      }
    }
    std::sort(out.begin(), out.end(),
              [](const HaltRecord& a, const HaltRecord& b) { return length_lex_less(a.program, b.program); });
    return out;
  }

  /// Every certified-divergent program of length <= max_len, length-lex.
  std::vector<DivergeRecord> diverged_set(std::size_t max_len) const {
    std::vector<DivergeRecord> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      if (n.status == NodeStatus::diverged && n.depth <= max_len) {
        const auto& rec = deaths_[static_cast<std::size_t>(n.record)];
        out.push_back({prefix_of(static_cast<std::int32_t>(i)), rec.certificate, rec.steps});
      }
    }
    std::sort(out.begin(), out.end(), [](const DivergeRecord& a, const DivergeRecord& b) {
      return length_lex_less(a.program, b.program);
    });
    return out;
  }

  /// True iff every candidate of length <= max_len is decided: no
  /// budget-limited node at depth <= max_len, and no unexpanded node above it.
  bool resolved_below(std::size_t max_len) const {
    for (const Node& n : nodes_) {
      if (n.status == NodeStatus::unknown && n.depth <= max_len) return false;
      if (n.status == NodeStatus::pending && n.depth < max_len) return false;
    }
    return true;
  }

  CandidateStatus classify(const BitString& candidate) const {
    std::int32_t at = 0;
    for (std::size_t i = 0;; ++i) {
      const Node& n = nodes_[static_cast<std::size_t>(at)];
      const bool at_end = i == candidate.size();
      switch (n.status) {
        case NodeStatus::halted: return at_end ? CandidateStatus::halts : CandidateStatus::extension;
        case NodeStatus::diverged: return CandidateStatus::diverges;
        case NodeStatus::unknown: return CandidateStatus::unresolved;
        case NodeStatus::pending:
          return at_end ? CandidateStatus::proper_prefix : CandidateStatus::unresolved;
        case NodeStatus::internal:
          if (at_end) return CandidateStatus::proper_prefix;
          at = n.first_child + (candidate[i] ? 1 : 0);
          break;
      }
    }
  }

  /// All leaves, length-lex.
  std::vector<LeafInfo> leaves() const {
    std::vector<LeafInfo> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      if (n.status == NodeStatus::internal) continue;
      LeafInfo leaf;
      leaf.prefix = prefix_of(static_cast<std::int32_t>(i));
      leaf.status = n.status;
      if (n.status == NodeStatus::halted) {
        const auto& rec = halts_[static_cast<std::size_t>(n.record)];
        leaf.output = rec.output;
        leaf.steps = rec.steps;
      } else if (n.status == NodeStatus::diverged) {
        const auto& rec = deaths_[static_cast<std::size_t>(n.record)];
        leaf.certificate = rec.certificate;
        leaf.steps = rec.steps;
      } else if (n.status == NodeStatus::unknown) {
        leaf.budget = unknown_budgets_[static_cast<std::size_t>(n.record)];
      }
      out.push_back(std::move(leaf));
    }
    std::sort(out.begin(), out.end(),
              [](const LeafInfo& a, const LeafInfo& b) { return length_lex_less(a.prefix, b.prefix); });
    return out;
  }

  /// Rebuilds a tree from its leaves. Throws LoadError unless the leaves
  /// partition program space exactly.
  static Explorer from_leaves(const std::vector<LeafInfo>& leaves, std::size_t depth,
                              std::uint64_t budget) {
    Explorer ex;
    ex.nodes_.clear();
    ex.nodes_.push_back(Node{-1, -1, -1, 0, NodeStatus::internal});
    std::vector<bool> placed{false};
    for (const LeafInfo& leaf : leaves) {
      if (leaf.status == NodeStatus::internal) throw LoadError("internal node listed as a leaf");
      std::int32_t at = 0;
      for (std::size_t i = 0; i < leaf.prefix.size(); ++i) {
        Node& n = ex.nodes_[static_cast<std::size_t>(at)];
        if (placed[static_cast<std::size_t>(at)])
          throw LoadError("leaf " + leaf.prefix.to_string() + " extends another leaf");
        if (n.first_child < 0) {
          const auto child = static_cast<std::int32_t>(ex.nodes_.size());
          ex.nodes_[static_cast<std::size_t>(at)].first_child = child;
          const auto d = static_cast<std::uint16_t>(i + 1);
          ex.nodes_.push_back(Node{at, -1, -1, d, NodeStatus::internal});
          ex.nodes_.push_back(Node{at, -1, -1, d, NodeStatus::internal});
          placed.push_back(false);
          placed.push_back(false);
        }
        at = ex.nodes_[static_cast<std::size_t>(at)].first_child + (leaf.prefix[i] ? 1 : 0);
      }
      Node& n = ex.nodes_[static_cast<std::size_t>(at)];
      if (placed[static_cast<std::size_t>(at)] || n.first_child >= 0)
        throw LoadError("leaf " + leaf.prefix.to_string() + " collides with another leaf");
      placed[static_cast<std::size_t>(at)] = true;
      n.status = leaf.status;
      switch (leaf.status) {
        case NodeStatus::halted:
          n.record = static_cast<std::int32_t>(ex.halts_.size());
          ex.halts_.push_back({leaf.output, leaf.steps});
          break;
        case NodeStatus::diverged:
          if (!leaf.certificate) throw LoadError("diverged leaf without certificate");
          n.record = static_cast<std::int32_t>(ex.deaths_.size());
          ex.deaths_.push_back({*leaf.certificate, leaf.steps});
          break;
        case NodeStatus::unknown:
          n.record = static_cast<std::int32_t>(ex.unknown_budgets_.size());
          ex.unknown_budgets_.push_back(leaf.budget);
          break;
        default: break;
      }
    }
    for (std::size_t i = 0; i < ex.nodes_.size(); ++i)
      if (ex.nodes_[i].first_child < 0 && !placed[i])
        throw LoadError("leaves do not cover program space");
    ex.depth_ = depth;
    ex.budget_ = budget;
    return ex;
  }

private:
  static constexpr std::size_t kSplitDepth = 8;

  struct Node {
    std::int32_t parent;
    std::int32_t first_child;  // children at first_child and first_child + 1
    std::int32_t record;       // index into halts_ / deaths_ / unknown_budgets_
    std::uint16_t depth;
    NodeStatus status;
  };

  struct HaltData {
    BitString output;
    std::uint64_t steps;
  };

  struct DeathData {
    Certificate certificate;
    std::uint64_t steps;
  };

  /// Subtree grown by one work item; parent == -1 means the item's root.
  struct LocalTree {
    struct LocalNode {
      std::int32_t parent;
      std::int32_t first_child;
      std::uint16_t depth;
      NodeStatus status;
      std::int32_t payload = -1;
    };
    NodeStatus root_status = NodeStatus::pending;
    std::int32_t root_first_child = -1;
    std::int32_t root_payload = -1;
    std::vector<LocalNode> nodes;
    std::vector<HaltData> halts;
    std::vector<DeathData> deaths;
    std::vector<std::uint64_t> unknowns;
  };

  static Dyadic mass(const std::vector<std::uint64_t>& per_depth) {
    if (per_depth.empty()) return Dyadic::zero();
    const std::size_t deepest = per_depth.size() - 1;
    Natural num = 0;
    for (std::size_t d = 0; d <= deepest; ++d)
      if (per_depth[d] != 0) num += Natural(per_depth[d]) << static_cast<unsigned>(deepest - d);
    return {std::move(num), deepest};
  }

  BitString prefix_of(std::int32_t index) const {
    const std::size_t depth = nodes_[static_cast<std::size_t>(index)].depth;
    std::vector<bool> bits(depth);
    std::size_t k = depth;
    while (index > 0) {
      const Node& n = nodes_[static_cast<std::size_t>(index)];
      bits[--k] = index != nodes_[static_cast<std::size_t>(n.parent)].first_child;
      index = n.parent;
    }
    BitString out;
    out.reserve(depth);
    for (bool b : bits) out.push_back(b);
    return out;
  }

  /// Classifies every pending node above `target_depth` and reruns unknown
  /// nodes whose budget is below `target_budget`. Returns false if the node
  /// limit stopped it early.
  bool expand_pass(std::size_t target_depth, std::uint64_t target_budget, const ExpandOptions& options,
                   ExpandReport& report) {
    std::vector<std::int32_t> work;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      if ((n.status == NodeStatus::pending && n.depth < target_depth) ||
          (n.status == NodeStatus::unknown &&
           unknown_budgets_[static_cast<std::size_t>(n.record)] < target_budget))
        work.push_back(static_cast<std::int32_t>(i));
    }
    if (work.empty()) return true;

    std::vector<BitString> prefixes;
    prefixes.reserve(work.size());
    for (std::int32_t w : work) prefixes.push_back(prefix_of(w));

    std::vector<LocalTree> results(work.size());
    std::vector<std::uint8_t> finished(work.size(), 0);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> grown{0};
    std::atomic<bool> stop{false};
    auto worker = [&] {
      while (!stop.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1);
        if (i >= work.size()) return;
        results[i] = grow_item(prefixes[i], target_depth, target_budget);
        finished[i] = 1;
        const std::size_t total = grown.fetch_add(results[i].nodes.size()) + results[i].nodes.size();
        if (options.node_limit != 0 && total >= options.node_limit) stop.store(true);
      }
    };
    const unsigned workers =
        std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(work.size())));
    if (workers == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    }

    // Merge in work order so the layout is independent of scheduling; after
    // an early stop only the completed prefix of the work list is committed.
    bool complete = true;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (!finished[i]) {
        complete = false;
        break;
      }
      report.new_nodes += results[i].nodes.size();
      merge(work[i], std::move(results[i]));
    }
    report.complete = report.complete && complete;
    return complete;
  }

  void merge(std::int32_t root, LocalTree&& local) {
    const auto base = static_cast<std::int32_t>(nodes_.size());
    const auto halt_base = static_cast<std::int32_t>(halts_.size());
    const auto death_base = static_cast<std::int32_t>(deaths_.size());
    const auto unknown_base = static_cast<std::int32_t>(unknown_budgets_.size());
    auto payload = [&](NodeStatus s, std::int32_t p) -> std::int32_t {
      switch (s) {
        case NodeStatus::halted: return halt_base + p;
        case NodeStatus::diverged: return death_base + p;
        case NodeStatus::unknown: return unknown_base + p;
        default: return -1;
      }
    };

    Node& r = nodes_[static_cast<std::size_t>(root)];
    r.status = local.root_status;
    r.first_child = local.root_first_child < 0 ? -1 : base + local.root_first_child;
    r.record = payload(local.root_status, local.root_payload);

    for (const auto& ln : local.nodes)
      nodes_.push_back(Node{ln.parent < 0 ? root : base + ln.parent,
                            ln.first_child < 0 ? -1 : base + ln.first_child, payload(ln.status, ln.payload),
                            ln.depth, ln.status});
    for (auto& h : local.halts) halts_.push_back(std::move(h));
    for (auto& d : local.deaths) deaths_.push_back(std::move(d));
    for (auto b : local.unknowns) unknown_budgets_.push_back(b);
  }

  /// Replays `prefix` from scratch, then grows its subtree depth-first.
  static LocalTree grow_item(const BitString& prefix, std::size_t target_depth, std::uint64_t budget) {
    LocalTree local;
    Execution ex;
    std::size_t fed = 0;
    Progress p;
    for (;;) {
      p = ex.advance(budget);
      if (p != Progress::need_bit || fed == prefix.size()) break;
      ex.feed(prefix[fed++]);
    }
    if (fed != prefix.size() && p != Progress::need_bit)
      throw Error("replay of " + prefix.to_string() + " did not reach its node");

    auto [status, payload] = settle(local, ex, p, budget);
    local.root_status = status;
    local.root_payload = payload;
    if (status == NodeStatus::pending && prefix.size() < target_depth) {
      local.root_status = NodeStatus::internal;
      local.root_first_child = grow_children(local, -1, std::move(ex), prefix.size(), target_depth, budget);
    }
    return local;
  }

  /// Records a classified execution; returns (status, payload index).
  static std::pair<NodeStatus, std::int32_t> settle(LocalTree& local, const Execution& ex, Progress p,
                                                    std::uint64_t budget) {
    switch (p) {
      case Progress::halted:
        local.halts.push_back({ex.state().out, ex.state().steps});
        return {NodeStatus::halted, static_cast<std::int32_t>(local.halts.size() - 1)};
      case Progress::diverged:
        local.deaths.push_back({*ex.certificate(), ex.state().steps});
        return {NodeStatus::diverged, static_cast<std::int32_t>(local.deaths.size() - 1)};
      case Progress::unknown:
        local.unknowns.push_back(budget);
        return {NodeStatus::unknown, static_cast<std::int32_t>(local.unknowns.size() - 1)};
      case Progress::need_bit: break;
    }
    return {NodeStatus::pending, -1};
  }

  static std::int32_t grow_children(LocalTree& local, std::int32_t parent, Execution&& at_demand,
                                    std::size_t depth, std::size_t target_depth, std::uint64_t budget) {
    const auto first = static_cast<std::int32_t>(local.nodes.size());
    const auto child_depth = static_cast<std::uint16_t>(depth + 1);
    local.nodes.push_back({parent, -1, child_depth, NodeStatus::pending});
    local.nodes.push_back({parent, -1, child_depth, NodeStatus::pending});
    for (int bit = 0; bit < 2; ++bit) {
      Execution ex = bit == 0 ? Execution(at_demand) : std::move(at_demand);
      ex.feed(bit == 1);
      const Progress p = ex.advance(budget);
      auto [status, payload] = settle(local, ex, p, budget);
      const auto self = first + bit;
      local.nodes[static_cast<std::size_t>(self)].status = status;
      local.nodes[static_cast<std::size_t>(self)].payload = payload;
      if (status == NodeStatus::pending && child_depth < target_depth) {
        local.nodes[static_cast<std::size_t>(self)].status = NodeStatus::internal;
        const auto fc = grow_children(local, self, std::move(ex), child_depth, target_depth, budget);
        local.nodes[static_cast<std::size_t>(self)].first_child = fc;
      }
    }
    return first;
  }

  std::vector<Node> nodes_;
  std::vector<HaltData> halts_;
  std::vector<DeathData> deaths_;
  std::vector<std::uint64_t> unknown_budgets_;
  std::size_t depth_ = 0;
  std::uint64_t budget_ = 0;
};

}  // namespace omegalab
