#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grasp/flow.hpp"

namespace grasp::sim {

/// One installed forwarding entry.
struct FlowRule {
  std::uint64_t id = 0;
  FlowMatch match;
  std::vector<Action> actions;
  int priority = kTableMissPriority;
  double idle_timeout = 0.0;  // 0: permanent
  SimTime installed_at = 0.0;
  SimTime last_hit = 0.0;

  SimTime deadline() const { return last_hit + idle_timeout; }
  bool expired_at(SimTime now) const { return idle_timeout > 0.0 && now >= deadline(); }
};

/// A switch forwarding table. Entries are kept in descending priority; among equal
/// priorities the earlier install wins a lookup.
class FlowTable {
 public:
  /// Adds the rule, replacing any entry with the same match and priority; returns the
  /// id of the replaced entry.
  std::optional<std::uint64_t> install(const FlowMod& mod, SimTime now, std::uint64_t rule_id);

  /// Removes and returns every entry idle for at least its timeout at `now`.
  std::vector<FlowRule> expire(SimTime now);

  /// Highest-priority entry matching `header` after expiring stale ones; refreshes its
  /// last_hit. Null when nothing matches (no table-miss installed yet).
  const FlowRule* lookup(const PacketHeader& header, SimTime now,
                         std::vector<FlowRule>* expired = nullptr);

  const std::vector<FlowRule>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// One line per entry in table order.
  std::string dump() const;

 private:
  std::vector<FlowRule> entries_;
};

/// Lookup against a table that holds a table-miss rule, so a match always exists.
/// Throws Error if the precondition is violated.
const FlowRule& flow_lookup(FlowTable& table, const PacketHeader& header, SimTime now);

}  // namespace grasp::sim
