#include "grasp/flow_table.hpp"

#include <algorithm>

#include "grasp/error.hpp"

namespace grasp::sim {

std::optional<std::uint64_t> FlowTable::install(const FlowMod& mod, SimTime now,
                                                std::uint64_t rule_id) {
  FlowRule rule{rule_id, mod.match, mod.actions, mod.priority, mod.idle_timeout, now, now};
  auto same = std::find_if(entries_.begin(), entries_.end(), [&](const FlowRule& r) {
    return r.priority == mod.priority && r.match == mod.match;
  });
  if (same != entries_.end()) {
    const auto old = same->id;
    *same = std::move(rule);
    return old;
  }
  auto pos = std::find_if(entries_.begin(), entries_.end(),
                          [&](const FlowRule& r) { return r.priority < mod.priority; });
  entries_.insert(pos, std::move(rule));
  return std::nullopt;
}

std::vector<FlowRule> FlowTable::expire(SimTime now) {
  std::vector<FlowRule> gone;
  auto keep = std::stable_partition(entries_.begin(), entries_.end(),
                                    [&](const FlowRule& r) { return !r.expired_at(now); });
  std::move(keep, entries_.end(), std::back_inserter(gone));
  entries_.erase(keep, entries_.end());
  return gone;
}

const FlowRule* FlowTable::lookup(const PacketHeader& header, SimTime now,
                                  std::vector<FlowRule>* expired) {
  auto gone = expire(now);
  if (expired != nullptr) {
    std::move(gone.begin(), gone.end(), std::back_inserter(*expired));
  }
  for (auto& r : entries_) {
    if (r.match.matches(header)) {
      r.last_hit = now;
      return &r;
    }
  }
  return nullptr;
}

std::string FlowTable::dump() const {
  std::string out;
  for (const auto& r : entries_) {
    out += "rule=" + std::to_string(r.id) + " prio=" + std::to_string(r.priority) +
           " match=" + to_string(r.match) + " timeout=" + format_real(r.idle_timeout) +
           " last_hit=" + format_real(r.last_hit) + " actions=";
    for (std::size_t i = 0; i < r.actions.size(); ++i) {
      if (i > 0) out.push_back(',');
      out += to_string(r.actions[i]);
    }
    out.push_back('\n');
  }
  return out;
}

const FlowRule& flow_lookup(FlowTable& table, const PacketHeader& header, SimTime now) {
  const auto* rule = table.lookup(header, now);
  if (rule == nullptr) throw Error("flow table has no table-miss rule");
  return *rule;
}

}  // namespace grasp::sim
