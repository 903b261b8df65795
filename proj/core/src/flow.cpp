#include "grasp/flow.hpp"

#include <algorithm>

#include "grasp/error.hpp"

namespace grasp {

namespace {

bool is_terminal(const Action& a) {
  return std::holds_alternative<Output>(a) || std::holds_alternative<SendToController>(a);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

bool FlowMod::well_formed() const {
  if (actions.empty() || !is_terminal(actions.back())) return false;
  return std::count_if(actions.begin(), actions.end(), is_terminal) == 1;
}

FlowMod table_miss_flow(NodeId sw) {
  FlowMod fm;
  fm.switch_id = sw;
  fm.actions = {SendToController{}};
  fm.priority = kTableMissPriority;
  fm.idle_timeout = 0.0;
  return fm;
}

std::string to_string(const FlowMatch& m) {
  return "src=" + (m.src_ip ? to_string(*m.src_ip) : std::string("*")) +
         ",dst=" + (m.dst_ip ? to_string(*m.dst_ip) : std::string("*"));
}

std::string to_string(const Action& a) {
  return std::visit(overloaded{
                        [](const RewriteEthDst& x) { return "set_eth_dst:" + to_string(x.mac); },
                        [](const RewriteIpDst& x) { return "set_ip_dst:" + to_string(x.ip); },
                        [](const Output& x) { return "output:" + std::to_string(x.port); },
                        [](const SendToController&) { return std::string("controller"); },
                    },
                    a);
}

std::string to_string(const FlowMod& fm) {
  std::string out = "sw=" + grasp::to_string(fm.switch_id) +
                    " prio=" + std::to_string(fm.priority) + " match=" + to_string(fm.match) +
                    " timeout=" + format_real(fm.idle_timeout) + " actions=";
  for (std::size_t i = 0; i < fm.actions.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += to_string(fm.actions[i]);
  }
  return out;
}

std::string dump_flow_mods(std::vector<FlowMod> mods) {
  std::stable_sort(mods.begin(), mods.end(), [](const FlowMod& x, const FlowMod& y) {
    if (x.switch_id != y.switch_id) return x.switch_id < y.switch_id;
    if (x.priority != y.priority) return x.priority > y.priority;
    return x.match < y.match;
  });
  std::string out;
  for (const auto& fm : mods) {
    out += to_string(fm);
    out.push_back('\n');
  }
  return out;
}

Action apply_actions(const std::vector<Action>& actions, PacketHeader& header) {
  for (const auto& a : actions) {
    if (const auto* e = std::get_if<RewriteEthDst>(&a)) {
      header.eth_dst = e->mac;
    } else if (const auto* ip = std::get_if<RewriteIpDst>(&a)) {
      header.ip_dst = ip->ip;
    } else {
      return a;
    }
  }
  throw Error("flow rule has no terminal action");
}

}  // namespace grasp
