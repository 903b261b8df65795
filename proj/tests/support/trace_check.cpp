#include "trace_check.hpp"

#include <sstream>

namespace grasp::testing {

std::optional<std::string> ParsedLine::get(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) return std::nullopt;
  return it->second;
}

ParsedLine parse_trace_line(const std::string& line) {
  ParsedLine out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      if (out.verb.empty()) out.verb = tok;
      continue;
    }
    out.fields[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  if (auto t = out.get("t")) out.t = std::stod(*t);
  if (auto ev = out.get("ev")) out.verb = *ev;
  return out;
}

TraceSummary summarize(const std::vector<std::string>& lines) {
  TraceSummary s;
  for (const auto& raw : lines) {
    const auto p = parse_trace_line(raw);
    if (p.verb == "packet_in") {
      ++s.packet_ins;
      ++s.packet_ins_by_kind[p.get("kind").value_or("?")];
    } else if (p.verb == "open") {
      s.opened_flows.insert(std::stoull(*p.get("flow")));
    } else if (p.verb == "deliver" && p.get("seq") == "0") {
      const auto flow = std::stoull(*p.get("flow"));
      s.delivered_flows.insert(flow);
      s.delivered_to[flow] = *p.get("dc");
    } else if (p.verb == "drop" && p.get("flow")) {
      s.dropped_flows.insert(std::stoull(*p.get("flow")));
    } else if (p.verb == "install") {
      ++s.installs;
    } else if (p.verb == "expire") {
      ++s.expirations;
    }
  }
  return s;
}

std::vector<std::string> idle_timeout_violations(const std::vector<std::string>& lines,
                                                 double horizon) {
  struct Live {
    double timeout;
    double last;
  };
  std::map<std::pair<std::string, std::string>, Live> live;
  std::vector<std::string> bad;
  for (const auto& raw : lines) {
    const auto p = parse_trace_line(raw);
    if (p.verb != "install" && p.verb != "hit" && p.verb != "expire") continue;
    const auto key = std::make_pair(p.get("sw").value_or("?"), p.get("rule").value_or("?"));
    if (p.verb == "install") {
      if (auto old = p.get("replaces")) live.erase({key.first, *old});
      live[key] = Live{std::stod(p.get("timeout").value_or("0")), p.t};
      continue;
    }
    auto it = live.find(key);
    if (it == live.end()) {
      bad.push_back("no such rule: " + raw);
      continue;
    }
    auto& rule = it->second;
    if (p.verb == "hit") {
      if (rule.timeout > 0 && p.t >= rule.last + rule.timeout) bad.push_back("hit after idle: " + raw);
      rule.last = p.t;
    } else {
      if (std::stod(p.get("last_hit").value_or("-1")) != rule.last) {
        bad.push_back("last_hit disagrees with hits: " + raw);
      }
      if (p.t != rule.last + rule.timeout) bad.push_back("expiry not at deadline: " + raw);
      live.erase(it);
    }
  }
  for (const auto& [key, rule] : live) {
    if (rule.timeout > 0 && rule.last + rule.timeout < horizon) {
      bad.push_back("rule " + key.second + " on " + key.first + " outlived its timeout");
    }
  }
  return bad;
}

}  // namespace grasp::testing
