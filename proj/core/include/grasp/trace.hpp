#pragma once

// Line-oriented event trace: `t=<sim_time> key=value ...`, one line per handled event.

#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "grasp/model.hpp"

namespace grasp {

class TraceLine {
 public:
  explicit TraceLine(SimTime t);

  /// Bare word, e.g. the data-plane verb in `t=3 deliver flow=1 dc=dc0`.
  TraceLine& word(std::string_view w);
  TraceLine& kv(std::string_view key, std::string_view value);
  TraceLine& kv(std::string_view key, const std::string& value) {
    return kv(key, std::string_view(value));
  }
  TraceLine& kv(std::string_view key, const char* value) { return kv(key, std::string_view(value)); }
  TraceLine& kv(std::string_view key, double value);
  template <std::integral I>
  TraceLine& kv(std::string_view key, I value) {
    return kv(key, std::string_view(std::to_string(value)));
  }

  const std::string& str() const noexcept { return text_; }

 private:
  std::string text_;
};

/// Append-only trace sink. A disabled trace swallows lines.
class Trace {
 public:
  explicit Trace(bool enabled = true) : enabled_(enabled) {}

  bool enabled() const noexcept { return enabled_; }
  void add(const TraceLine& line);
  const std::vector<std::string>& lines() const noexcept { return lines_; }
  void write(std::ostream& out) const;

 private:
  bool enabled_;
  std::vector<std::string> lines_;
};

/// Value of `key=` in a trace line, or empty if absent.
std::string_view trace_field(std::string_view line, std::string_view key);

}  // namespace grasp
