#include "grasp/trace.hpp"

#include <ostream>

namespace grasp {

TraceLine::TraceLine(SimTime t) : text_("t=" + format_real(t)) {}

TraceLine& TraceLine::word(std::string_view w) {
  text_.push_back(' ');
  text_.append(w);
  return *this;
}

TraceLine& TraceLine::kv(std::string_view key, std::string_view value) {
  text_.push_back(' ');
  text_.append(key);
  text_.push_back('=');
  text_.append(value);
  return *this;
}

TraceLine& TraceLine::kv(std::string_view key, double value) {
  return kv(key, std::string_view(format_real(value)));
}

void Trace::add(const TraceLine& line) {
  if (enabled_) lines_.push_back(line.str());
}

void Trace::write(std::ostream& out) const {
  for (const auto& l : lines_) out << l << '\n';
}

std::string_view trace_field(std::string_view line, std::string_view key) {
  std::size_t pos = 0;
  while (pos < line.size()) {
    auto end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    auto token = line.substr(pos, end - pos);
    if (token.size() > key.size() && token.substr(0, key.size()) == key &&
        token[key.size()] == '=') {
      return token.substr(key.size() + 1);
    }
    pos = end + 1;
  }
  return {};
}

}  // namespace grasp
