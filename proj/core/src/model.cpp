#include "grasp/model.hpp"

#include <charconv>
#include <cstdio>

namespace grasp {

std::string to_string(NodeId id) {
  switch (id.kind) {
    case NodeKind::Switch:
      return "s" + std::to_string(id.index);
    case NodeKind::DataCenter:
      return "dc" + std::to_string(id.index);
    case NodeKind::Client:
      return "c" + std::to_string(id.index);
  }
  return "?";
}

std::string to_string(Ipv4Addr ip) {
  const auto v = ip.value;
  return std::to_string((v >> 24) & 0xff) + "." + std::to_string((v >> 16) & 0xff) + "." +
         std::to_string((v >> 8) & 0xff) + "." + std::to_string(v & 0xff);
}

std::string to_string(MacAddr mac) {
  char buf[18];
  const auto v = mac.value;
  std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x",
                static_cast<unsigned>((v >> 40) & 0xff), static_cast<unsigned>((v >> 32) & 0xff),
                static_cast<unsigned>((v >> 24) & 0xff), static_cast<unsigned>((v >> 16) & 0xff),
                static_cast<unsigned>((v >> 8) & 0xff), static_cast<unsigned>(v & 0xff));
  return buf;
}

std::optional<Ipv4Addr> parse_ipv4(std::string_view text) {
  std::uint32_t value = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
    unsigned part = 0;
    auto [next, ec] = std::from_chars(p, end, part);
    if (ec != std::errc{} || next == p || part > 255 || next - p > 3) return std::nullopt;
    value = (value << 8) | part;
    p = next;
  }
  if (p != end) return std::nullopt;
  return Ipv4Addr{value};
}

std::optional<MacAddr> parse_mac(std::string_view text) {
  if (text.size() != 17) return std::nullopt;
  std::uint64_t value = 0;
  for (int octet = 0; octet < 6; ++octet) {
    const auto pos = static_cast<std::size_t>(octet) * 3;
    if (octet > 0 && text[pos - 1] != ':') return std::nullopt;
    unsigned part = 0;
    auto [next, ec] = std::from_chars(text.data() + pos, text.data() + pos + 2, part, 16);
    if (ec != std::errc{} || next != text.data() + pos + 2) return std::nullopt;
    value = (value << 8) | part;
  }
  return MacAddr{value};
}

std::string to_hex(const Token& token) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(token.size() * 2);
  for (auto byte : token) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xf]);
  }
  return out;
}

Token TokenGenerator::next() {
  Token token{};
  for (std::size_t i = 0; i < token.size(); i += 8) {
    auto word = engine_();
    for (std::size_t b = 0; b < 8; ++b) {
      token[i + b] = static_cast<std::uint8_t>(word >> (8 * b));
    }
  }
  return token;
}

std::string format_real(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace grasp
