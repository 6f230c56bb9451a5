#include "threshold_lab/caps.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include "threshold_lab/errors.hpp"

namespace threshold_lab {
namespace {

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("caps: bad value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Caps Caps::parse(std::string_view spec) { return parse(spec, Caps{}); }

Caps Caps::parse(std::string_view spec, const Caps& base) {
  Caps caps = base;
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ValidationError("caps: expected key=value, got '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "exact_ground") {
      caps.exact_ground = parse_number<int>(key, value);
      if (caps.exact_ground < 1 || caps.exact_ground > 30) throw ValidationError("caps: exact_ground must lie in [1, 30]");
    } else if (key == "dp_members") {
      caps.dp_members = parse_number<int>(key, value);
      if (caps.dp_members < 0 || caps.dp_members > 26) throw ValidationError("caps: dp_members must lie in [0, 26]");
    } else if (key == "bb_members") {
      caps.bb_members = parse_number<int>(key, value);
      if (caps.bb_members < 0 || caps.bb_members > 64) throw ValidationError("caps: bb_members must lie in [0, 64]");
    } else if (key == "candidate_pool") {
      caps.candidate_pool = parse_number<std::size_t>(key, value);
    } else if (key == "bb_nodes") {
      caps.bb_nodes = parse_number<std::uint64_t>(key, value);
    } else {
      throw ValidationError("caps: unknown key '" + std::string(key) + "'");
    }
  }
  return caps;
}

Caps Caps::from_env() { return from_env(Caps{}); }

Caps Caps::from_env(const Caps& base) {
  const char* env = std::getenv("THRESHOLD_LAB_CAPS");
  if (env == nullptr) return base;
  return parse(env, base);
}

std::string Caps::describe() const {
  std::ostringstream os;
  os << "exact_ground=" << exact_ground << ",dp_members=" << dp_members << ",bb_members=" << bb_members
     << ",candidate_pool=" << candidate_pool << ",bb_nodes=" << bb_nodes;
  return os.str();
}

}  // namespace threshold_lab
