#include "report.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace threshold_lab::cli {

Json set_json(SubsetMask s) {
  Json out = Json::array();
  for (int e : s.elements()) out.push_back(e);
  return out;
}

Json family_json(const SetFamily& family) {
  Json out = Json::array();
  for (SubsetMask s : family) out.push_back(set_json(s));
  return out;
}

std::string decimal_down(const Rational& x, int digits) { return to_decimal_string(x, digits); }

std::string decimal_up(const Rational& x, int digits) {
  // ceil(x) = -floor(-x) at the requested resolution.
  std::string s = to_decimal_string(-x, digits);
  if (!s.empty() && s.front() == '-') return s.substr(1);
  if (std::any_of(s.begin(), s.end(), [](char c) { return c >= '1' && c <= '9'; })) return "-" + s;
  return s;
}

namespace {

void flatten(const Json& value, const std::string& key, std::vector<std::pair<std::string, std::string>>& cells) {
  if (value.is_object()) {
    for (const auto& [k, v] : value.items()) flatten(v, key.empty() ? k : key + "." + k, cells);
    return;
  }
  if (value.is_array() && !value.empty() &&
      std::all_of(value.begin(), value.end(), [](const Json& v) { return v.is_object(); })) {
    for (std::size_t i = 0; i < value.size(); ++i) flatten(value[i], key + "." + std::to_string(i), cells);
    return;
  }
  cells.emplace_back(key, value.is_string() ? value.get<std::string>() : value.dump());
}

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const Json& report) {
  std::vector<std::pair<std::string, std::string>> cells;
  flatten(report, "", cells);
  std::string header, row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    header += (i ? "," : "") + quote(cells[i].first);
    row += (i ? "," : "") + quote(cells[i].second);
  }
  return header + "\n" + row + "\n";
}

}  // namespace threshold_lab::cli
