#include "threshold_lab/family_io.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "threshold_lab/errors.hpp"

namespace threshold_lab {
namespace {

using nlohmann::json;

FamilyFile from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("family file: top level must be a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw ValidationError("family file: missing integer key \"n\"");
  }
  const auto n64 = doc["n"].get<std::int64_t>();
  if (n64 < 1 || n64 > kMaxGroundSize) {
    throw ValidationError("family file: n = " + std::to_string(n64) + " outside [1, 63]");
  }
  const int n = static_cast<int>(n64);

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const auto& l = doc["labels"];
    if (!l.is_array()) throw ValidationError("family file: \"labels\" must be an array of strings");
    for (const auto& item : l) {
      if (!item.is_string()) throw ValidationError("family file: \"labels\" must be an array of strings");
      labels.push_back(item.get<std::string>());
    }
  }
  GroundSet ground(n, std::move(labels));

  if (!doc.contains("sets") || !doc["sets"].is_array()) {
    throw ValidationError("family file: missing array key \"sets\"");
  }
  std::vector<SubsetMask> members;
  for (const auto& set : doc["sets"]) {
    if (!set.is_array()) throw ValidationError("family file: each entry of \"sets\" must be an array");
    SubsetMask s;
    for (const auto& e : set) {
      if (!e.is_number_integer()) throw ValidationError("family file: element indices must be integers");
      const auto idx = e.get<std::int64_t>();
      if (idx < 0 || idx >= n) {
        throw ValidationError("family file: element " + std::to_string(idx) + " out of range for n = " +
                              std::to_string(n));
      }
      s = s.with(static_cast<int>(idx));
    }
    members.push_back(s);
  }

  FamilyFile out{SetFamily(std::move(ground), std::move(members)), std::nullopt};
  if (doc.contains("q")) {
    const auto& q = doc["q"];
    if (!q.is_array() || static_cast<int>(q.size()) != n) {
      throw ValidationError("family file: \"q\" must be an array of n numbers");
    }
    std::vector<double> values;
    for (const auto& v : q) {
      if (!v.is_number()) throw ValidationError("family file: \"q\" entries must be numbers");
      double x = v.get<double>();
      if (!(x > 0.0 && x < 1.0)) throw ValidationError("family file: \"q\" entries must lie in (0,1)");
      values.push_back(x);
    }
    out.q = std::move(values);
  }
  return out;
}

}  // namespace

FamilyFile parse_family(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("family file: malformed JSON: ") + e.what());
  }
  return from_json(doc);
}

FamilyFile parse_family(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_family(in);
}

FamilyFile read_family_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open family file " + path.string());
  return parse_family(in);
}

std::string serialize_family(const FamilyFile& file) {
  const SetFamily& f = file.family;
  json doc;
  doc["n"] = f.ground_size();
  json sets = json::array();
  for (SubsetMask s : f) sets.push_back(s.elements());
  doc["sets"] = std::move(sets);
  if (f.ground().has_labels()) doc["labels"] = f.ground().labels();
  if (file.q) doc["q"] = *file.q;
  return doc.dump();
}

std::string serialize_family(const SetFamily& family) {
  return serialize_family(FamilyFile{family, std::nullopt});
}

}  // namespace threshold_lab
