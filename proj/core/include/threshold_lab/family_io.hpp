#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "threshold_lab/sets.hpp"

namespace threshold_lab {

// Contents of a family file: the family plus an optional per-element q.
struct FamilyFile {
  SetFamily family;
  std::optional<std::vector<double>> q;
};

// JSON object {"n": int, "sets": [[int,...],...], "labels"?: [str], "q"?: [num]}.
// Duplicate sets collapse; unused elements still count toward n.
FamilyFile parse_family(std::istream& in);
FamilyFile parse_family(std::string_view text);
FamilyFile read_family_file(const std::filesystem::path& path);

// Sets are written in canonical order (cardinality, then mask value).
std::string serialize_family(const FamilyFile& file);
std::string serialize_family(const SetFamily& family);

}  // namespace threshold_lab
