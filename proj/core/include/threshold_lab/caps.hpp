#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace threshold_lab {

// Enumeration and search limits. Defaults target desk-scale exact work.
struct Caps {
  int exact_ground = 22;                 // 2^n outcome enumeration
  int dp_members = 20;                   // cover DP over 2^|minimal members|
  int bb_members = 64;                   // branch-and-bound, coverage fits a word
  std::size_t candidate_pool = 1u << 16; // cover candidates after pruning
  std::uint64_t bb_nodes = 5'000'000;

  // Comma-separated key=value overrides, e.g. "exact_ground=24,dp_members=18".
  static Caps parse(std::string_view spec, const Caps& base);
  static Caps parse(std::string_view spec);
  // Reads THRESHOLD_LAB_CAPS when set.
  static Caps from_env(const Caps& base);
  static Caps from_env();

  std::string describe() const;
};

}  // namespace threshold_lab
