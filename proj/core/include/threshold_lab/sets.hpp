#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace threshold_lab {

// Largest ground set that fits one 64-bit word with a spare bit.
inline constexpr int kMaxGroundSize = 63;

/// A subset of the ground set, one bit per element.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint64_t bits) : bits_(bits) {}

  static SubsetMask of(std::initializer_list<int> elements);
  static SubsetMask of(std::span<const int> elements);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int element) const { return (bits_ >> element) & 1u; }
  constexpr bool is_subset_of(SubsetMask other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr SubsetMask operator|(SubsetMask o) const { return SubsetMask{bits_ | o.bits_}; }
  constexpr SubsetMask operator&(SubsetMask o) const { return SubsetMask{bits_ & o.bits_}; }
  constexpr SubsetMask minus(SubsetMask o) const { return SubsetMask{bits_ & ~o.bits_}; }
  constexpr SubsetMask with(int element) const { return SubsetMask{bits_ | (std::uint64_t{1} << element)}; }

  std::vector<int> elements() const;

  constexpr bool operator==(const SubsetMask&) const = default;
  constexpr auto operator<=>(const SubsetMask&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

// Canonical order used for storage and serialization: by cardinality, then by
// the numeric value of the mask.
constexpr bool canonical_less(SubsetMask a, SubsetMask b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.bits() < b.bits();
}

class GroundSet {
 public:
  explicit GroundSet(int n, std::vector<std::string> labels = {});

  int size() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_labels() const { return !labels_.empty(); }
  SubsetMask full() const { return SubsetMask{(std::uint64_t{1} << n_) - 1}; }
  bool valid(SubsetMask s) const { return s.is_subset_of(full()); }

  bool operator==(const GroundSet&) const = default;

 private:
  int n_;
  std::vector<std::string> labels_;
};

/// Deduplicated collection of subsets over a shared ground set, stored in
/// canonical order. Immutable once built.
class SetFamily {
 public:
  explicit SetFamily(GroundSet ground, std::vector<SubsetMask> members = {});

  const GroundSet& ground() const { return ground_; }
  int ground_size() const { return ground_.size(); }
  std::span<const SubsetMask> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool has_empty_member() const { return !members_.empty() && members_.front().empty(); }
  bool has_member(SubsetMask s) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  // A family over the same ground set with different members.
  SetFamily with_members(std::vector<SubsetMask> members) const;

  bool operator==(const SetFamily&) const = default;

 private:
  GroundSet ground_;
  std::vector<SubsetMask> members_;
};

/// Inclusion-minimal members. Output is an antichain with the same up-closure.
SetFamily minimal_elements(const SetFamily& family);

bool is_antichain(const SetFamily& family);

/// True iff some member of the family is a subset of s, i.e. s lies in the
/// up-closure of the family.
bool contains_member(const SetFamily& family, SubsetMask s);

struct EllBound {
  int ell = 0;
  bool empty_family = false;
};

/// Largest member cardinality. The empty family reports 0 with its flag set.
EllBound bound_ell(const SetFamily& family);

/// Every subset of the ground set with exactly `size` elements, canonical order.
std::vector<SubsetMask> subsets_of_size(int n, int size);

std::string to_string(SubsetMask s);

}  // namespace threshold_lab
