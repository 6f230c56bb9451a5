#include "threshold_lab/sets.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "threshold_lab/errors.hpp"

namespace threshold_lab {

SubsetMask SubsetMask::of(std::initializer_list<int> elements) {
  return of(std::span<const int>(elements.begin(), elements.size()));
}

SubsetMask SubsetMask::of(std::span<const int> elements) {
  std::uint64_t bits = 0;
  for (int e : elements) {
    if (e < 0 || e >= kMaxGroundSize) {
      throw ValidationError("element index " + std::to_string(e) + " outside [0, 63)");
    }
    bits |= std::uint64_t{1} << e;
  }
  return SubsetMask{bits};
}

std::vector<int> SubsetMask::elements() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

GroundSet::GroundSet(int n, std::vector<std::string> labels) : n_(n), labels_(std::move(labels)) {
  if (n < 1 || n > kMaxGroundSize) {
    throw ValidationError("ground set size " + std::to_string(n) + " outside [1, 63]");
  }
  if (!labels_.empty()) {
    if (static_cast<int>(labels_.size()) != n) {
      throw ValidationError("expected " + std::to_string(n) + " labels, got " +
                            std::to_string(labels_.size()));
    }
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw ValidationError("element labels are not distinct");
  }
}

SetFamily::SetFamily(GroundSet ground, std::vector<SubsetMask> members)
    : ground_(std::move(ground)), members_(std::move(members)) {
  for (SubsetMask s : members_) {
    if (!ground_.valid(s)) {
      throw ValidationError("member " + to_string(s) + " has an element outside the ground set of size " +
                            std::to_string(ground_.size()));
    }
  }
  std::sort(members_.begin(), members_.end(), canonical_less);
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool SetFamily::has_member(SubsetMask s) const {
  return std::binary_search(members_.begin(), members_.end(), s, canonical_less);
}

SetFamily SetFamily::with_members(std::vector<SubsetMask> members) const {
  return SetFamily(ground_, std::move(members));
}

SetFamily minimal_elements(const SetFamily& family) {
  // Members are in canonical order, so any proper subset of a member appears
  // before it.
  std::vector<SubsetMask> kept;
  for (SubsetMask s : family) {
    bool dominated = std::any_of(kept.begin(), kept.end(),
                                 [s](SubsetMask t) { return t.is_subset_of(s); });
    if (!dominated) kept.push_back(s);
  }
  return family.with_members(std::move(kept));
}

bool is_antichain(const SetFamily& family) {
  auto m = family.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (m[j].is_subset_of(m[i])) return false;
    }
  }
  return true;
}

bool contains_member(const SetFamily& family, SubsetMask s) {
  return std::any_of(family.begin(), family.end(), [s](SubsetMask t) { return t.is_subset_of(s); });
}

EllBound bound_ell(const SetFamily& family) {
  if (family.empty()) return {0, true};
  // Canonical order puts the largest member last.
  return {family.members().back().size(), false};
}

std::vector<SubsetMask> subsets_of_size(int n, int size) {
  std::vector<SubsetMask> out;
  if (size < 0 || size > n) return out;
  if (size == 0) return {SubsetMask{}};
  // Gosper's hack walks same-popcount masks in increasing numeric order.
  std::uint64_t s = (std::uint64_t{1} << size) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (s < limit) {
    out.emplace_back(s);
    std::uint64_t c = s & -s;
    std::uint64_t r = s + c;
    if (r == 0) break;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

std::string to_string(SubsetMask s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int e : s.elements()) {
    if (!first) os << ',';
    os << e;
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace threshold_lab
