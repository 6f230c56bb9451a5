#pragma once

// Test-only reference computations. Everything here is written directly from
// the definitions and shares no code path with the library beyond the basic
// SubsetMask / SetFamily containers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "threshold_lab/sets.hpp"

namespace threshold_lab::oracle {

// Pr[X_p contains some member], summing mu_p(W) over all W directly.
inline double prob_upset_brute(const std::vector<std::uint64_t>& members, const std::vector<double>& p) {
  const int n = static_cast<int>(p.size());
  double total = 0.0;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
    bool hit = false;
    for (auto s : members) hit = hit || (s & ~w) == 0;
    if (!hit) continue;
    double mu = 1.0;
    for (int i = 0; i < n; ++i) mu *= ((w >> i) & 1) ? p[i] : 1.0 - p[i];
    total += mu;
  }
  return total;
}

inline double monomial(std::uint64_t s, const std::vector<double>& q) {
  double out = 1.0;
  for (int i = 0; i < static_cast<int>(q.size()); ++i) {
    if ((s >> i) & 1) out *= q[i];
  }
  return out;
}

// min e_q(G) over all covers G, by letting every member pick one of its own
// subsets: the image of any such choice is a cover, and every inclusion-minimal
// cover arises this way.
inline double cover_cost_brute(const std::vector<std::uint64_t>& members, const std::vector<double>& q) {
  if (members.empty()) return 0.0;
  std::vector<std::vector<std::uint64_t>> choices;
  for (auto s : members) {
    std::vector<std::uint64_t> subs;
    for (std::uint64_t t = s;; t = (t - 1) & s) {
      subs.push_back(t);
      if (t == 0) break;
    }
    choices.push_back(std::move(subs));
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> picked(members.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == members.size()) {
      std::vector<std::uint64_t> g = picked;
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
      double cost = 0.0;
      for (auto t : g) cost += monomial(t, q);
      best = std::min(best, cost);
      return;
    }
    for (auto t : choices[i]) {
      picked[i] = t;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

// min e_q(G) over every subset G of `pool` that covers all members. Only for
// pools of at most ~22 sets.
inline double cover_cost_over_pool(const std::vector<std::uint64_t>& members, const std::vector<std::uint64_t>& pool,
                                   const std::vector<double>& q) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t k = pool.size();
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << k); ++pick) {
    bool covers = true;
    for (auto s : members) {
      bool hit = false;
      for (std::size_t c = 0; c < k && !hit; ++c) hit = ((pick >> c) & 1) && (pool[c] & ~s) == 0;
      if (!hit) {
        covers = false;
        break;
      }
    }
    if (!covers) continue;
    double cost = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if ((pick >> c) & 1) cost += monomial(pool[c], q);
    }
    best = std::min(best, cost);
  }
  return best;
}

// Inclusion-minimal members by pairwise comparison.
inline std::vector<std::uint64_t> minimal_brute(const std::vector<std::uint64_t>& members) {
  std::vector<std::uint64_t> out;
  for (auto s : members) {
    bool minimal = true;
    for (auto t : members) {
      if (t != s && (t & ~s) == 0) minimal = false;
    }
    if (minimal && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Random family for property tests: `count` draws of nonempty subsets of
// [n] with at most `max_size` elements (duplicates allowed; SetFamily dedups).
inline std::vector<std::uint64_t> random_members(std::mt19937_64& gen, int n, int count, int max_size) {
  std::vector<std::uint64_t> out;
  std::uniform_int_distribution<int> size_dist(1, max_size);
  for (int c = 0; c < count; ++c) {
    const int size = size_dist(gen);
    std::vector<int> elems(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) elems[i] = i;
    std::shuffle(elems.begin(), elems.end(), gen);
    std::uint64_t s = 0;
    for (int i = 0; i < size; ++i) s |= std::uint64_t{1} << elems[i];
    out.push_back(s);
  }
  return out;
}

inline SetFamily to_family(int n, const std::vector<std::uint64_t>& members) {
  std::vector<SubsetMask> masks;
  for (auto s : members) masks.emplace_back(s);
  return SetFamily(GroundSet(n), std::move(masks));
}

inline std::vector<std::uint64_t> bits_of(const SetFamily& f) {
  std::vector<std::uint64_t> out;
  for (SubsetMask s : f) out.push_back(s.bits());
  return out;
}

}  // namespace threshold_lab::oracle
