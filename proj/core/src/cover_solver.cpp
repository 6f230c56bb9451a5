#include "threshold_lab/cover_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "threshold_lab/errors.hpp"

namespace threshold_lab {
namespace {

template <class Cost>
struct CostOps;

template <>
struct CostOps<double> {
  static bool less(double a, double b) { return a < b - kCostSlack; }
  static bool equal(double a, double b) { return std::fabs(a - b) <= kCostSlack; }
};

template <>
struct CostOps<Rational> {
  static bool less(const Rational& a, const Rational& b) { return a < b; }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
};

double monomial_of(const ProbVector& q, SubsetMask s) { return q.monomial(s); }

Rational monomial_of(const std::vector<Rational>& q, SubsetMask s) {
  Rational out = 1;
  for (int e : s.elements()) out *= q[static_cast<std::size_t>(e)];
  return out;
}

std::uint64_t full_mask(std::size_t members) {
  return members == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << members) - 1;
}

template <class Cost>
std::vector<Cost> candidate_costs(const std::vector<CoverCandidate>& pool, const auto& q) {
  std::vector<Cost> costs;
  costs.reserve(pool.size());
  for (const auto& c : pool) costs.push_back(monomial_of(q, c.set));
  return costs;
}

template <class Cost>
std::vector<CoverCandidate> prune(std::vector<CoverCandidate> pool, const auto& q, const Caps& caps) {
  const auto costs = candidate_costs<Cost>(pool, q);
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  // Cheapest first; among equal costs, widest coverage first; then canonical.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (costs[a] != costs[b]) return costs[a] < costs[b];
    return std::popcount(pool[a].coverage) > std::popcount(pool[b].coverage);
  });
  std::vector<CoverCandidate> kept;
  for (std::size_t idx : order) {
    const auto cov = pool[idx].coverage;
    // Anything kept earlier costs no more; if it also covers a superset of
    // members, this candidate is dominated (or an interchangeable duplicate).
    const bool dominated = std::any_of(kept.begin(), kept.end(),
                                       [cov](const CoverCandidate& k) { return (cov & ~k.coverage) == 0; });
    if (!dominated) kept.push_back(pool[idx]);
  }
  if (kept.size() > caps.candidate_pool) {
    throw CapExceeded("cover candidate pool has " + std::to_string(kept.size()) + " sets after pruning (cap " +
                      std::to_string(caps.candidate_pool) + "); use greedy_cost");
  }
  std::sort(kept.begin(), kept.end(),
            [](const CoverCandidate& a, const CoverCandidate& b) { return canonical_less(a.set, b.set); });
  return kept;
}

template <class Cost>
struct Search {
  std::size_t members;
  const std::vector<CoverCandidate>& pool;
  const std::vector<Cost>& costs;

  std::vector<std::vector<std::uint32_t>> by_member() const {
    std::vector<std::vector<std::uint32_t>> out(members);
    for (std::uint32_t c = 0; c < pool.size(); ++c) {
      for (std::uint64_t b = pool[c].coverage; b != 0; b &= b - 1) {
        out[static_cast<std::size_t>(std::countr_zero(b))].push_back(c);
      }
    }
    return out;
  }

  // Candidate indices of an optimal cover: backward DP where best[state] is the
  // cheapest way to cover the members missing from `state`, always extending
  // through the lowest uncovered member.
  std::vector<std::uint32_t> subset_dp(std::uint64_t& nodes) const {
    const std::uint64_t full = full_mask(members);
    const auto covering = by_member();
    std::vector<Cost> best(full + 1);
    std::vector<std::uint32_t> choice(full + 1, 0);
    std::vector<std::uint8_t> count(full + 1, 0);
    for (std::uint64_t state = full; state-- > 0;) {
      const int lowest = std::countr_one(state);
      bool have = false;
      for (std::uint32_t c : covering[static_cast<std::size_t>(lowest)]) {
        ++nodes;
        const std::uint64_t next = state | pool[c].coverage;
        Cost value = costs[c] + best[next];
        const int sets = count[next] + 1;
        if (!have || CostOps<Cost>::less(value, best[state]) ||
            (CostOps<Cost>::equal(value, best[state]) && sets < count[state])) {
          best[state] = std::move(value);
          choice[state] = c;
          count[state] = static_cast<std::uint8_t>(sets);
          have = true;
        }
      }
    }
    std::vector<std::uint32_t> chosen;
    for (std::uint64_t state = 0; state != full; state |= pool[choice[state]].coverage) {
      chosen.push_back(choice[state]);
    }
    return chosen;
  }

  // Ratio greedy over the pool: minimize cost per newly covered member.
  std::vector<std::uint32_t> greedy() const {
    const std::uint64_t full = full_mask(members);
    std::uint64_t covered = 0;
    std::vector<std::uint32_t> chosen;
    while (covered != full) {
      std::uint32_t pick = 0;
      int pick_gain = 0;
      for (std::uint32_t c = 0; c < pool.size(); ++c) {
        const int gain = std::popcount(pool[c].coverage & ~covered);
        if (gain == 0) continue;
        // costs[c]/gain < costs[pick]/pick_gain
        if (pick_gain == 0 || costs[c] * pick_gain < costs[pick] * gain) {
          pick = c;
          pick_gain = gain;
        }
      }
      chosen.push_back(pick);
      covered |= pool[pick].coverage;
    }
    return chosen;
  }

  Cost total(const std::vector<std::uint32_t>& chosen) const {
    Cost sum = 0;
    for (auto c : chosen) sum += costs[c];
    return sum;
  }

  struct BranchState {
    const std::vector<std::vector<std::uint32_t>>& covering;
    const std::vector<Cost>& cheapest;
    std::uint64_t full;
    std::uint64_t node_cap;
    std::uint64_t nodes = 0;
    std::vector<std::uint32_t> current;
    std::vector<std::uint32_t> incumbent;
    Cost incumbent_cost;
  };

  void branch(BranchState& s, std::uint64_t covered, const Cost& partial) const {
    if (++s.nodes > s.node_cap) {
      throw CapExceeded("branch and bound exceeded " + std::to_string(s.node_cap) + " nodes; use greedy_cost");
    }
    if (covered == s.full) {
      if (CostOps<Cost>::less(partial, s.incumbent_cost) ||
          (CostOps<Cost>::equal(partial, s.incumbent_cost) && s.current.size() < s.incumbent.size())) {
        s.incumbent = s.current;
        s.incumbent_cost = partial;
      }
      return;
    }
    // Branch on the uncovered member with the fewest covering candidates; the
    // cheapest candidate of the worst uncovered member bounds the remainder.
    std::size_t target = members;
    Cost bound = partial;
    const Cost* worst = nullptr;
    for (std::uint64_t b = s.full & ~covered; b != 0; b &= b - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(b));
      if (target == members || s.covering[i].size() < s.covering[target].size()) target = i;
      if (worst == nullptr || *worst < s.cheapest[i]) worst = &s.cheapest[i];
    }
    bound += *worst;
    if (CostOps<Cost>::less(s.incumbent_cost, bound)) return;
    if (!CostOps<Cost>::less(bound, s.incumbent_cost) && s.current.size() + 1 >= s.incumbent.size()) return;
    for (std::uint32_t c : s.covering[target]) {
      s.current.push_back(c);
      branch(s, covered | pool[c].coverage, partial + costs[c]);
      s.current.pop_back();
    }
  }

  std::vector<std::uint32_t> branch_and_bound(std::uint64_t node_cap, std::uint64_t& nodes) const {
    auto covering = by_member();
    std::vector<Cost> cheapest(members);
    for (std::size_t i = 0; i < members; ++i) {
      auto& list = covering[i];
      std::stable_sort(list.begin(), list.end(), [&](std::uint32_t a, std::uint32_t b) { return costs[a] < costs[b]; });
      cheapest[i] = costs[list.front()];
    }
    BranchState s{covering, cheapest, full_mask(members), node_cap, 0, {}, greedy(), Cost{}};
    s.incumbent_cost = total(s.incumbent);
    branch(s, 0, Cost{0});
    nodes = s.nodes;
    return s.incumbent;
  }
};

template <class Cost, class Q>
BasicCoverSolution<Cost> solve_exact(const SetFamily& family, const Q& q, const Caps& caps) {
  const SetFamily minimal = minimal_elements(family);
  BasicCoverSolution<Cost> out{family.with_members({}), Cost{0}, CoverStatus::exact_optimal, SolverPath::trivial, 0, 0};
  if (minimal.empty()) return out;
  if (minimal.has_empty_member()) {
    out.cover = family.with_members({SubsetMask{}});
    out.cost = 1;
    return out;
  }
  const std::size_t h = minimal.size();
  const bool use_dp = static_cast<int>(h) <= caps.dp_members;
  if (!use_dp && static_cast<int>(h) > caps.bb_members) {
    throw CapExceeded("exact cover needs at most " + std::to_string(caps.bb_members) + " minimal members (got " +
                      std::to_string(h) + "); use greedy_cost");
  }
  const auto pool = prune<Cost>(candidate_pool(minimal, caps), q, caps);
  const auto costs = candidate_costs<Cost>(pool, q);
  const Search<Cost> search{h, pool, costs};
  std::vector<std::uint32_t> chosen;
  if (use_dp) {
    chosen = search.subset_dp(out.nodes_explored);
    out.path = SolverPath::subset_dp;
  } else {
    chosen = search.branch_and_bound(caps.bb_nodes, out.nodes_explored);
    out.path = SolverPath::branch_and_bound;
  }
  std::vector<SubsetMask> sets;
  for (auto c : chosen) sets.push_back(pool[c].set);
  out.cover = family.with_members(std::move(sets));
  out.cost = 0;
  for (SubsetMask s : out.cover) out.cost += monomial_of(q, s);
  out.pool_size = pool.size();
  return out;
}

void check_q_size(const SetFamily& family, std::size_t q_size) {
  if (static_cast<int>(q_size) != family.ground_size()) {
    throw ValidationError("probability vector has " + std::to_string(q_size) + " entries, ground set has " +
                          std::to_string(family.ground_size()));
  }
}

}  // namespace

std::string to_string(CoverStatus status) {
  return status == CoverStatus::exact_optimal ? "exact-optimal" : "upper-bound";
}

std::string to_string(SolverPath path) {
  switch (path) {
    case SolverPath::trivial: return "trivial";
    case SolverPath::subset_dp: return "subset-dp";
    case SolverPath::branch_and_bound: return "branch-and-bound";
    case SolverPath::greedy: return "greedy";
  }
  return "unknown";
}

std::vector<CoverCandidate> candidate_pool(const SetFamily& minimal, const Caps& caps) {
  const auto members = minimal.members();
  if (members.size() > 64) throw CapExceeded("candidate pool supports at most 64 minimal members; use greedy_cost");
  const std::size_t raw_cap = caps.candidate_pool * 16;
  std::size_t raw = 0;
  for (SubsetMask s : members) {
    if (s.size() >= 40 || (raw += std::size_t{1} << s.size()) > raw_cap) {
      throw CapExceeded("cover candidate pool exceeds " + std::to_string(raw_cap) + " raw subsets; use greedy_cost");
    }
  }
  std::vector<SubsetMask> sets;
  sets.reserve(raw);
  for (SubsetMask s : members) {
    const std::uint64_t bits = s.bits();
    for (std::uint64_t t = bits;; t = (t - 1) & bits) {
      sets.emplace_back(t);
      if (t == 0) break;
    }
  }
  std::sort(sets.begin(), sets.end(), canonical_less);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<CoverCandidate> pool;
  pool.reserve(sets.size());
  for (SubsetMask t : sets) {
    std::uint64_t cov = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (t.is_subset_of(members[i])) cov |= std::uint64_t{1} << i;
    }
    pool.push_back({t, cov});
  }
  return pool;
}

std::vector<CoverCandidate> pruned_candidate_pool(const SetFamily& minimal, const ProbVector& q, const Caps& caps) {
  check_q_size(minimal, static_cast<std::size_t>(q.size()));
  return prune<double>(candidate_pool(minimal, caps), q, caps);
}

CoverSolution exact_cost(const SetFamily& family, const ProbVector& q, const Caps& caps) {
  check_q_size(family, static_cast<std::size_t>(q.size()));
  return solve_exact<double>(family, q, caps);
}

RationalCoverSolution exact_cost_rational(const SetFamily& family, const std::vector<Rational>& q,
                                          const Caps& caps) {
  check_q_size(family, q.size());
  // GMP arithmetic assumes reduced operands; callers may pass e.g. mpq_class(4, 20).
  std::vector<Rational> reduced = q;
  for (auto& v : reduced) {
    v.canonicalize();
    if (!(v > 0 && v < 1)) throw ValidationError("probabilities must lie strictly inside (0,1)");
  }
  return solve_exact<Rational>(family, reduced, caps);
}

CoverSolution greedy_cost(const SetFamily& family, const ProbVector& q) {
  check_q_size(family, static_cast<std::size_t>(q.size()));
  const SetFamily minimal = minimal_elements(family);
  CoverSolution out{family.with_members({}), 0.0, CoverStatus::upper_bound, SolverPath::greedy, 0, 0};
  if (minimal.empty()) return out;
  const SetFamily trivial_cover = family.with_members({SubsetMask{}});
  if (minimal.has_empty_member()) {
    out.cover = trivial_cover;
    out.cost = 1.0;
    return out;
  }
  const auto members = minimal.members();

  // All subsets of members when that stays small, otherwise subsets of size
  // at most two plus the members themselves.
  constexpr std::size_t kFullPoolLimit = std::size_t{1} << 16;
  std::size_t raw = 0;
  bool full_pool = true;
  for (SubsetMask s : members) {
    if (s.size() >= 40 || (raw += std::size_t{1} << s.size()) > kFullPoolLimit) {
      full_pool = false;
      break;
    }
  }
  std::vector<SubsetMask> pool;
  for (SubsetMask s : members) {
    if (full_pool) {
      for (std::uint64_t t = s.bits();; t = (t - 1) & s.bits()) {
        pool.emplace_back(t);
        if (t == 0) break;
      }
    } else {
      pool.push_back(s);
      const auto elems = s.elements();
      for (std::size_t a = 0; a < elems.size(); ++a) {
        pool.push_back(SubsetMask{}.with(elems[a]));
        for (std::size_t b = a + 1; b < elems.size(); ++b) pool.push_back(SubsetMask{}.with(elems[a]).with(elems[b]));
      }
    }
  }
  std::sort(pool.begin(), pool.end(), canonical_less);
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::vector<double> costs;
  for (SubsetMask t : pool) costs.push_back(q.monomial(t));

  std::vector<char> covered(members.size(), 0);
  std::size_t remaining = members.size();
  std::vector<std::size_t> chosen;
  while (remaining > 0) {
    std::size_t pick = pool.size();
    std::size_t pick_gain = 0;
    for (std::size_t c = 0; c < pool.size(); ++c) {
      std::size_t gain = 0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (!covered[i] && pool[c].is_subset_of(members[i])) ++gain;
      }
      ++out.nodes_explored;
      if (gain == 0) continue;
      if (pick == pool.size() || costs[c] * static_cast<double>(pick_gain) < costs[pick] * static_cast<double>(gain)) {
        pick = c;
        pick_gain = gain;
      }
    }
    chosen.push_back(pick);
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (!covered[i] && pool[pick].is_subset_of(members[i])) {
        covered[i] = 1;
        --remaining;
      }
    }
  }

  // Drop sets whose members are all covered by the rest, most expensive first.
  std::stable_sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) { return costs[a] > costs[b]; });
  for (std::size_t k = 0; k < chosen.size();) {
    bool redundant = true;
    for (SubsetMask s : members) {
      if (!pool[chosen[k]].is_subset_of(s)) continue;
      bool other = false;
      for (std::size_t j = 0; j < chosen.size() && !other; ++j) {
        other = j != k && pool[chosen[j]].is_subset_of(s);
      }
      if (!other) {
        redundant = false;
        break;
      }
    }
    if (redundant) {
      chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(k));
    } else {
      ++k;
    }
  }

  std::vector<SubsetMask> sets;
  for (auto c : chosen) sets.push_back(pool[c]);
  out.cover = family.with_members(std::move(sets));
  out.cost = expected_hits(out.cover, q);
  out.pool_size = pool.size();
  if (out.cost > 1.0) {
    out.cover = trivial_cover;
    out.cost = 1.0;
  }
  return out;
}

SmallnessVerdict is_q_small(const SetFamily& family, const ProbVector& q, const Caps& caps) {
  auto solution = exact_cost(family, q, caps);
  const bool small = solution.cost <= 0.5 + kCostSlack;
  return {small, std::move(solution)};
}

bool is_cover(const SetFamily& cover, const SetFamily& family) {
  return std::all_of(family.begin(), family.end(), [&](SubsetMask s) { return contains_member(cover, s); });
}

}  // namespace threshold_lab
