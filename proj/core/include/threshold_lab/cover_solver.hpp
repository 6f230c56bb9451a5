#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "threshold_lab/caps.hpp"
#include "threshold_lab/product_measure.hpp"
#include "threshold_lab/rational.hpp"
#include "threshold_lab/sets.hpp"

namespace threshold_lab {

// Costs closer than this are treated as equal when breaking ties and when
// comparing against thresholds in floating point.
inline constexpr double kCostSlack = 1e-12;

enum class CoverStatus { exact_optimal, upper_bound };
enum class SolverPath { trivial, subset_dp, branch_and_bound, greedy };

std::string to_string(CoverStatus status);
std::string to_string(SolverPath path);

/// A witness cover G of the input family together with e_q(G).
template <class Cost>
struct BasicCoverSolution {
  SetFamily cover;
  Cost cost{};
  CoverStatus status = CoverStatus::exact_optimal;
  SolverPath path = SolverPath::trivial;
  std::uint64_t nodes_explored = 0;
  std::size_t pool_size = 0;
};

using CoverSolution = BasicCoverSolution<double>;
using RationalCoverSolution = BasicCoverSolution<Rational>;

// A cover candidate: a subset T of some minimal member and the bitmask of
// minimal members (by index) that contain T.
struct CoverCandidate {
  SubsetMask set;
  std::uint64_t coverage = 0;
};

/// Every subset of every member of `minimal`, deduplicated, in canonical order.
/// `minimal` must be an antichain with at most 64 members.
std::vector<CoverCandidate> candidate_pool(const SetFamily& minimal, const Caps& caps = {});

/// The pool with dominated candidates removed: T is dropped when some T' covers
/// a superset of T's members at no greater cost, strictly better in one of the two.
std::vector<CoverCandidate> pruned_candidate_pool(const SetFamily& minimal, const ProbVector& q,
                                                  const Caps& caps = {});

/// c_q(H) with an optimal witness. Subset DP over covered-member states when
/// |minimal(H)| <= caps.dp_members, branch and bound up to caps.bb_members.
/// Throws CapExceeded past either; greedy_cost is the fallback.
CoverSolution exact_cost(const SetFamily& family, const ProbVector& q, const Caps& caps = {});

/// Same search in exact rational arithmetic; no comparison slack.
RationalCoverSolution exact_cost_rational(const SetFamily& family, const std::vector<Rational>& q,
                                          const Caps& caps = {});

/// Upper bound on c_q(H) from greedy ratio selection followed by removal of
/// redundant sets. Always returns a valid cover and never throws on size.
CoverSolution greedy_cost(const SetFamily& family, const ProbVector& q);

struct SmallnessVerdict {
  bool small = false;
  CoverSolution solution;
};

/// H is q-small iff c_q(H) <= 1/2.
SmallnessVerdict is_q_small(const SetFamily& family, const ProbVector& q, const Caps& caps = {});

/// True iff every member of `family` contains some member of `cover`.
bool is_cover(const SetFamily& cover, const SetFamily& family);

}  // namespace threshold_lab
