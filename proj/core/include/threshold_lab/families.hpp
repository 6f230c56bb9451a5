#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "threshold_lab/sets.hpp"

namespace threshold_lab {

// Edge (a, b), a < b, of K_v gets the lexicographic index over vertex pairs:
// (0,1), (0,2), ..., (0,v-1), (1,2), ...
int edge_index(int vertices, int a, int b);
int edge_count(int vertices);
// "a-b" labels for every edge of K_v in index order.
std::vector<std::string> edge_labels(int vertices);

using PatternEdges = std::vector<std::pair<int, int>>;

/// Edge sets of every copy of a pattern graph (on `pattern_vertices`
/// vertices) inside K_v. Copies are deduplicated; since all copies have the
/// same edge count the result is an antichain.
SetFamily subgraph_copies(int vertices, int pattern_vertices, const PatternEdges& pattern);

SetFamily clique_family(int vertices, int k);
SetFamily perfect_matching_family(int vertices);
// All stars with d edges.
SetFamily star_family(int vertices, int d);
// All cycles of length k >= 3.
SetFamily cycle_family(int vertices, int k);
// All paths with k edges.
SetFamily path_family(int vertices, int k);

/// `count` distinct nonempty subsets of [n] of size at most ell: a size is drawn
/// uniformly from the sizes with subsets left, then a uniform subset of that
/// size, rejecting duplicates. Throws when count exceeds the number available.
SetFamily random_family(int n, std::size_t count, int ell, std::uint64_t seed);

/// Generator descriptors: "clique:v,k", "matching:v", "star:v,d", "cycle:v,k",
/// "path:v,k", "random:n,count,ell" (uses `seed`).
SetFamily generate_family(std::string_view descriptor, std::uint64_t seed = 1);

}  // namespace threshold_lab
