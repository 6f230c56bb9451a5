#include "threshold_lab/families.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <unordered_set>

#include "threshold_lab/errors.hpp"
#include "threshold_lab/rng.hpp"

namespace threshold_lab {
namespace {

void check_vertices(int vertices) {
  if (vertices < 2) throw ValidationError("need at least 2 vertices");
  if (edge_count(vertices) > kMaxGroundSize) {
    throw ValidationError("K_" + std::to_string(vertices) + " has " + std::to_string(edge_count(vertices)) +
                          " edges; the ground set cap is 63");
  }
}

GroundSet edge_ground(int vertices) { return GroundSet(edge_count(vertices), edge_labels(vertices)); }

std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::vector<int> parse_ints(std::string_view text) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw ValidationError("bad integer '" + std::string(item) + "' in generator descriptor");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

}  // namespace

int edge_count(int vertices) { return vertices * (vertices - 1) / 2; }

int edge_index(int vertices, int a, int b) {
  if (a > b) std::swap(a, b);
  if (a < 0 || b >= vertices || a == b) throw ValidationError("invalid edge");
  // Edges before row a: sum_{r<a} (v-1-r)
  return a * (2 * vertices - a - 1) / 2 + (b - a - 1);
}

std::vector<std::string> edge_labels(int vertices) {
  std::vector<std::string> out;
  for (int a = 0; a < vertices; ++a) {
    for (int b = a + 1; b < vertices; ++b) out.push_back(std::to_string(a) + "-" + std::to_string(b));
  }
  return out;
}

SetFamily subgraph_copies(int vertices, int pattern_vertices, const PatternEdges& pattern) {
  check_vertices(vertices);
  if (pattern_vertices < 1 || pattern_vertices > vertices) {
    throw ValidationError("pattern has more vertices than the host graph");
  }
  for (auto [a, b] : pattern) {
    if (a < 0 || b < 0 || a >= pattern_vertices || b >= pattern_vertices || a == b) {
      throw ValidationError("invalid pattern edge");
    }
  }
  std::vector<SubsetMask> copies;
  std::vector<int> image(static_cast<std::size_t>(pattern_vertices), -1);
  std::vector<char> used(static_cast<std::size_t>(vertices), 0);
  // Enumerate injective vertex maps pattern -> K_v.
  auto extend = [&](auto&& self, int depth) -> void {
    if (depth == pattern_vertices) {
      SubsetMask s;
      for (auto [a, b] : pattern) s = s.with(edge_index(vertices, image[a], image[b]));
      copies.push_back(s);
      return;
    }
    for (int v = 0; v < vertices; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      image[depth] = v;
      self(self, depth + 1);
      used[v] = 0;
    }
  };
  extend(extend, 0);
  return SetFamily(edge_ground(vertices), std::move(copies));
}

SetFamily clique_family(int vertices, int k) {
  check_vertices(vertices);
  if (k < 2 || k > vertices) throw ValidationError("clique size must lie in [2, v]");
  std::vector<SubsetMask> members;
  for (SubsetMask chosen : subsets_of_size(vertices, k)) {
    const auto vs = chosen.elements();
    SubsetMask s;
    for (std::size_t x = 0; x < vs.size(); ++x) {
      for (std::size_t y = x + 1; y < vs.size(); ++y) s = s.with(edge_index(vertices, vs[x], vs[y]));
    }
    members.push_back(s);
  }
  return SetFamily(edge_ground(vertices), std::move(members));
}

SetFamily perfect_matching_family(int vertices) {
  check_vertices(vertices);
  if (vertices % 2 != 0) throw ValidationError("perfect matchings need an even vertex count");
  std::vector<SubsetMask> members;
  // Match the lowest unmatched vertex with each later unmatched vertex.
  auto extend = [&](auto&& self, std::uint64_t unmatched, SubsetMask edges) -> void {
    if (unmatched == 0) {
      members.push_back(edges);
      return;
    }
    const int a = std::countr_zero(unmatched);
    const std::uint64_t rest = unmatched & (unmatched - 1);
    for (std::uint64_t r = rest; r != 0; r &= r - 1) {
      const int b = std::countr_zero(r);
      self(self, rest & ~(std::uint64_t{1} << b), edges.with(edge_index(vertices, a, b)));
    }
  };
  extend(extend, (std::uint64_t{1} << vertices) - 1, SubsetMask{});
  return SetFamily(edge_ground(vertices), std::move(members));
}

SetFamily star_family(int vertices, int d) {
  check_vertices(vertices);
  if (d < 1 || d > vertices - 1) throw ValidationError("star degree must lie in [1, v-1]");
  std::vector<SubsetMask> members;
  for (int center = 0; center < vertices; ++center) {
    for (SubsetMask leaves : subsets_of_size(vertices - 1, d)) {
      SubsetMask s;
      for (int leaf : leaves.elements()) s = s.with(edge_index(vertices, center, leaf < center ? leaf : leaf + 1));
      members.push_back(s);
    }
  }
  return SetFamily(edge_ground(vertices), std::move(members));
}

SetFamily cycle_family(int vertices, int k) {
  if (k < 3) throw ValidationError("cycles need at least 3 vertices");
  PatternEdges pattern;
  for (int i = 0; i < k; ++i) pattern.emplace_back(i, (i + 1) % k);
  return subgraph_copies(vertices, k, pattern);
}

SetFamily path_family(int vertices, int k) {
  if (k < 1) throw ValidationError("paths need at least one edge");
  PatternEdges pattern;
  for (int i = 0; i < k; ++i) pattern.emplace_back(i, i + 1);
  return subgraph_copies(vertices, k + 1, pattern);
}

SetFamily random_family(int n, std::size_t count, int ell, std::uint64_t seed) {
  if (n < 1 || n > kMaxGroundSize) throw ValidationError("random family: n must lie in [1, 63]");
  if (ell < 1 || ell > n) throw ValidationError("random family: ell must lie in [1, n]");
  std::vector<std::uint64_t> remaining(static_cast<std::size_t>(ell) + 1, 0);
  std::uint64_t available = 0;
  for (int s = 1; s <= ell; ++s) {
    remaining[s] = binomial_u64(n, s);
    available += remaining[s];
    if (available > (std::uint64_t{1} << 62)) break;
  }
  if (count > available) {
    throw ValidationError("random family: " + std::to_string(count) + " sets requested but only " +
                          std::to_string(available) + " nonempty subsets of size <= " + std::to_string(ell) +
                          " exist");
  }
  CounterRng rng(seed, 0);
  std::vector<SubsetMask> chosen;
  std::unordered_set<std::uint64_t> seen;
  while (chosen.size() < count) {
    std::vector<int> sizes;
    for (int s = 1; s <= ell; ++s) {
      if (remaining[s] > 0) sizes.push_back(s);
    }
    const int size = sizes[rng.below(sizes.size())];
    // Uniform subset of the given size: partial Fisher-Yates over [n].
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    SubsetMask s;
    for (int t = 0; t < size; ++t) {
      const auto pick = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - t)));
      std::swap(pool[t], pool[pick]);
      s = s.with(pool[t]);
    }
    if (!seen.insert(s.bits()).second) continue;
    chosen.push_back(s);
    --remaining[size];
  }
  return SetFamily(GroundSet(n), std::move(chosen));
}

SetFamily generate_family(std::string_view descriptor, std::uint64_t seed) {
  const auto colon = descriptor.find(':');
  if (colon == std::string_view::npos) throw ValidationError("generator descriptor needs model:params");
  const auto model = descriptor.substr(0, colon);
  const auto args = parse_ints(descriptor.substr(colon + 1));
  auto need = [&](std::size_t k) {
    if (args.size() != k) {
      throw ValidationError("generator '" + std::string(model) + "' takes " + std::to_string(k) + " parameters");
    }
  };
  if (model == "clique") { need(2); return clique_family(args[0], args[1]); }
  if (model == "matching") { need(1); return perfect_matching_family(args[0]); }
  if (model == "star") { need(2); return star_family(args[0], args[1]); }
  if (model == "cycle") { need(2); return cycle_family(args[0], args[1]); }
  if (model == "path") { need(2); return path_family(args[0], args[1]); }
  if (model == "random") {
    need(3);
    if (args[1] < 0) throw ValidationError("random family: count must be nonnegative");
    return random_family(args[0], static_cast<std::size_t>(args[1]), args[2], seed);
  }
  throw ValidationError("unknown generator model '" + std::string(model) + "'");
}

}  // namespace threshold_lab
