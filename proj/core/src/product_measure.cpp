#include "threshold_lab/product_measure.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "threshold_lab/errors.hpp"

namespace threshold_lab {
namespace {

void check_sizes(const SetFamily& family, const ProbVector& p) {
  if (p.size() != family.ground_size()) {
    throw ValidationError("probability vector has " + std::to_string(p.size()) + " entries, ground set has " +
                          std::to_string(family.ground_size()));
  }
}

void check_exact_cap(int n, const Caps& caps) {
  if (n > caps.exact_ground) {
    throw CapExceeded("exact enumeration needs n <= " + std::to_string(caps.exact_ground) + " (got n = " +
                      std::to_string(n) + "); use Monte Carlo mode or raise exact_ground");
  }
}

// Indicator of the up-closure over all 2^n subsets.
std::vector<std::uint8_t> upset_indicator(const SetFamily& family) {
  const int n = family.ground_size();
  const std::size_t total = std::size_t{1} << n;
  std::vector<std::uint8_t> up(total, 0);
  for (SubsetMask s : minimal_elements(family)) up[s.bits()] = 1;
  for (int b = 0; b < n; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t w = 0; w < total; ++w) {
      if ((w & bit) != 0) up[w] |= up[w ^ bit];
    }
  }
  return up;
}

}  // namespace

ProbVector::ProbVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty() || static_cast<int>(values_.size()) > kMaxGroundSize) {
    throw ValidationError("probability vector length must lie in [1, 63]");
  }
  for (double v : values_) {
    if (!(v > 0.0 && v < 1.0)) {
      throw ValidationError("probabilities must lie strictly inside (0,1), got " + std::to_string(v));
    }
  }
}

ProbVector ProbVector::uniform(int n, double p) {
  if (n < 1 || n > kMaxGroundSize) throw ValidationError("probability vector length must lie in [1, 63]");
  return ProbVector(std::vector<double>(static_cast<std::size_t>(n), p));
}

bool ProbVector::is_uniform() const {
  return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

double ProbVector::monomial(SubsetMask s) const {
  double out = 1.0;
  for (int e : s.elements()) out *= values_[static_cast<std::size_t>(e)];
  return out;
}

double ProbVector::outcome_probability(SubsetMask w) const {
  double out = 1.0;
  for (int i = 0; i < size(); ++i) out *= w.contains(i) ? values_[i] : 1.0 - values_[i];
  return out;
}

SubsetMask sample(const ProbVector& p, CounterRng& rng) {
  std::uint64_t bits = 0;
  for (int i = 0; i < p.size(); ++i) {
    if (rng.bernoulli(p[i])) bits |= std::uint64_t{1} << i;
  }
  return SubsetMask{bits};
}

double expected_hits(const SetFamily& family, const ProbVector& q) {
  check_sizes(family, q);
  double total = 0.0;
  for (SubsetMask s : family) total += q.monomial(s);
  return total;
}

double prob_upset_exact(const SetFamily& family, const ProbVector& p, const Caps& caps) {
  check_sizes(family, p);
  const int n = family.ground_size();
  check_exact_cap(n, caps);
  if (family.empty()) return 0.0;
  const auto up = upset_indicator(family);

  // Integrate out one element at a time, highest index first.
  std::size_t half = std::size_t{1} << (n - 1);
  const double top = p[n - 1];
  std::vector<double> f(half);
  for (std::size_t w = 0; w < half; ++w) f[w] = (1.0 - top) * up[w] + top * up[w | half];
  for (int e = n - 2; e >= 0; --e) {
    half >>= 1;
    const double pe = p[e];
    for (std::size_t w = 0; w < half; ++w) f[w] = (1.0 - pe) * f[w] + pe * f[w | half];
  }
  return f[0];
}

std::vector<std::uint64_t> upset_size_profile(const SetFamily& family, const Caps& caps) {
  const int n = family.ground_size();
  check_exact_cap(n, caps);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
  if (family.empty()) return counts;
  const auto up = upset_indicator(family);
  for (std::size_t w = 0; w < up.size(); ++w) {
    if (up[w]) ++counts[static_cast<std::size_t>(std::popcount(w))];
  }
  return counts;
}

double prob_from_profile(std::span<const std::uint64_t> profile, double p) {
  const int n = static_cast<int>(profile.size()) - 1;
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (profile[k] == 0) continue;
    total += static_cast<double>(profile[k]) * std::pow(p, k) * std::pow(1.0 - p, n - k);
  }
  return total;
}

double hoeffding_halfwidth(std::uint64_t trials, double confidence) {
  if (trials == 0) return 1.0;
  const double delta = 1.0 - confidence;
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(trials)));
}

ProbEstimate prob_upset_mc(const SetFamily& family, const ProbVector& p, std::uint64_t trials, std::uint64_t seed,
                           double confidence, int threads) {
  check_sizes(family, p);
  if (trials < 1) throw ValidationError("Monte Carlo needs at least one trial");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ValidationError("confidence must lie in (0,1)");
  const SetFamily minimal = minimal_elements(family);

  auto count_hits = [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      CounterRng rng(seed, t);
      if (contains_member(minimal, sample(p, rng))) ++hits;
    }
    return hits;
  };

  std::uint64_t hits = 0;
  const auto workers = static_cast<std::uint64_t>(std::max(1, threads));
  if (workers == 1 || trials < workers) {
    hits = count_hits(0, trials);
  } else {
    std::vector<std::uint64_t> partial(workers, 0);
    {
      std::vector<std::jthread> pool;
      for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t begin = trials * w / workers;
        const std::uint64_t end = trials * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] { partial[w] = count_hits(begin, end); });
      }
    }
    for (auto h : partial) hits += h;
  }

  ProbEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.confidence = confidence;
  est.point = static_cast<double>(hits) / static_cast<double>(trials);
  const double half = hoeffding_halfwidth(trials, confidence);
  est.lo = std::max(0.0, est.point - half);
  est.hi = std::min(1.0, est.point + half);
  return est;
}

}  // namespace threshold_lab
