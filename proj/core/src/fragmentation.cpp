#include "threshold_lab/fragmentation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>

#include "threshold_lab/cover_solver.hpp"
#include "threshold_lab/errors.hpp"

namespace threshold_lab {

Schedule::Schedule(Kind kind, std::vector<Rational> values) : kind_(kind), values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("schedule needs at least one value");
  for (const auto& v : values_) {
    if (v < 1) throw ValidationError("schedule values must be at least 1, got " + to_fraction_string(v));
  }
}

Schedule Schedule::standard() {
  std::vector<Rational> values(7, Rational(5));
  values.emplace_back(4);
  return Schedule(Kind::standard, std::move(values));
}

Schedule Schedule::constant(Rational value) { return Schedule(Kind::constant, {std::move(value)}); }

Schedule Schedule::custom(std::vector<Rational> values) { return Schedule(Kind::custom, std::move(values)); }

Schedule Schedule::parse(std::string_view descriptor) {
  if (descriptor == "standard") return standard();
  if (descriptor.starts_with("const:")) return constant(parse_rational(descriptor.substr(6)));
  if (descriptor.starts_with("custom:")) {
    std::vector<Rational> values;
    auto rest = descriptor.substr(7);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      values.push_back(parse_rational(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return custom(std::move(values));
  }
  throw ValidationError("unknown schedule '" + std::string(descriptor) + "' (expected standard, const:L or custom:L1,L2,...)");
}

const Rational& Schedule::at(int i) const {
  if (i < 1) throw ValidationError("schedule index starts at 1");
  const auto idx = std::min(static_cast<std::size_t>(i), values_.size()) - 1;
  return values_[idx];
}

Rational Schedule::sum(int k) const {
  Rational total = 0;
  for (int i = 1; i <= k; ++i) total += at(i);
  return total;
}

Rational Schedule::min_from(int start) const {
  const auto first = std::min(static_cast<std::size_t>(std::max(start, 1)), values_.size()) - 1;
  return *std::min_element(values_.begin() + static_cast<std::ptrdiff_t>(first), values_.end());
}

std::string Schedule::describe() const {
  switch (kind_) {
    case Kind::standard: return "standard";
    case Kind::constant: return "const:" + to_fraction_string(values_.front());
    case Kind::custom: {
      std::string out = "custom:";
      for (std::size_t i = 0; i < values_.size(); ++i) out += (i ? "," : "") + to_fraction_string(values_[i]);
      return out;
    }
  }
  return "unknown";
}

SetFamily fragments(const SetFamily& family, SubsetMask revealed) {
  std::vector<SubsetMask> out;
  out.reserve(family.size());
  for (SubsetMask s : family) out.push_back(s.minus(revealed));
  return family.with_members(std::move(out));
}

SetFamily minimal_fragments(const SetFamily& family, SubsetMask revealed) {
  return minimal_elements(fragments(family, revealed));
}

FragmentSplit split_large_small(const SetFamily& family, SubsetMask revealed, int m) {
  if (m < 0) throw ValidationError("split threshold m must be nonnegative");
  std::vector<SubsetMask> large, small;
  for (SubsetMask t : minimal_fragments(family, revealed)) (t.size() >= m ? large : small).push_back(t);
  return {family.with_members(std::move(large)), family.with_members(std::move(small))};
}

ProbVector amplify(const ProbVector& q, double exponent) {
  if (!(exponent >= 1.0)) throw ValidationError("amplification exponent must be at least 1");
  constexpr double kBelowOne = 1.0 - 0x1.0p-53;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(q.size()));
  for (double v : q.values()) out.push_back(std::min(kBelowOne, 1.0 - std::pow(1.0 - v, exponent)));
  return ProbVector(std::move(out));
}

int process_rounds(int ell) {
  if (ell < 1) throw ValidationError("process needs ell >= 1");
  // floor(log2(2 ell)) = floor(log2 ell) + 1
  return std::bit_width(static_cast<unsigned>(ell));
}

ProcessTrace run_process(const SetFamily& family, const ProbVector& q, const Schedule& schedule, std::uint64_t seed,
                         std::uint64_t trial, bool compute_costs, const Caps& caps) {
  if (q.size() != family.ground_size()) throw ValidationError("q length does not match the ground set");
  const SetFamily original = minimal_elements(family);
  if (original.empty()) throw ValidationError("process needs a nonempty family");
  if (original.has_empty_member()) throw ValidationError("process needs a family without the empty set");

  ProcessTrace trace;
  trace.trial = trial;
  trace.ell = bound_ell(original).ell;
  trace.k = process_rounds(trace.ell);
  trace.costs_requested = compute_costs;
  trace.costs_available = compute_costs;

  SetFamily current = original;
  double z = 0.0;
  for (int i = 1; i <= trace.k; ++i) {
    RoundRecord rec;
    rec.round = i;
    rec.m = 1 << (trace.k - i);
    rec.schedule_index = trace.k + 1 - i;
    rec.exponent = schedule.value(rec.schedule_index);
    CounterRng rng(seed, process_stream(trial, i));
    rec.sample = sample(amplify(q, rec.exponent), rng);
    trace.union_sample = trace.union_sample | rec.sample;

    auto split = split_large_small(current, rec.sample, rec.m);
    rec.size_before = current.size();
    rec.size_after = split.small.size();
    rec.ell_after = bound_ell(split.small).ell;
    rec.large_size = split.large.size();
    if (trace.costs_available) {
      try {
        rec.large_cost = exact_cost(split.large, q, caps).cost;
        rec.cost_before = exact_cost(current, q, caps).cost;
        rec.cost_after = exact_cost(split.small, q, caps).cost;
        z += *rec.large_cost;
      } catch (const CapExceeded&) {
        trace.costs_available = false;
      }
    }
    current = std::move(split.small);
    trace.rounds.push_back(std::move(rec));
  }
  trace.event_e = current.size() == 1 && current.has_empty_member();
  trace.member_hit = contains_member(original, trace.union_sample);
  if (trace.costs_available) trace.z = z;
  return trace;
}

double binom_tail_weight_real(int ell, int m, double exponent) {
  double total = 0.0;
  double coeff = 1.0;  // binom(ell, j)
  for (int j = 0; j <= ell; ++j) {
    if (j >= m) total += coeff / std::pow(exponent, j);
    coeff = coeff * (ell - j) / (j + 1);
  }
  return total;
}

Lemma1Check verify_lemma1(const SetFamily& family, const ProbVector& q, double exponent, int m, const Caps& caps) {
  if (m < 1) throw ValidationError("lemma 1 needs m >= 1");
  if (q.size() != family.ground_size()) throw ValidationError("q length does not match the ground set");
  const int n = family.ground_size();
  if (n > caps.exact_ground) {
    throw CapExceeded("lemma 1 verification enumerates 2^n outcomes; n = " + std::to_string(n) + " exceeds cap " +
                      std::to_string(caps.exact_ground));
  }
  const SetFamily minimal = minimal_elements(family);
  const ProbVector p = amplify(q, exponent);

  Lemma1Check out;
  out.ell = bound_ell(minimal).ell;
  // Many outcomes leave the same large part; cost each distinct one once.
  std::map<std::vector<std::uint64_t>, double> memo;
  const std::uint64_t outcomes = std::uint64_t{1} << n;
  for (std::uint64_t w = 0; w < outcomes; ++w) {
    const auto large = split_large_small(minimal, SubsetMask{w}, m).large;
    if (large.empty()) continue;
    std::vector<std::uint64_t> key;
    key.reserve(large.size());
    for (SubsetMask s : large) key.push_back(s.bits());
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(std::move(key), exact_cost(large, q, caps).cost).first;
    out.lhs += p.outcome_probability(SubsetMask{w}) * it->second;
  }
  out.distinct_large_families = memo.size();
  out.prob_member = prob_upset_exact(minimal, p, caps);
  out.tail_weight = binom_tail_weight_real(out.ell, m, exponent);
  out.rhs = out.prob_member * out.tail_weight;
  out.verdict = out.lhs <= out.rhs + kCostSlack;
  return out;
}

Lemma2Check verify_lemma2(const SetFamily& family, const ProbVector& q, double exponent, const Caps& caps) {
  if (!(exponent >= 1.0)) throw ValidationError("amplification exponent must be at least 1");
  if (q.size() != family.ground_size()) throw ValidationError("q length does not match the ground set");
  const SetFamily minimal = minimal_elements(family);
  if (minimal.empty() || minimal.has_empty_member()) {
    throw ValidationError("lemma 2 needs a nonempty family without the empty set");
  }
  if (bound_ell(family).ell != 1) throw ValidationError("lemma 2 needs a 1-bounded family");

  Lemma2Check out;
  // The large part is H itself when no singleton is sampled and empty otherwise.
  double miss = 1.0;
  for (SubsetMask s : minimal) miss *= std::pow(1.0 - q.monomial(s), exponent);
  out.lhs = exact_cost(minimal, q, caps).cost * miss;
  out.bound = 1.0 / (std::numbers::e * exponent);
  out.verdict = out.lhs <= out.bound + kCostSlack;
  return out;
}

}  // namespace threshold_lab
