#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "report.hpp"
#include "threshold_lab/caps.hpp"
#include "threshold_lab/certifier.hpp"
#include "threshold_lab/cover_solver.hpp"
#include "threshold_lab/errors.hpp"
#include "threshold_lab/families.hpp"
#include "threshold_lab/family_io.hpp"
#include "threshold_lab/fragmentation.hpp"
#include "threshold_lab/product_measure.hpp"
#include "threshold_lab/rng.hpp"
#include "threshold_lab/thresholds.hpp"
#include "threshold_lab/version.hpp"

namespace threshold_lab::cli {
namespace {

struct Options {
  std::string family_path;
  std::string gen;
  std::string format = "json";
  std::string output;
  std::string caps;
  std::uint64_t seed = 0;
  std::string q;
  std::string p;
  std::string mode = "exact";
  std::uint64_t trials = 0;
  double confidence = 0.99;
  int threads = 1;
  double tol = 1e-6;
  bool mc_fallback = false;
  bool greedy = false;
  bool rational = false;
  bool check = false;
  std::string w;
  int m = 1;
  std::string schedule = "standard";
  bool costs = false;
  std::string trace_out;
  int lemma = 1;
  std::string exponent = "2";
  int i_max = 30;
  int exact_limit = 14;
  int digits = 20;
  bool closed_form = false;
  bool exact_fractions = false;
  std::string proof_log;
  std::string descriptor;
};

struct Outcome {
  Json result;
  std::optional<bool> verdict;  // checked by --assert
};

class Context {
 public:
  Context(Options& o, CLI::App& sub, std::istream& in, std::ostream& err) : o(o), sub(sub), in_(in), err_(err) {
    caps = Caps::from_env();
    if (!o.caps.empty()) caps = Caps::parse(o.caps, caps);
    config["command"] = sub.get_name();
    config["caps"] = caps.describe();
  }

  bool given(const std::string& name) const { return sub.count(name) > 0; }

  std::uint64_t seed() {
    if (!seed_) {
      if (given("--seed")) {
        seed_ = o.seed;
      } else {
        std::random_device rd;
        seed_ = (static_cast<std::uint64_t>(rd()) << 32) | rd();
        err_ << "threshold-lab: no --seed given; using seed " << *seed_ << "\n";
      }
      config["seed"] = *seed_;
    }
    return *seed_;
  }

  FamilyFile load_family() {
    const bool has_path = !o.family_path.empty();
    const bool has_gen = !o.gen.empty();
    if (has_path == has_gen) throw ValidationError("give exactly one of a family file or --gen");
    if (has_gen) {
      config["input"] = "gen:" + o.gen;
      const bool random = o.gen.starts_with("random:");
      return FamilyFile{generate_family(o.gen, random ? seed() : 1), std::nullopt};
    }
    config["input"] = o.family_path;
    if (o.family_path == "-") return parse_family(in_);
    return read_family_file(o.family_path);
  }

  Options& o;
  CLI::App& sub;
  Json config;
  Caps caps;

 private:
  std::istream& in_;
  std::ostream& err_;
  std::optional<std::uint64_t> seed_;
};

std::vector<std::string> split_commas(std::string_view text) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = text.find(',');
    out.emplace_back(text.substr(0, comma));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

double parse_double(const std::string& text, const char* what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ValidationError(std::string("bad number '") + text + "' for " + what);
  return v;
}

// Uniform scalar "0.3", vector "0.1,0.2,0.3", or "file" for the vector stored
// in the family file.
ProbVector parse_prob(const std::string& spec, const FamilyFile& file, const char* what) {
  const int n = file.family.ground_size();
  if (spec.empty()) {
    if (file.q) return ProbVector(*file.q);
    throw ValidationError(std::string("missing --") + what + " (scalar, comma list or 'file')");
  }
  if (spec == "file") {
    if (!file.q) throw ValidationError("family file has no q vector");
    return ProbVector(*file.q);
  }
  const auto parts = split_commas(spec);
  if (parts.size() == 1) return ProbVector::uniform(n, parse_double(parts[0], what));
  if (static_cast<int>(parts.size()) != n) {
    throw ValidationError(std::string("--") + what + " has " + std::to_string(parts.size()) +
                          " entries but the ground set has " + std::to_string(n));
  }
  std::vector<double> values;
  for (const auto& part : parts) values.push_back(parse_double(part, what));
  return ProbVector(std::move(values));
}

std::vector<Rational> parse_prob_rational(const std::string& spec, int n) {
  if (spec.empty() || spec == "file") throw ValidationError("rational mode needs --q as exact numbers");
  const auto parts = split_commas(spec);
  if (parts.size() != 1 && static_cast<int>(parts.size()) != n) {
    throw ValidationError("--q has " + std::to_string(parts.size()) + " entries but the ground set has " +
                          std::to_string(n));
  }
  std::vector<Rational> out;
  for (int i = 0; i < n; ++i) {
    Rational v = parse_rational(parts[parts.size() == 1 ? 0 : static_cast<std::size_t>(i)]);
    if (v <= 0 || v >= 1) throw ValidationError("probabilities must lie strictly between 0 and 1");
    out.push_back(std::move(v));
  }
  return out;
}

Json prob_json(const ProbVector& p) {
  if (p.is_uniform()) return p[0];
  return Json(std::vector<double>(p.values().begin(), p.values().end()));
}

SubsetMask parse_elements(const std::string& text, int n) {
  SubsetMask out;
  if (text.empty()) return out;
  for (const auto& part : split_commas(text)) {
    int e = -1;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), e);
    if (ec != std::errc{} || ptr != part.data() + part.size() || e < 0 || e >= n) {
      throw ValidationError("bad element '" + part + "' (ground set has " + std::to_string(n) + " elements)");
    }
    out = out.with(e);
  }
  return out;
}

Json threshold_json(const ThresholdResult& r) {
  Json j;
  j["lo"] = r.lo;
  j["hi"] = r.hi;
  j["mode"] = to_string(r.mode);
  j["iterations"] = r.iterations;
  j["value_at_midpoint"] = r.value_at_midpoint;
  j["unresolved"] = r.unresolved;
  return j;
}

MonteCarloParams mc_params(Context& ctx, std::uint64_t default_trials) {
  if (!ctx.given("--trials")) ctx.o.trials = default_trials;
  MonteCarloParams mc;
  mc.trials = ctx.o.trials;
  mc.seed = ctx.seed();
  mc.confidence = ctx.o.confidence;
  mc.threads = ctx.o.threads;
  ctx.config["trials"] = mc.trials;
  ctx.config["confidence"] = mc.confidence;
  ctx.config["threads"] = mc.threads;
  return mc;
}

ThresholdMode parse_mode(Context& ctx) {
  ctx.config["mode"] = ctx.o.mode;
  return ctx.o.mode == "mc" ? ThresholdMode::monte_carlo : ThresholdMode::exact;
}

Outcome cmd_info(Context& ctx) {
  const auto file = ctx.load_family();
  const auto& f = file.family;
  const auto minimal = minimal_elements(f);
  Json r;
  r["n"] = f.ground_size();
  r["members"] = f.size();
  r["minimal_members"] = minimal.size();
  r["ell"] = bound_ell(f).ell;
  r["antichain"] = is_antichain(f);
  r["sets"] = family_json(f);
  if (f.ground().has_labels()) r["labels"] = f.ground().labels();
  Json warnings = Json::array();
  if (f.empty()) warnings.push_back("family is empty: its up-closure is empty");
  if (f.has_empty_member()) warnings.push_back("family contains the empty set: its up-closure is every subset");
  r["warnings"] = warnings;
  return {r, std::nullopt};
}

Outcome cmd_cost(Context& ctx) {
  const auto file = ctx.load_family();
  const auto& f = file.family;
  Json r;
  if (ctx.o.rational) {
    const auto q = parse_prob_rational(ctx.o.q, f.ground_size());
    Json exact_q = Json::array();
    for (const auto& v : q) exact_q.push_back(to_fraction_string(v));
    ctx.config["q"] = exact_q;
    ctx.config["arithmetic"] = "rational";
    Rational e = 0;
    for (SubsetMask s : f) {
      Rational term = 1;
      for (int x : s.elements()) term *= q[static_cast<std::size_t>(x)];
      e += term;
    }
    const auto sol = exact_cost_rational(f, q, ctx.caps);
    const bool small = sol.cost <= Rational(1, 2);
    r["e_q"] = to_double(e);
    r["e_q_exact"] = to_fraction_string(e);
    r["c_q"] = to_double(sol.cost);
    r["c_q_exact"] = to_fraction_string(sol.cost);
    r["method"] = "exact";
    r["status"] = to_string(sol.status);
    r["path"] = to_string(sol.path);
    r["small"] = small;
    r["cover"] = family_json(sol.cover);
    r["nodes_explored"] = sol.nodes_explored;
    r["pool_size"] = sol.pool_size;
    return {r, small};
  }
  const auto q = parse_prob(ctx.o.q, file, "q");
  ctx.config["q"] = prob_json(q);
  ctx.config["arithmetic"] = "double";
  ctx.config["greedy"] = ctx.o.greedy;
  const auto sol = ctx.o.greedy ? greedy_cost(f, q) : exact_cost(f, q, ctx.caps);
  const bool small = sol.cost <= 0.5 + kCostSlack;
  r["e_q"] = expected_hits(f, q);
  r["c_q"] = sol.cost;
  r["method"] = ctx.o.greedy ? "greedy" : "exact";
  r["status"] = to_string(sol.status);
  r["path"] = to_string(sol.path);
  r["small"] = small;
  r["cover"] = family_json(sol.cover);
  r["nodes_explored"] = sol.nodes_explored;
  r["pool_size"] = sol.pool_size;
  return {r, small};
}

Outcome cmd_prob(Context& ctx) {
  const auto file = ctx.load_family();
  const auto p = parse_prob(ctx.o.p, file, "p");
  ctx.config["p"] = prob_json(p);
  Json r;
  if (parse_mode(ctx) == ThresholdMode::monte_carlo) {
    const auto mc = mc_params(ctx, 100000);
    const auto est = prob_upset_mc(file.family, p, mc.trials, mc.seed, mc.confidence, mc.threads);
    r["mode"] = "monte-carlo";
    r["probability"] = est.point;
    r["lo"] = est.lo;
    r["hi"] = est.hi;
    r["trials"] = est.trials;
    r["confidence"] = est.confidence;
  } else {
    const double v = prob_upset_exact(file.family, p, ctx.caps);
    r["mode"] = "exact";
    r["probability"] = v;
    r["lo"] = v;
    r["hi"] = v;
  }
  return {r, std::nullopt};
}

Outcome cmd_pc(Context& ctx) {
  const auto file = ctx.load_family();
  ctx.config["tol"] = ctx.o.tol;
  ctx.config["mc_fallback"] = ctx.o.mc_fallback;
  const auto mode = parse_mode(ctx);
  const bool needs_mc = mode == ThresholdMode::monte_carlo ||
                        (ctx.o.mc_fallback && file.family.ground_size() > ctx.caps.exact_ground);
  const MonteCarloParams mc = needs_mc ? mc_params(ctx, 20000) : MonteCarloParams{};
  const auto res = prob_threshold(file.family, ctx.o.tol, mode, mc, ctx.caps, ctx.o.mc_fallback);
  return {threshold_json(res), !res.unresolved};
}

Outcome cmd_qc(Context& ctx) {
  const auto file = ctx.load_family();
  ctx.config["tol"] = ctx.o.tol;
  return {threshold_json(expectation_threshold(file.family, ctx.o.tol, ctx.caps)), std::nullopt};
}

Outcome cmd_kk(Context& ctx) {
  const auto file = ctx.load_family();
  ctx.config["tol"] = ctx.o.tol;
  const auto rep = kk_gap_report(file.family, ctx.o.tol, ctx.caps);
  Json r;
  r["ell"] = rep.ell;
  r["pc_lo"] = rep.pc.lo;
  r["pc_hi"] = rep.pc.hi;
  r["qc_lo"] = rep.qc.lo;
  r["qc_hi"] = rep.qc.hi;
  r["ratio_bound"] = rep.ratio_bound;
  r["kk_bound_log7ell"] = rep.kk_bound_log7ell;
  r["kk_bound_4k7"] = rep.kk_bound_4k7;
  r["pass_log7ell"] = rep.pass_log7ell;
  r["pass_4k7"] = rep.pass_4k7;
  r["pass"] = rep.pass;
  return {r, rep.pass};
}

Outcome cmd_fragment(Context& ctx) {
  const auto file = ctx.load_family();
  const auto& f = file.family;
  const bool has_w = ctx.given("--w");
  const bool has_q = !ctx.o.q.empty();
  if (has_w == has_q) throw ValidationError("give exactly one of --w (revealed set) or --q (sample it)");
  SubsetMask w;
  std::optional<ProbVector> q;
  if (has_w) {
    w = parse_elements(ctx.o.w, f.ground_size());
    ctx.config["w"] = ctx.o.w;
  } else {
    q = parse_prob(ctx.o.q, file, "q");
    ctx.config["q"] = prob_json(*q);
    CounterRng rng(ctx.seed(), 0);
    w = sample(*q, rng);
  }
  ctx.config["m"] = ctx.o.m;
  const auto split = split_large_small(f, w, ctx.o.m);
  Json r;
  r["w"] = set_json(w);
  r["w_contains_member"] = contains_member(f, w);
  r["fragments"] = family_json(fragments(f, w));
  r["minimal_fragments"] = family_json(minimal_fragments(f, w));
  r["m"] = ctx.o.m;
  r["large"] = family_json(split.large);
  r["small"] = family_json(split.small);
  if (q) {
    try {
      r["large_cost"] = exact_cost(split.large, *q, ctx.caps).cost;
      r["small_cost"] = exact_cost(split.small, *q, ctx.caps).cost;
    } catch (const CapExceeded&) {
      r["costs_note"] = "cover costs skipped: cap exceeded";
    }
  }
  return {r, std::nullopt};
}

struct TrialSummary {
  bool event_e = false;
  bool member_hit = false;
  bool costs_available = false;
  int bounded_violations = 0;
  bool e_without_hit = false;
  bool z_below_cost_without_e = false;
  std::string trace_line;
};

Json trace_json(const ProcessTrace& t) {
  Json j;
  j["trial"] = t.trial;
  j["event_e"] = t.event_e;
  j["member_hit"] = t.member_hit;
  j["union_sample"] = set_json(t.union_sample);
  if (t.z) j["z"] = *t.z;
  Json rounds = Json::array();
  for (const auto& rec : t.rounds) {
    Json rj;
    rj["round"] = rec.round;
    rj["m"] = rec.m;
    rj["exponent"] = rec.exponent;
    rj["sample"] = set_json(rec.sample);
    rj["size_before"] = rec.size_before;
    rj["size_after"] = rec.size_after;
    rj["ell_after"] = rec.ell_after;
    rj["large_size"] = rec.large_size;
    if (rec.large_cost) rj["large_cost"] = *rec.large_cost;
    rounds.push_back(std::move(rj));
  }
  j["rounds"] = std::move(rounds);
  return j;
}

Outcome cmd_simulate(Context& ctx) {
  const auto file = ctx.load_family();
  const auto& f = file.family;
  const auto q = parse_prob(ctx.o.q, file, "q");
  const auto schedule = Schedule::parse(ctx.o.schedule);
  if (!ctx.given("--trials")) ctx.o.trials = 1000;
  if (ctx.o.trials == 0) throw ValidationError("simulate needs --trials >= 1");
  if (ctx.o.threads < 1) throw ValidationError("--threads must be at least 1");
  const std::uint64_t seed = ctx.seed();
  ctx.config["q"] = prob_json(q);
  ctx.config["schedule"] = schedule.describe();
  ctx.config["trials"] = ctx.o.trials;
  ctx.config["threads"] = ctx.o.threads;
  ctx.config["confidence"] = ctx.o.confidence;
  ctx.config["costs"] = ctx.o.costs;
  if (!ctx.o.trace_out.empty()) ctx.config["trace_out"] = ctx.o.trace_out;

  // Validates the family and fixes k before any worker starts.
  const auto probe = run_process(f, q, schedule, seed, 0, false, ctx.caps);
  std::optional<double> cost_h;
  if (ctx.o.costs) {
    try {
      cost_h = exact_cost(f, q, ctx.caps).cost;
    } catch (const CapExceeded&) {
    }
  }

  const bool want_trace = !ctx.o.trace_out.empty();
  std::vector<TrialSummary> summaries(ctx.o.trials);
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t t = begin; t < end; ++t) {
      const auto trace = run_process(f, q, schedule, seed, t, ctx.o.costs, ctx.caps);
      auto& s = summaries[t];
      s.event_e = trace.event_e;
      s.member_hit = trace.member_hit;
      s.costs_available = trace.costs_available;
      for (const auto& rec : trace.rounds) s.bounded_violations += rec.ell_after > rec.m - 1;
      s.e_without_hit = trace.event_e && !trace.member_hit;
      s.z_below_cost_without_e = trace.z && cost_h && *trace.z < *cost_h - kCostSlack && !trace.event_e;
      if (want_trace) s.trace_line = trace_json(trace).dump();
    }
  };
  const auto threads = static_cast<std::uint64_t>(ctx.o.threads);
  const std::uint64_t chunk = (ctx.o.trials + threads - 1) / threads;
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (std::uint64_t i = 0; i < threads; ++i) {
      const std::uint64_t begin = std::min(ctx.o.trials, i * chunk);
      const std::uint64_t end = std::min(ctx.o.trials, begin + chunk);
      pool.emplace_back([&, i, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  if (want_trace) {
    std::ofstream trace_file(ctx.o.trace_out);
    if (!trace_file) throw ValidationError("cannot open trace file " + ctx.o.trace_out);
    for (const auto& s : summaries) trace_file << s.trace_line << "\n";
  }

  std::uint64_t e_count = 0, hit_count = 0, cost_trials = 0;
  std::uint64_t bounded = 0, e_hit = 0, z_e = 0;
  for (const auto& s : summaries) {
    e_count += s.event_e;
    hit_count += s.member_hit;
    cost_trials += s.costs_available;
    bounded += static_cast<std::uint64_t>(s.bounded_violations);
    e_hit += s.e_without_hit;
    z_e += s.z_below_cost_without_e;
  }
  const double trials = static_cast<double>(ctx.o.trials);
  const double half = hoeffding_halfwidth(ctx.o.trials, ctx.o.confidence);
  auto frac = [&](Json& r, const std::string& key, std::uint64_t count) {
    const double v = static_cast<double>(count) / trials;
    r[key + "_count"] = count;
    r[key + "_fraction"] = v;
    r[key + "_lo"] = std::max(0.0, v - half);
    r[key + "_hi"] = std::min(1.0, v + half);
  };

  Json r;
  r["ell"] = probe.ell;
  r["k"] = probe.k;
  Json exps = Json::array();
  for (const auto& rec : probe.rounds) exps.push_back(rec.exponent);
  r["round_exponents"] = exps;
  const double total_exponent = to_double(schedule.sum(probe.k));
  r["total_exponent"] = total_exponent;
  r["trials"] = ctx.o.trials;
  r["confidence"] = ctx.o.confidence;
  frac(r, "event_e", e_count);
  frac(r, "member_hit", hit_count);
  if (f.ground_size() <= ctx.caps.exact_ground) {
    r["member_hit_exact"] = prob_upset_exact(f, amplify(q, total_exponent), ctx.caps);
  }
  if (cost_h) r["c_q"] = *cost_h;
  r["cost_trials"] = cost_trials;
  Json v;
  v["bounded"] = bounded;
  v["e_implies_member_hit"] = e_hit;
  v["z_below_cost_implies_e"] = z_e;
  r["invariant_violations"] = v;
  const std::uint64_t total = bounded + e_hit + z_e;
  r["violations_total"] = total;
  return {r, total == 0};
}

Outcome cmd_verify(Context& ctx) {
  const auto file = ctx.load_family();
  const auto q = parse_prob(ctx.o.q, file, "q");
  const double l = to_double(parse_rational(ctx.o.exponent));
  ctx.config["lemma"] = ctx.o.lemma;
  ctx.config["q"] = prob_json(q);
  ctx.config["L"] = ctx.o.exponent;
  Json r;
  r["lemma"] = ctx.o.lemma;
  r["L"] = l;
  if (ctx.o.lemma == 1) {
    ctx.config["m"] = ctx.o.m;
    const auto c = verify_lemma1(file.family, q, l, ctx.o.m, ctx.caps);
    r["m"] = ctx.o.m;
    r["ell"] = c.ell;
    r["lhs"] = c.lhs;
    r["rhs"] = c.rhs;
    r["slack"] = c.rhs - c.lhs;
    r["prob_member"] = c.prob_member;
    r["tail_weight"] = c.tail_weight;
    r["distinct_large_families"] = c.distinct_large_families;
    r["verdict"] = c.verdict;
    return {r, c.verdict};
  }
  const auto c = verify_lemma2(file.family, q, l, ctx.caps);
  r["lhs"] = c.lhs;
  r["bound"] = c.bound;
  r["slack"] = c.bound - c.lhs;
  r["ratio"] = c.lhs / c.bound;
  r["verdict"] = c.verdict;
  return {r, c.verdict};
}

Json constants_json(int digits) {
  const auto& c = certified_constants();
  auto entry = [&](const char* name, const Rational& v, const char* direction, const char* use) {
    Json j;
    j["name"] = name;
    j["value"] = to_fraction_string(v);
    j["decimal"] = std::string(direction) == "lower" ? decimal_down(v, digits) : decimal_up(v, digits);
    j["direction"] = direction;
    j["use"] = use;
    return j;
  };
  Json out = Json::array();
  out.push_back(entry("e", c.e_lower, "lower", "first term 2/(e L_1) bounded above"));
  out.push_back(entry("e", c.e_upper, "upper", "first term bounded below in lower partial sums"));
  out.push_back(entry("pi", c.pi_lower, "lower", "central binomial estimate"));
  out.push_back(entry("sqrt(pi)", c.sqrt_pi_lower, "lower", "central binomial estimate"));
  out.push_back(entry("sqrt(2)", c.sqrt2_lower, "lower", "geometric tail ratio"));
  return out;
}

Outcome cmd_certify(Context& ctx) {
  const auto schedule = Schedule::parse(ctx.o.schedule);
  const int digits = ctx.o.digits;
  if (digits < 1 || digits > 200) throw ValidationError("--digits must lie in [1, 200]");
  ctx.config["schedule"] = schedule.describe();
  ctx.config["digits"] = digits;
  std::ostringstream log;
  Json r;
  r["schedule"] = schedule.describe();

  if (ctx.o.closed_form) {
    if (schedule.kind() != Schedule::Kind::constant || schedule.at(1) != 6) {
      throw ValidationError("--closed-form applies to const:6 only");
    }
    ctx.config["closed_form"] = true;
    const auto c = closed_form_L6();
    Json coeffs = Json::array();
    for (const auto& b : c.coefficients) coeffs.push_back(b.get_ui());
    r["value"] = to_fraction_string(c.value);
    r["value_decimal"] = decimal_down(c.value, digits);
    r["equals_23_48"] = c.equals_23_48;
    r["below_half"] = c.below_half;
    r["verdict"] = c.below_half ? "below-half" : "not-below-half";
    r["coefficients"] = coeffs;
    r["coefficient_bound_holds"] = c.coefficient_bound_holds;
    r["bound_checked_through"] = c.bound_checked_through;
    r["series_upper_direct"] = to_fraction_string(c.series_upper_direct);
    log << "constant L = 6, closed form\n";
    for (std::size_t j = 0; j < c.coefficients.size(); ++j) {
      log << "  coefficient of L^-" << j + 1 << " = " << c.coefficients[j].get_str() << "\n";
    }
    log << "  binom(2^i-1, j) <= 2^(2j-1) for j = 5.." << c.bound_checked_through << ": "
        << (c.coefficient_bound_holds ? "holds" : "FAILS") << "\n";
    log << "  value = " << to_fraction_string(c.value) << (c.below_half ? " < 1/2" : " >= 1/2") << "\n";
    if (!ctx.o.proof_log.empty()) {
      std::ofstream f(ctx.o.proof_log);
      if (!f) throw ValidationError("cannot open proof log " + ctx.o.proof_log);
      f << log.str();
    }
    return {r, c.below_half && c.equals_23_48};
  }

  ctx.config["i_max"] = ctx.o.i_max;
  ctx.config["exact_limit"] = ctx.o.exact_limit;
  ctx.config["exact_fractions"] = ctx.o.exact_fractions;
  const auto rep = series_rhs(schedule, ctx.o.i_max, ctx.o.exact_limit);
  r["i_max"] = rep.i_max;
  r["exact_limit"] = rep.exact_limit;
  r["constants"] = constants_json(digits);
  log << "schedule " << rep.schedule << ", i_max " << rep.i_max << ", exact blocks through "
      << std::min(rep.i_max, rep.exact_limit) << "\n";
  log << "all terms are upper bounds; decimals are rounded up\n";

  Json terms = Json::array();
  for (const auto& t : rep.terms) {
    Json tj;
    tj["i"] = t.i;
    tj["exponent"] = to_fraction_string(t.exponent);
    tj["kind"] = to_string(t.kind);
    tj["direction"] = t.kind == TermKind::exact ? "exact" : "upper";
    tj["value_upper"] = decimal_up(t.value, digits);
    if (ctx.o.exact_fractions) tj["value"] = to_fraction_string(t.value);
    terms.push_back(std::move(tj));
    log << "i=" << t.i << " L=" << to_fraction_string(t.exponent) << " " << to_string(t.kind) << " <= "
        << decimal_up(t.value, digits) << "\n";
  }
  r["terms"] = std::move(terms);
  r["partial_sum_upper"] = decimal_up(rep.partial_sum, digits);
  if (ctx.o.exact_fractions) r["partial_sum"] = to_fraction_string(rep.partial_sum);
  if (rep.tail) {
    r["tail_upper"] = decimal_up(*rep.tail, digits);
    log << "tail i>" << rep.i_max << " L>=" << to_fraction_string(schedule.min_from(rep.i_max + 1)) << " <= "
        << decimal_up(*rep.tail, digits) << "\n";
  } else {
    r["tail_upper"] = nullptr;
    log << "tail i>" << rep.i_max << ": no certified bound (some L_i < 4)\n";
  }
  r["total_upper"] = rep.total_upper ? Json(decimal_up(*rep.total_upper, digits)) : Json(nullptr);
  if (rep.total_upper && ctx.o.exact_fractions) r["total"] = to_fraction_string(*rep.total_upper);
  r["below_half"] = rep.below_half;
  r["verdict"] = rep.below_half ? "below-half" : "not-below-half";
  r["exceeds_half_at"] = rep.exceeds_half_at ? Json(*rep.exceeds_half_at) : Json(nullptr);
  r["lower_partial_at_exceed"] =
      rep.lower_partial_at_exceed ? Json(decimal_down(*rep.lower_partial_at_exceed, digits)) : Json(nullptr);
  if (rep.total_upper) log << "total <= " << decimal_up(*rep.total_upper, digits) << "\n";
  if (rep.exceeds_half_at) {
    log << "lower partial sum through i=" << *rep.exceeds_half_at << " >= "
        << decimal_down(*rep.lower_partial_at_exceed, digits) << " > 1/2\n";
  }
  log << "verdict " << (rep.below_half ? "below-half" : "not-below-half") << "\n";
  if (!ctx.o.proof_log.empty()) {
    std::ofstream f(ctx.o.proof_log);
    if (!f) throw ValidationError("cannot open proof log " + ctx.o.proof_log);
    f << log.str();
  }
  return {r, rep.below_half};
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open output file " + path);
  f << text;
}

// Options shared by every command that reads a family.
void add_family_input(CLI::App* sub, Options& o) {
  sub->add_option("family", o.family_path, "Family file (JSON), or - for stdin");
  sub->add_option("--gen", o.gen, "Generate the family instead: clique:v,k, matching:v, star:v,d, cycle:v,k, "
                                  "path:v,k, random:n,count,ell");
}

void add_report_output(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("-o,--output", o.output, "Write the report to this file instead of stdout");
  sub->add_option("--caps", o.caps, "Cap overrides key=value,... (applied over THRESHOLD_LAB_CAPS)");
}

void add_seed(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Seed; generated and printed to stderr when absent");
}

void add_mc(CLI::App* sub, Options& o) {
  sub->add_option("--mode", o.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  sub->add_option("--trials", o.trials, "Monte Carlo trials (prob 100000, pc 20000 by default)");
  sub->add_option("--confidence", o.confidence, "Confidence level of the Hoeffding interval");
  sub->add_option("--threads", o.threads, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"threshold-lab: thresholds, covers, fragmentation and certified constants for up-sets", "threshold-lab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);

  std::vector<std::pair<CLI::App*, std::function<Outcome(Context&)>>> commands;
  auto command = [&](const char* name, const char* help, auto handler) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, handler);
    return sub;
  };

  auto* info = command("info", "Family summary: n, |H|, |minimal|, ell, antichain", cmd_info);
  add_family_input(info, o);
  add_seed(info, o);
  add_report_output(info, o);

  auto* cost = command("cost", "e_q, c_q with a witness cover, and the q-small verdict", cmd_cost);
  add_family_input(cost, o);
  add_seed(cost, o);
  add_report_output(cost, o);
  cost->add_option("--q", o.q, "q: scalar, comma list, or 'file'");
  cost->add_flag("--greedy", o.greedy, "Greedy upper bound instead of the exact solver");
  cost->add_flag("--rational", o.rational, "Exact rational arithmetic; --q given as fractions or decimals");
  cost->add_flag("--assert", o.check, "Exit 4 unless the family is q-small");

  auto* prob = command("prob", "Pr[X_p in <F>]", cmd_prob);
  add_family_input(prob, o);
  add_seed(prob, o);
  add_report_output(prob, o);
  prob->add_option("--p", o.p, "p: scalar, comma list, or 'file'");
  add_mc(prob, o);

  auto* pc = command("pc", "Bracket for the probability threshold p_c", cmd_pc);
  add_family_input(pc, o);
  add_seed(pc, o);
  add_report_output(pc, o);
  pc->add_option("--tol", o.tol, "Bracket width");
  pc->add_flag("--mc-fallback", o.mc_fallback, "Use Monte Carlo when n exceeds the exact cap");
  pc->add_flag("--assert", o.check, "Exit 4 if the bracket is unresolved");
  add_mc(pc, o);

  auto* qc = command("qc", "Bracket for the expectation threshold q_c", cmd_qc);
  add_family_input(qc, o);
  add_seed(qc, o);
  add_report_output(qc, o);
  qc->add_option("--tol", o.tol, "Bracket width");

  auto* kk = command("kk", "p_c / q_c against 4 log2(7 ell) and 4 log2(2 ell) + 7", cmd_kk);
  add_family_input(kk, o);
  add_seed(kk, o);
  add_report_output(kk, o);
  kk->add_option("--tol", o.tol, "Bracket width");
  kk->add_flag("--assert", o.check, "Exit 4 unless both bounds hold");

  auto* frag = command("fragment", "One step: fragments, minimal fragments and the large/small split", cmd_fragment);
  add_family_input(frag, o);
  add_seed(frag, o);
  add_report_output(frag, o);
  frag->add_option("--w", o.w, "Revealed set as a comma list of elements");
  frag->add_option("--q", o.q, "Sample W from X_q instead");
  frag->add_option("--m", o.m, "Size threshold for the large part")->check(CLI::NonNegativeNumber);

  auto* sim = command("simulate", "Repeated runs of the fragmentation process", cmd_simulate);
  add_family_input(sim, o);
  add_seed(sim, o);
  add_report_output(sim, o);
  sim->add_option("--q", o.q, "q: scalar, comma list, or 'file'");
  sim->add_option("--schedule", o.schedule, "standard, const:L or custom:L1,L2,...");
  sim->add_option("--trials", o.trials, "Number of process runs (default 1000)");
  sim->add_option("--confidence", o.confidence, "Confidence level of the Hoeffding intervals");
  sim->add_option("--threads", o.threads, "Worker threads; results do not depend on it");
  sim->add_flag("--costs", o.costs, "Compute cover costs in every round");
  sim->add_option("--trace-out", o.trace_out, "Write one JSON line per run");
  sim->add_flag("--assert", o.check, "Exit 4 on any invariant violation");

  auto* verify = command("verify", "Exact check of the fragmentation lemmas", cmd_verify);
  add_family_input(verify, o);
  add_seed(verify, o);
  add_report_output(verify, o);
  verify->add_option("--lemma", o.lemma, "1 (large-part expectation) or 2 (singletons)")
      ->check(CLI::IsMember({1, 2}));
  verify->add_option("--q", o.q, "q: scalar, comma list, or 'file'");
  verify->add_option("--L", o.exponent, "Amplification exponent L >= 1 (e.g. 4.5 or 9/2)");
  verify->add_option("--m", o.m, "Size threshold for lemma 1")->check(CLI::PositiveNumber);
  verify->add_flag("--assert", o.check, "Exit 4 if the inequality fails");

  auto* certify = command("certify", "Certified bound on the schedule series", cmd_certify);
  certify->add_option("schedule", o.schedule, "standard, const:L or custom:L1,L2,...");
  certify->add_option("--i-max", o.i_max, "Blocks summed before the tail bound");
  certify->add_option("--exact-limit", o.exact_limit, "Last block computed exactly");
  certify->add_option("--digits", o.digits, "Decimal digits in the report");
  certify->add_flag("--closed-form", o.closed_form, "Closed form for const:6");
  certify->add_flag("--exact", o.exact_fractions, "Include exact fractions");
  certify->add_option("--proof-log", o.proof_log, "Write a human-readable proof log");
  certify->add_flag("--assert", o.check, "Exit 4 unless the bound is below 1/2");
  add_report_output(certify, o);

  auto* gen = app.add_subcommand("gen", "Write a generated family file");
  gen->add_option("descriptor", o.descriptor, "clique:v,k, matching:v, star:v,d, cycle:v,k, path:v,k, random:n,count,ell")
      ->required();
  add_seed(gen, o);
  gen->add_option("-o,--output", o.output, "Write the family file here instead of stdout");

  std::vector<const char*> argv{"threshold-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationError;
  }

  try {
    if (gen->parsed()) {
      Context ctx(o, *gen, in, err);
      const bool random = o.descriptor.starts_with("random:");
      const auto family = generate_family(o.descriptor, random ? ctx.seed() : 1);
      write_text(serialize_family(family) + "\n", o.output, out);
      return kSuccess;
    }
    for (auto& [sub, handler] : commands) {
      if (!sub->parsed()) continue;
      Context ctx(o, *sub, in, err);
      Outcome outcome = handler(ctx);
      ctx.config["format"] = o.format;
      Json report;
      report["tool"] = "threshold-lab";
      report["version"] = kVersion;
      report["command"] = sub->get_name();
      report["config"] = ctx.config;
      report["result"] = std::move(outcome.result);
      if (outcome.verdict) report["verdict"] = *outcome.verdict;
      write_text(o.format == "csv" ? to_csv(report) : report.dump(2) + "\n", o.output, out);
      if (o.check && outcome.verdict && !*outcome.verdict) {
        err << "threshold-lab: assertion failed for " << sub->get_name() << "\n";
        return kAssertFailed;
      }
      return kSuccess;
    }
  } catch (const ValidationError& e) {
    err << "threshold-lab: error: " << e.what() << "\n";
    return kValidationError;
  } catch (const CapExceeded& e) {
    err << "threshold-lab: cap exceeded: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const std::exception& e) {
    err << "threshold-lab: internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace threshold_lab::cli
