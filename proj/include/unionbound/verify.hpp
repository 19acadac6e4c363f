#pragma once

#include "unionbound/algorithmic_bounds.hpp"
#include "unionbound/closed_bounds.hpp"
#include "unionbound/genbench.hpp"
#include "unionbound/gk.hpp"
#include "unionbound/io.hpp"
#include "unionbound/oracle.hpp"

namespace unionbound {

// One failed property: what broke, plus the offending instance as JSON so
// the case can be replayed through the CLI verbatim.
struct SuiteFailure {
  std::string message;
  nlohmann::json instance;
};

struct SuiteResult {
  std::string name;
  int cases = 0;
  std::vector<SuiteFailure> failures;

  bool passed() const { return failures.empty(); }
};

namespace detail {

// Instance stream shared by all suites: families cycle, sizes and densities
// vary, everything derives from the suite seed.
class InstanceStream {
 public:
  explicit InstanceStream(std::uint64_t seed) : meta_(seed), base_seed_(seed) {}

  EventSystem<double> next() {
    static constexpr Family kFamilies[] = {Family::random, Family::disjoint,
                                           Family::identical, Family::nested,
                                           Family::near_singular};
    static constexpr double kDensities[] = {0.15, 0.3, 0.5, 0.7};
    GeneratorConfig cfg;
    cfg.family = kFamilies[at_ % 5];
    cfg.n_events = 2 + int(meta_.integer(9));   // 2..10
    cfg.n_atoms = 4 + int(meta_.integer(29));   // 4..32
    if (cfg.n_atoms < cfg.n_events) cfg.n_atoms = cfg.n_events;
    cfg.membership_density = kDensities[meta_.integer(4)];
    cfg.seed = base_seed_ + std::uint64_t(at_);
    ++at_;
    return generate(cfg);
  }

 private:
  SeededRng meta_;
  std::uint64_t base_seed_;
  int at_ = 0;
};

class SuiteRun {
 public:
  SuiteRun(const char* name, std::uint64_t seed) : stream_(seed) { result_.name = name; }

  EventSystem<double> next_instance() {
    ++result_.cases;
    return stream_.next();
  }

  void check(bool ok, const std::string& message, const EventSystem<double>& es) {
    if (!ok) result_.failures.push_back({message, to_json(es)});
  }

  SuiteResult take() { return std::move(result_); }

 private:
  InstanceStream stream_;
  SuiteResult result_;
};

inline double bound_value(const std::vector<BoundResult<double>>& bs,
                          const std::string& name) {
  for (const auto& b : bs)
    if (b.name == name) return b.value;
  throw std::logic_error("bound missing from evaluation: " + name);
}

}  // namespace detail

// Sandwich validity plus the provable relations between the lower bounds
// and between the tree bounds.
inline SuiteResult verify_ordering(int count, std::uint64_t seed) {
  detail::SuiteRun run("ordering", seed);
  for (int t = 0; t < count; ++t) {
    const EventSystem<double> es = run.next_instance();
    const MomentSummary<double> ms = summarize(es);
    const double exact = union_probability(es);
    std::vector<BoundResult<double>> bs;
    for (const auto& name : default_bound_names(ms.size()))
      bs.push_back(find_bound(name).evaluate(ms));
    auto val = [&bs](const char* n) { return detail::bound_value(bs, n); };
    for (const auto& b : bs) {
      const bool ok = b.direction == Direction::lower
                          ? b.value <= exact + kUserTolerance
                          : b.value >= exact - kUserTolerance;
      run.check(ok, b.name + " = " + detail::format_significant(b.value, 12) +
                        " is on the wrong side of exact = " +
                        detail::format_significant(exact, 12),
                es);
    }
    run.check(val("kat") >= val("dc") - kInternalTolerance, "kat below dc", es);
    run.check(val("kat") >= val("ds") - kInternalTolerance, "kat below ds", es);
    run.check(val("kat") <= 1.125 * val("dc") + kInternalTolerance,
              "kat exceeds 9/8 of dc", es);
    run.check(val("ds") >= val("cs") - kInternalTolerance, "ds below cs", es);
    run.check(val("cs") >= val("frac") - kInternalTolerance, "cs below frac", es);
    run.check(val("kounias-exhaustive") >= val("bonferroni") - kInternalTolerance,
              "kounias-exhaustive below bonferroni", es);
    run.check(val("kounias-exhaustive") >= val("max") - kInternalTolerance,
              "kounias-exhaustive below max", es);
    run.check(val("kounias-stepwise") <= val("kounias-exhaustive") + kInternalTolerance,
              "kounias-stepwise above the exhaustive optimum", es);
    run.check(val("hunter-greedy") <= val("union") + kInternalTolerance,
              "hunter-greedy above the plain union bound", es);
    if (ms.size() <= kHunterExhaustiveCap)
      run.check(std::abs(val("hunter-greedy") - val("hunter-exhaustive")) <=
                    kInternalTolerance,
                "hunter-greedy differs from hunter-exhaustive", es);
  }
  return run.take();
}

// The incremental quadratic-form machinery agrees with itself across all
// its entry points: direct vs iterative, the Rayleigh identity at the
// solving coefficients, subset and prefix monotonicity, residual signs.
inline SuiteResult verify_gk_equivalence(int count, std::uint64_t seed) {
  detail::SuiteRun run("gk-equiv", seed);
  SeededRng rng(seed ^ 0x9e3779b97f4a7c15ull);
  for (int t = 0; t < count; ++t) {
    const EventSystem<double> es = run.next_instance();
    const MomentSummary<double> ms = summarize(es);
    const Eigen::Index n = ms.size();
    const BoundResult<double> direct = gk_direct(ms);
    const GkReport<double> rep = gk_iterative(ms);
    run.check(std::abs(direct.value - rep.value) <= 1e-8,
              "gk_direct and gk_iterative disagree", es);
    for (double r : rep.residuals)
      run.check(r >= -1e-9, "negative residual " + detail::format_significant(r, 6), es);
    run.check(int(rep.retained.size() + rep.skipped.size()) == int(n),
              "retained and skipped do not partition the events", es);
    const auto& c_solve = std::get<VectorX<double>>(direct.detail);
    run.check(std::abs(gk_rayleigh(ms, c_solve) - direct.value) <= 1e-9,
              "Rayleigh value at the solving coefficients misses the bound", es);
    for (int probe = 0; probe < 5; ++probe) {
      VectorX<double> c(n);
      for (Eigen::Index i = 0; i < n; ++i) c[i] = rng.range(0.1, 1.0);
      run.check(gk_rayleigh(ms, c) <= direct.value + 1e-9,
                "Rayleigh value exceeds the solved bound", es);
    }
    for (int probe = 0; probe < 3; ++probe) {
      IndexSubset sub;
      for (Eigen::Index i = 0; i < n; ++i)
        if (rng.coin(0.5)) sub.indices.push_back(int(i));
      if (sub.indices.empty()) sub.indices.push_back(int(rng.integer(n)));
      run.check(gk_subset(ms, sub).value <= direct.value + 1e-9,
                "subset bound exceeds the full bound", es);
    }
    double prev = 0;
    for (Eigen::Index p = 0; p < n; ++p) {
      IndexSubset prefix;
      for (Eigen::Index i = 0; i <= p; ++i) prefix.indices.push_back(int(i));
      const double v = gk_subset(ms, prefix).value;
      run.check(v >= prev - 1e-10, "bound decreased when events were added", es);
      prev = v;
    }
  }
  return run.take();
}

// The closed-form optima are attained: reconstructed systems hit the bound
// values exactly and reproduce the summary moments they were built from.
inline SuiteResult verify_achievability(int count, std::uint64_t seed) {
  detail::SuiteRun run("achievability", seed);
  for (int t = 0; t < count; ++t) {
    const EventSystem<double> es = run.next_instance();
    const MomentSummary<double> ms = summarize(es);
    {
      const EventSystem<double> ach = construct_ds_achiever(ms);
      const MomentSummary<double> back = summarize(ach);
      run.check(std::abs(back.theta1 - ms.theta1) <= 1e-10,
                "ds achiever does not reproduce theta1", es);
      run.check(std::abs(back.theta2 - ms.theta2) <= 1e-10,
                "ds achiever does not reproduce theta2", es);
      run.check(std::abs(union_probability(ach) - ds_lower(ms).value) <=
                    kInternalTolerance,
                "ds achiever union misses the ds value", es);
    }
    {
      const int n = int(ms.size());
      const EventSystem<double> ach = construct_frac_achiever(ms.theta1, n);
      run.check(std::abs(union_probability(ach) - frac_lower(ms).value) <=
                    kInternalTolerance,
                "frac achiever union misses theta1 / n", es);
      run.check(std::abs(summarize(ach).theta1 - ms.theta1) <= 1e-10,
                "frac achiever does not reproduce theta1", es);
    }
    {
      const EventSystem<double> ach = construct_max_achiever(ms.alpha);
      run.check(std::abs(union_probability(ach) - max_lower(ms).value) <=
                    kInternalTolerance,
                "max achiever union misses the largest alpha", es);
      const VectorX<double> back = summarize(ach).alpha;
      run.check((back - ms.alpha).cwiseAbs().maxCoeff() <= kInternalTolerance,
                "max achiever does not reproduce alpha", es);
    }
  }
  return run.take();
}

// The closed forms match an independent vertex-enumeration solver for the
// optimization problems they claim to solve.
inline SuiteResult verify_oracle_agreement(int count, std::uint64_t seed) {
  detail::SuiteRun run("oracle-agreement", seed);
  for (int t = 0; t < count; ++t) {
    const EventSystem<double> es = run.next_instance();
    const MomentSummary<double> ms = summarize(es);
    TwoMomentInstance<double> inst;
    inst.m1 = ms.theta1;
    inst.m2 = 2.0 * ms.theta2 + ms.theta1;
    inst.n = int(ms.size());
    const auto lp = two_moment_min(inst);
    run.check(std::abs(lp.value - ds_lower(ms).value) <= 1e-10,
              "ds disagrees with the two-moment program", es);
    run.check(lp.value >= inst.m1 * inst.m1 / inst.m2 - kInternalTolerance,
              "two-moment optimum undercuts its Cauchy-Schwarz floor", es);
    double kat_sum = 0;
    for (Eigen::Index i = 0; i < ms.size(); ++i)
      kat_sum += kat_subproblem_min(ms.alpha[i], ms.gamma[i], int(ms.size())).value;
    run.check(std::abs(kat_sum - kat_lower(ms).value) <= 1e-10,
              "kat disagrees with its per-event programs", es);
  }
  return run.take();
}

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"ordering", "gk-equiv",
                                                 "achievability", "oracle-agreement"};
  return names;
}

inline SuiteResult run_verify_suite(const std::string& name, int count,
                                    std::uint64_t seed) {
  if (name == "ordering") return verify_ordering(count, seed);
  if (name == "gk-equiv" || name == "gk-iterative-equivalence")
    return verify_gk_equivalence(count, seed);
  if (name == "achievability") return verify_achievability(count, seed);
  if (name == "oracle-agreement") return verify_oracle_agreement(count, seed);
  std::string msg = "unknown suite '" + name + "'; valid names:";
  for (const auto& s : verify_suite_names()) msg += " " + s;
  msg += " all";
  throw std::invalid_argument(msg);
}

}  // namespace unionbound
