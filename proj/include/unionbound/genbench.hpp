#pragma once

#include "unionbound/core.hpp"
#include "unionbound/registry.hpp"

#include <cstdint>
#include <ostream>
#include <random>

namespace unionbound {

enum class Family { random, disjoint, identical, nested, near_singular };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::random: return "random";
    case Family::disjoint: return "disjoint";
    case Family::identical: return "identical";
    case Family::nested: return "nested";
    case Family::near_singular: return "near-singular";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "random") return Family::random;
  if (s == "disjoint") return Family::disjoint;
  if (s == "identical") return Family::identical;
  if (s == "nested") return Family::nested;
  if (s == "near-singular" || s == "near_singular") return Family::near_singular;
  throw std::invalid_argument(
      "unknown family '" + s +
      "'; valid: random disjoint identical nested near-singular");
}

// Deterministic uniforms on top of mt19937_64. The 53-bit mantissa
// construction keeps streams identical across platforms, where the standard
// distributions are implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  double unit() { return double(engine_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t integer(std::uint64_t bound) { return engine_() % bound; }
  bool coin(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

inline constexpr const char* kRngIdentifier = "mt19937_64/u53";

struct GeneratorConfig {
  int n_events = 4;
  int n_atoms = 16;
  std::uint64_t seed = 0;
  double membership_density = 0.3;
  Family family = Family::random;
};

namespace detail {

inline void validate_config(const GeneratorConfig& cfg) {
  if (cfg.n_events < 1) throw std::invalid_argument("n_events must be at least 1");
  if (cfg.n_atoms < 1) throw std::invalid_argument("n_atoms must be at least 1");
  if (!(cfg.membership_density > 0.0) || !(cfg.membership_density < 1.0))
    throw std::invalid_argument("membership density must lie strictly in (0, 1)");
  if (cfg.family == Family::disjoint && cfg.n_atoms < cfg.n_events)
    throw std::invalid_argument("disjoint family needs at least one atom per event");
  if (cfg.family == Family::near_singular && cfg.n_events < 2)
    throw std::invalid_argument("near-singular family needs at least two events");
}

// Positive masses with a total drawn in [0.5, 0.95]; the slack below one
// leaves room for the near-singular perturbation.
inline Eigen::VectorXd draw_masses(SeededRng& rng, int m) {
  Eigen::VectorXd masses(m);
  for (int w = 0; w < m; ++w) masses[w] = 0.05 + 0.95 * rng.unit();
  masses *= rng.range(0.5, 0.95) / masses.sum();
  return masses;
}

inline void fill_random_membership(SeededRng& rng, BoolMatrix& memb, double density) {
  for (Eigen::Index i = 0; i < memb.rows(); ++i) {
    for (Eigen::Index w = 0; w < memb.cols(); ++w) memb(i, w) = rng.coin(density);
    if (!memb.row(i).any()) memb(i, rng.integer(memb.cols())) = true;
  }
}

}  // namespace detail

// Deterministic instance generator: equal configs give identical systems.
inline EventSystem<double> generate(const GeneratorConfig& cfg) {
  detail::validate_config(cfg);
  SeededRng rng(cfg.seed);
  const int n = cfg.n_events, m = cfg.n_atoms;
  Eigen::VectorXd masses = detail::draw_masses(rng, m);
  BoolMatrix memb = BoolMatrix::Constant(n, m, false);
  switch (cfg.family) {
    case Family::random:
      detail::fill_random_membership(rng, memb, cfg.membership_density);
      break;
    case Family::disjoint: {
      // Contiguous blocks of atoms, one per event; remainders widen the
      // first blocks.
      const int base = m / n, extra = m % n;
      int at = 0;
      for (int i = 0; i < n; ++i) {
        const int len = base + (i < extra ? 1 : 0);
        for (int w = at; w < at + len; ++w) memb(i, w) = true;
        at += len;
      }
      break;
    }
    case Family::identical: {
      for (int w = 0; w < m; ++w) memb(0, w) = rng.coin(cfg.membership_density);
      if (!memb.row(0).any()) memb(0, rng.integer(m)) = true;
      for (int i = 1; i < n; ++i) memb.row(i) = memb.row(0);
      break;
    }
    case Family::nested: {
      // Prefix lengths sorted descending: each event contains the next.
      std::vector<int> len(n);
      for (int i = 0; i < n; ++i) len[i] = 1 + int(rng.integer(m));
      std::sort(len.begin(), len.end(), std::greater<int>());
      for (int i = 0; i < n; ++i)
        for (int w = 0; w < len[i]; ++w) memb(i, w) = true;
      break;
    }
    case Family::near_singular: {
      // A random system whose last event duplicates an earlier one, then a
      // single atom mass is nudged so the system is close to degenerate
      // rather than exactly so.
      BoolMatrix head = memb.topRows(n - 1);
      detail::fill_random_membership(rng, head, cfg.membership_density);
      memb.topRows(n - 1) = head;
      memb.row(n - 1) = memb.row(int(rng.integer(n - 1)));
      masses[rng.integer(m)] += 1e-8;
      break;
    }
  }
  return EventSystem<double>(std::move(masses), std::move(memb));
}

// One benchmarked instance: identity, exact union when atoms are known,
// bound results with competition ranks within each direction (1 = tightest,
// ties share a rank), and names of bounds caught on the wrong side of the
// exact value.
struct ComparisonRow {
  std::uint64_t seed = 0;
  Family family = Family::random;
  Eigen::Index n_events = 0;
  Eigen::Index n_atoms = 0;
  bool has_exact = false;
  double exact = 0;
  std::vector<BoundResult<double>> bounds;
  std::vector<int> ranks;
  std::vector<std::string> violations;
};

struct ComparisonReport {
  std::string generator_note;  // provenance line for the report header
  std::vector<std::string> bound_names;
  std::vector<ComparisonRow> rows;
};

namespace detail {

inline void rank_and_flag(ComparisonRow& row) {
  const auto& bs = row.bounds;
  row.ranks.assign(bs.size(), 1);
  for (std::size_t i = 0; i < bs.size(); ++i)
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (i == j || bs[i].direction != bs[j].direction) continue;
      const bool tighter = bs[i].direction == Direction::lower
                               ? bs[j].value > bs[i].value
                               : bs[j].value < bs[i].value;
      if (tighter) ++row.ranks[i];
    }
  if (!row.has_exact) return;
  for (const auto& b : bs) {
    const bool bad = b.direction == Direction::lower
                         ? b.value > row.exact + kUserTolerance
                         : b.value < row.exact - kUserTolerance;
    if (bad) row.violations.push_back(b.name);
  }
}

}  // namespace detail

inline ComparisonRow compare(const EventSystem<double>& es,
                             const std::vector<std::string>& names) {
  ComparisonRow row;
  row.n_events = es.event_count();
  row.n_atoms = es.atom_count();
  row.has_exact = true;
  row.exact = union_probability(es);
  const MomentSummary<double> ms = summarize(es);
  for (const auto& name : names) row.bounds.push_back(find_bound(name).evaluate(ms));
  detail::rank_and_flag(row);
  return row;
}

inline ComparisonReport batch(const GeneratorConfig& cfg, int count,
                              const std::vector<std::string>& names) {
  if (count < 0) throw std::invalid_argument("count must be non-negative");
  ComparisonReport report;
  report.bound_names = names;
  report.generator_note =
      std::string("rng=") + kRngIdentifier + " seed=" + std::to_string(cfg.seed) +
      " family=" + to_string(cfg.family) + " n_events=" + std::to_string(cfg.n_events) +
      " n_atoms=" + std::to_string(cfg.n_atoms) +
      " density=" + detail::format_significant(cfg.membership_density, 6) +
      " count=" + std::to_string(count);
  for (int t = 0; t < count; ++t) {
    GeneratorConfig c = cfg;
    c.seed = cfg.seed + std::uint64_t(t);
    ComparisonRow row = compare(generate(c), names);
    row.seed = c.seed;
    row.family = c.family;
    report.rows.push_back(std::move(row));
  }
  return report;
}

// Aggregates for the report footer: mean distance to the exact value and
// how often each bound was the tightest of its direction (ties count for
// every tied bound).
struct BoundStats {
  std::string name;
  Direction direction = Direction::lower;
  double mean_gap = 0;
  int wins = 0;
  int clamped_count = 0;
};

inline std::vector<BoundStats> summarize_report(const ComparisonReport& report) {
  std::vector<BoundStats> stats;
  if (report.rows.empty()) return stats;
  const std::size_t nb = report.rows.front().bounds.size();
  stats.resize(nb);
  int with_exact = 0;
  for (const auto& row : report.rows)
    if (row.has_exact) ++with_exact;
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& first = report.rows.front().bounds[b];
    stats[b].name = first.name;
    stats[b].direction = first.direction;
    for (const auto& row : report.rows) {
      const auto& res = row.bounds[b];
      if (row.has_exact)
        stats[b].mean_gap += res.direction == Direction::lower ? row.exact - res.value
                                                               : res.value - row.exact;
      if (row.ranks[b] == 1) ++stats[b].wins;
      if (res.clamped) ++stats[b].clamped_count;
    }
    if (with_exact > 0) stats[b].mean_gap /= with_exact;
  }
  return stats;
}

namespace detail {

inline std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::vector<std::string> clamped_names(const ComparisonRow& row) {
  std::vector<std::string> out;
  for (const auto& b : row.bounds)
    if (b.clamped) out.push_back(b.name);
  return out;
}

inline void write_summary_lines(const ComparisonReport& report, std::ostream& out,
                                const char* prefix) {
  const auto stats = summarize_report(report);
  if (stats.empty()) return;
  out << prefix << "mean_gap";
  for (const auto& s : stats) out << " " << s.name << "=" << format_significant(s.mean_gap, 6);
  out << "\n" << prefix << "wins";
  for (const auto& s : stats) out << " " << s.name << "=" << s.wins;
  out << "\n" << prefix << "clamped";
  for (const auto& s : stats) out << " " << s.name << "=" << s.clamped_count;
  out << "\n";
}

}  // namespace detail

// CSV with `#` comment lines for provenance (header) and aggregate stats
// (footer). Machine columns carry 12 significant digits.
inline void write_csv(const ComparisonReport& report, std::ostream& out) {
  auto num = [](double x) { return detail::format_significant(x, 12); };
  out << "# union bound comparison\n";
  if (!report.generator_note.empty()) out << "# generator: " << report.generator_note << "\n";
  out << "index,seed,family,n_events,n_atoms,exact";
  for (const auto& n : report.bound_names) out << "," << n;
  for (const auto& n : report.bound_names) out << ",rank_" << n;
  out << ",clamped,violations\n";
  for (std::size_t t = 0; t < report.rows.size(); ++t) {
    const auto& row = report.rows[t];
    out << t << "," << row.seed << "," << to_string(row.family) << ","
        << row.n_events << "," << row.n_atoms << ","
        << (row.has_exact ? num(row.exact) : std::string());
    for (const auto& b : row.bounds) out << "," << num(b.value);
    for (int r : row.ranks) out << "," << r;
    out << "," << detail::join(detail::clamped_names(row), ";")
        << "," << detail::join(row.violations, ";") << "\n";
  }
  detail::write_summary_lines(report, out, "# ");
}

// Markdown table with 6 significant digits and a bulleted aggregate block.
inline void write_markdown(const ComparisonReport& report, std::ostream& out) {
  auto num = [](double x) { return detail::format_significant(x, 6); };
  out << "# Union bound comparison\n\n";
  if (!report.generator_note.empty())
    out << "Generator: `" << report.generator_note << "`\n\n";
  out << "| index | seed | family | n_events | n_atoms | exact |";
  for (const auto& n : report.bound_names) out << " " << n << " |";
  out << " clamped | violations |\n|";
  for (std::size_t c = 0; c < report.bound_names.size() + 8; ++c) out << " --- |";
  out << "\n";
  for (std::size_t t = 0; t < report.rows.size(); ++t) {
    const auto& row = report.rows[t];
    out << "| " << t << " | " << row.seed << " | " << to_string(row.family) << " | "
        << row.n_events << " | " << row.n_atoms << " | "
        << (row.has_exact ? num(row.exact) : std::string("-")) << " |";
    for (const auto& b : row.bounds) out << " " << num(b.value) << " |";
    const auto clamped = detail::join(detail::clamped_names(row), ";");
    const auto viols = detail::join(row.violations, ";");
    out << " " << (clamped.empty() ? "-" : clamped) << " | "
        << (viols.empty() ? "-" : viols) << " |\n";
  }
  out << "\n";
  const auto stats = summarize_report(report);
  for (const auto& s : stats)
    out << "- " << s.name << ": mean gap " << num(s.mean_gap) << ", tightest in "
        << s.wins << "/" << report.rows.size() << " rows, clamped in "
        << s.clamped_count << "\n";
}

}  // namespace unionbound
