// Command-line front end: evaluate bounds on instance files, generate and
// benchmark random instances, and run the self-check suites.
//
// Exit codes: 0 success, 1 I/O, parse, or flag errors, 2 input validation
// errors, 3 self-check property failures.

#include "unionbound/genbench.hpp"
#include "unionbound/io.hpp"
#include "unionbound/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace unionbound;

namespace {

std::vector<std::string> parse_bound_list(const std::string& arg, Eigen::Index n_events) {
  if (arg == "default") return default_bound_names(n_events);
  if (arg == "all") return bound_names();
  std::vector<std::string> names;
  std::size_t at = 0;
  while (at <= arg.size()) {
    const std::size_t comma = arg.find(',', at);
    const std::string name =
        arg.substr(at, comma == std::string::npos ? std::string::npos : comma - at);
    if (!name.empty()) names.push_back(find_bound(name).name);
    if (comma == std::string::npos) break;
    at = comma + 1;
  }
  if (names.empty()) throw std::invalid_argument("empty bound list");
  return names;
}

nlohmann::json detail_json(const BoundResult<double>& b) {
  if (const auto* s = std::get_if<IndexSubset>(&b.detail)) {
    return nlohmann::json{{"indices", s->indices}};
  }
  if (const auto* t = std::get_if<SpanningTree>(&b.detail)) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [i, j] : t->edges) edges.push_back({i, j});
    return nlohmann::json{{"edges", std::move(edges)}};
  }
  if (const auto* p = std::get_if<SupportPair>(&b.detail)) {
    return nlohmann::json{{"k1", p->k1}, {"k2", p->k2}};
  }
  if (const auto* c = std::get_if<VectorX<double>>(&b.detail)) {
    return nlohmann::json{{"coefficients", std::vector<double>(c->begin(), c->end())}};
  }
  return nullptr;
}

void print_results_table(std::ostream& out, const std::optional<double>& exact,
                         const std::vector<BoundResult<double>>& results) {
  if (exact) out << "exact = " << detail::format_significant(*exact, 6) << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %-6s %14s  %s", "bound", "dir", "value",
                "clamped");
  out << line << "\n";
  for (const auto& b : results) {
    std::snprintf(line, sizeof line, "%-20s %-6s %14s  %s", b.name.c_str(),
                  to_string(b.direction),
                  detail::format_significant(b.value, 6).c_str(),
                  b.clamped ? "yes" : "");
    out << line << "\n";
  }
}

void print_results_csv(std::ostream& out, const std::optional<double>& exact,
                       const std::vector<BoundResult<double>>& results) {
  if (exact) out << "# exact=" << detail::format_significant(*exact, 12) << "\n";
  out << "bound,direction,value,clamped\n";
  for (const auto& b : results)
    out << b.name << "," << to_string(b.direction) << ","
        << detail::format_significant(b.value, 12) << "," << (b.clamped ? 1 : 0)
        << "\n";
}

void print_results_markdown(std::ostream& out, const std::optional<double>& exact,
                            const std::vector<BoundResult<double>>& results) {
  if (exact) out << "Exact union probability: " << detail::format_significant(*exact, 6)
                 << "\n\n";
  out << "| bound | direction | value | clamped |\n| --- | --- | --- | --- |\n";
  for (const auto& b : results)
    out << "| " << b.name << " | " << to_string(b.direction) << " | "
        << detail::format_significant(b.value, 6) << " | " << (b.clamped ? "yes" : "-")
        << " |\n";
}

void print_results_json(std::ostream& out, const std::optional<double>& exact,
                        const std::vector<BoundResult<double>>& results) {
  nlohmann::json j;
  if (exact) j["exact"] = *exact;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : results) {
    nlohmann::json e{{"name", b.name},
                     {"direction", to_string(b.direction)},
                     {"value", b.value},
                     {"clamped", b.clamped}};
    const nlohmann::json d = detail_json(b);
    if (!d.is_null()) e["detail"] = d;
    arr.push_back(std::move(e));
  }
  j["bounds"] = std::move(arr);
  out << j.dump(2) << "\n";
}

struct ComputeOptions {
  std::string input;
  std::string bounds = "default";
  std::string format = "table";
};

int run_compute(const ComputeOptions& opt) {
  ParsedInstance inst;
  try {
    inst = load_instance(opt.input);
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::optional<double> exact;
  MomentSummary<double> ms;
  if (const auto* es = std::get_if<EventSystem<double>>(&inst)) {
    exact = union_probability(*es);
    ms = summarize(*es);
  } else {
    ms = std::get<MomentSummary<double>>(inst);
    const auto violations = validate_summary(ms);
    if (!violations.empty()) {
      std::cerr << "validation error: inconsistent moment summary\n";
      for (const auto& v : violations) std::cerr << "  " << v << "\n";
      return 2;
    }
  }
  std::vector<BoundResult<double>> results;
  try {
    for (const auto& name : parse_bound_list(opt.bounds, ms.size()))
      results.push_back(find_bound(name).evaluate(ms));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (opt.format == "table")
    print_results_table(std::cout, exact, results);
  else if (opt.format == "csv")
    print_results_csv(std::cout, exact, results);
  else if (opt.format == "md")
    print_results_markdown(std::cout, exact, results);
  else
    print_results_json(std::cout, exact, results);
  return 0;
}

struct GenerateOptions {
  std::string family = "random";
  int n_events = 4;
  int n_atoms = 16;
  std::uint64_t seed = 0;
  double density = 0.3;
  bool moments = false;
  std::string out;
};

int with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(std::cout);
    return 0;
  }
  std::ofstream f(path);
  if (!f) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return 1;
  }
  fn(f);
  return 0;
}

int run_generate(const GenerateOptions& opt) {
  try {
    GeneratorConfig cfg;
    cfg.family = parse_family(opt.family);
    cfg.n_events = opt.n_events;
    cfg.n_atoms = opt.n_atoms;
    cfg.seed = opt.seed;
    cfg.membership_density = opt.density;
    const EventSystem<double> es = generate(cfg);
    const nlohmann::json j = opt.moments ? to_json(summarize(es)) : to_json(es);
    return with_output(opt.out, [&j](std::ostream& out) { out << j.dump(2) << "\n"; });
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct BatchOptions {
  GenerateOptions gen;
  int count = 100;
  std::string bounds = "default";
  std::string format = "csv";
};

int run_batch(const BatchOptions& opt) {
  try {
    GeneratorConfig cfg;
    cfg.family = parse_family(opt.gen.family);
    cfg.n_events = opt.gen.n_events;
    cfg.n_atoms = opt.gen.n_atoms;
    cfg.seed = opt.gen.seed;
    cfg.membership_density = opt.gen.density;
    const auto names = parse_bound_list(opt.bounds, cfg.n_events);
    const ComparisonReport report = batch(cfg, opt.count, names);
    return with_output(opt.gen.out, [&](std::ostream& out) {
      if (opt.format == "csv")
        write_csv(report, out);
      else
        write_markdown(report, out);
    });
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct VerifyOptions {
  std::string suite = "all";
  int count = 200;
  std::uint64_t seed = 1;
};

int run_verify(const VerifyOptions& opt) {
  std::vector<std::string> suites;
  if (opt.suite == "all")
    suites = verify_suite_names();
  else
    suites.push_back(opt.suite);
  bool failed = false;
  try {
    for (const auto& name : suites) {
      const SuiteResult result = run_verify_suite(name, opt.count, opt.seed);
      if (result.passed()) {
        std::cout << "suite " << result.name << ": PASS (" << result.cases
                  << " instances)\n";
      } else {
        failed = true;
        std::cout << "suite " << result.name << ": FAIL (" << result.failures.size()
                  << " failures of " << result.cases << " instances)\n";
        std::size_t shown = 0;
        for (const auto& f : result.failures) {
          if (++shown > 5) {
            std::cout << "  ... " << result.failures.size() - 5 << " more\n";
            break;
          }
          std::cout << "  " << f.message << "\n  instance: " << f.instance.dump()
                    << "\n";
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds on the probability of a union of events from individual and "
               "pairwise probabilities"};
  app.require_subcommand(1);

  ComputeOptions compute_opt;
  auto* compute = app.add_subcommand("compute", "evaluate bounds on one instance file");
  compute->add_option("--input", compute_opt.input, "instance JSON (atoms or moments)")
      ->required();
  compute->add_option("--bounds", compute_opt.bounds,
                      "comma-separated bound names, 'default' (all applicable), or 'all'");
  compute->add_option("--format", compute_opt.format, "output format")
      ->check(CLI::IsMember({"table", "csv", "md", "json"}));

  BatchOptions batch_opt;
  auto* batch_cmd = app.add_subcommand("batch", "benchmark bounds on generated instances");
  batch_cmd->add_option("--family", batch_opt.gen.family,
                        "random, disjoint, identical, nested, or near-singular");
  batch_cmd->add_option("--n-events", batch_opt.gen.n_events, "events per instance");
  batch_cmd->add_option("--n-atoms", batch_opt.gen.n_atoms, "atoms per instance");
  batch_cmd->add_option("--seed", batch_opt.gen.seed, "seed of the first instance");
  batch_cmd->add_option("--density", batch_opt.gen.density, "membership density in (0,1)");
  batch_cmd->add_option("--count", batch_opt.count, "number of instances");
  batch_cmd->add_option("--bounds", batch_opt.bounds, "bound list as in compute");
  batch_cmd->add_option("--format", batch_opt.format, "report format")
      ->check(CLI::IsMember({"csv", "md"}));
  batch_cmd->add_option("--out", batch_opt.gen.out, "output file (default stdout)");

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "run self-check suites");
  verify->add_option("--suite", verify_opt.suite,
                     "ordering, gk-equiv, achievability, oracle-agreement, or all");
  verify->add_option("--count", verify_opt.count, "instances per suite");
  verify->add_option("--seed", verify_opt.seed, "suite seed");

  GenerateOptions gen_opt;
  auto* gen = app.add_subcommand("generate", "emit one instance as JSON");
  gen->add_option("--family", gen_opt.family,
                  "random, disjoint, identical, nested, or near-singular");
  gen->add_option("--n-events", gen_opt.n_events, "number of events");
  gen->add_option("--n-atoms", gen_opt.n_atoms, "number of atoms");
  gen->add_option("--seed", gen_opt.seed, "generator seed");
  gen->add_option("--density", gen_opt.density, "membership density in (0,1)");
  gen->add_flag("--moments", gen_opt.moments, "emit the moment summary instead of atoms");
  gen->add_option("--out", gen_opt.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*compute) return run_compute(compute_opt);
  if (*batch_cmd) return run_batch(batch_opt);
  if (*verify) return run_verify(verify_opt);
  return run_generate(gen_opt);
}
