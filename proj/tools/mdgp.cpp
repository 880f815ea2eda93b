// mdgp: solve, verify, generate and export maximally diverse grouping
// instances.
//
// Exit codes: 0 ok, 1 usage or input error, 2 verification failed,
// 3 search budget exhausted before optimality was proven.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mdgp/mdgp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitUnproven = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mdgp::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mdgp::Error("cannot write " + path);
  out << text;
}

mdgp::ParsedInstance load(const std::string& path, const std::string& metric) {
  auto parsed = mdgp::parse_instance(read_file(path), mdgp::parse_metric(metric));
  if (parsed.has_negative_distances) {
    std::cerr << "warning: " << path << " contains negative distances\n";
  }
  return parsed;
}

// Brute force within its cap, branch-and-bound beyond it.
double exact_optimum(const mdgp::Instance& instance) {
  if (instance.size() <= mdgp::kBruteforceCap) return mdgp::solve_bruteforce(instance).value;
  return mdgp::solve_bnb(instance).value;
}

double to_ms(std::chrono::nanoseconds d) { return std::chrono::duration<double, std::milli>(d).count(); }

mdgp::RunReport base_report(const mdgp::Instance& instance, std::string solver) {
  mdgp::RunReport r;
  r.n = instance.size();
  r.groups = instance.groups();
  r.min_size = instance.min_size();
  r.max_size = instance.max_size();
  r.solver = std::move(solver);
  return r;
}

void emit(const mdgp::RunReport& report, bool json) {
  if (json) {
    std::cout << mdgp::to_json(report).dump(2) << "\n";
  } else {
    std::cout << mdgp::to_text(report);
  }
}

struct SolveFlags {
  std::string input;
  std::string metric = "gower";
  std::string solver = "bnb";
  std::string model = "unequal";
  int restarts = 20;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_limit;
  std::optional<std::uint64_t> node_limit;
  int workers = 1;
  bool json = false;
  std::string export_lp;
  bool export_only = false;
  bool against_oracle = false;
};

int cmd_solve(const SolveFlags& f) {
  auto parsed = load(f.input, f.metric);
  const auto variant = mdgp::parse_model_variant(f.model);
  const auto& base = parsed.instance;

  if (!f.export_lp.empty()) {
    write_file(f.export_lp, mdgp::export_lp(mdgp::build_model(base, variant)));
    if (!f.json) std::cerr << "wrote " << mdgp::to_string(variant) << " model to " << f.export_lp << "\n";
  }
  if (f.export_only) {
    if (f.export_lp.empty()) throw mdgp::Error("--export-only needs --export-lp");
    return kExitOk;
  }

  if (variant == mdgp::ModelVariant::degree_only) {
    std::cerr << "error: the degree-only model has no partition semantics (it admits any number of groups), "
                 "so it cannot be solved as a grouping problem; run 'mdgp demonstrate' to see its optimum "
                 "of 16 on the worked counterexample\n";
    return kExitError;
  }

  // The equal-size model fixes every group at N/G elements.
  std::optional<mdgp::Instance> equal_sized;
  if (variant == mdgp::ModelVariant::equal) {
    if (base.size() % base.groups() != 0) {
      throw mdgp::FormulationError("equal-size formulation inapplicable: N=" + std::to_string(base.size()) +
                                   " is not divisible by G=" + std::to_string(base.groups()));
    }
    const int size = base.size() / base.groups();
    equal_sized.emplace(base.distances(), base.groups(), size, size);
  }
  const auto& instance = equal_sized ? *equal_sized : base;

  auto report = base_report(instance, f.solver);
  if (f.solver == "bruteforce") {
    const auto r = mdgp::solve_bruteforce(instance);
    report.value = r.value;
    report.grouping = r.grouping;
    report.proven = r.proven;
    report.nodes = r.nodes_explored;
    report.elapsed_ms = to_ms(r.elapsed);
  } else if (f.solver == "bnb") {
    mdgp::SolveOptions opts;
    opts.workers = f.workers;
    opts.node_limit = f.node_limit;
    if (f.time_limit) {
      opts.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(*f.time_limit * 1000.0));
      if (opts.time_limit->count() <= 0) throw mdgp::Error("--time-limit must be positive");
    }
    if (f.node_limit && *f.node_limit == 0) throw mdgp::Error("--node-limit must be positive");
    const auto r = mdgp::solve_bnb(instance, opts);
    report.value = r.value;
    report.grouping = r.grouping;
    report.proven = r.proven;
    report.nodes = r.nodes_explored;
    report.elapsed_ms = to_ms(r.elapsed);
  } else if (f.solver == "heuristic") {
    if (!f.seed) throw mdgp::Error("--solver heuristic requires --seed");
    if (f.restarts < 1) throw mdgp::Error("--restarts must be at least 1");
    const auto start = std::chrono::steady_clock::now();
    const auto r = mdgp::multistart(instance, f.restarts, *f.seed);
    report.elapsed_ms = to_ms(std::chrono::steady_clock::now() - start);
    report.value = r.value;
    report.grouping = r.grouping;
    report.proven = false;
    report.nodes = 0;
    if (f.against_oracle) report.gap = exact_optimum(instance) - r.value;
  } else {
    throw mdgp::Error("unknown solver '" + f.solver + "'");
  }

  emit(report, f.json);
  if (f.solver == "bnb" && !report.proven) return kExitUnproven;
  return kExitOk;
}

int cmd_demonstrate(bool json) {
  const auto d = mdgp::demonstrate(mdgp::counterexample_instance());
  if (json) {
    std::cout << mdgp::to_json(d).dump(2) << "\n";
  } else {
    std::cout << mdgp::to_text(d);
  }
  return kExitOk;
}

struct VerifyFlags {
  std::string input;
  std::string metric = "gower";
  std::string solution;
  bool against_oracle = false;
  bool json = false;
};

int cmd_verify(const VerifyFlags& f) {
  auto parsed = load(f.input, f.metric);
  const auto& instance = parsed.instance;
  mdgp::Grouping grouping;
  try {
    grouping = mdgp::parse_solution(read_file(f.solution), instance.size());
  } catch (const mdgp::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitVerifyFailed;
  }

  auto report = base_report(instance, "verify");
  const auto feas = mdgp::validate_grouping(grouping, instance);
  report.grouping = mdgp::canonicalize(grouping);
  report.value = mdgp::objective_value(report.grouping, instance.distances());
  report.feasible = feas.feasible;
  for (const auto& v : feas.violations) report.violations.push_back(v.describe());
  if (f.against_oracle) {
    if (instance.size() > mdgp::kBruteforceCap) {
      std::cerr << "warning: N exceeds the brute-force cap; gap computed with branch-and-bound\n";
    }
    if (feas.feasible) {
      report.gap = exact_optimum(instance) - report.value;
      report.proven = *report.gap <= 0.0;
    } else {
      std::cerr << "note: no gap for an infeasible solution\n";
    }
  }
  emit(report, f.json);
  return feas.feasible ? kExitOk : kExitVerifyFailed;
}

struct GenFlags {
  int n = 0, groups = 0, min_size = 0, max_size = 0;
  std::string kind = "uniform1d";
  int dims = 2;
  int num = 1;
  int cat = 1;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_gen(const GenFlags& f) {
  mdgp::GeneratorKind kind;
  if (f.kind == "uniform1d") {
    kind = mdgp::GeneratorKind::uniform1d();
  } else if (f.kind == "uniformkd") {
    kind = mdgp::GeneratorKind::uniform_kd(f.dims);
  } else if (f.kind == "mixed") {
    kind = mdgp::GeneratorKind::mixed(f.num, f.cat);
  } else {
    throw mdgp::Error("unknown generator kind '" + f.kind + "'");
  }
  const auto text = mdgp::gen_instance(f.n, f.groups, f.min_size, f.max_size, kind, f.seed);
  if (f.output.empty()) {
    std::cout << text;
  } else {
    write_file(f.output, text);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and heuristic solvers for the maximally diverse grouping problem"};
  app.require_subcommand(1);

  SolveFlags solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  solve_cmd->add_option("--input", solve.input, "Instance file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--metric", solve.metric, "Metric for ATTR instances")
      ->check(CLI::IsMember({"manhattan", "euclidean", "gower"}))
      ->capture_default_str();
  solve_cmd->add_option("--solver", solve.solver)
      ->check(CLI::IsMember({"bnb", "bruteforce", "heuristic"}))
      ->capture_default_str();
  solve_cmd->add_option("--model", solve.model, "Formulation to export / solve")
      ->check(CLI::IsMember({"equal", "unequal", "degree-only"}))
      ->capture_default_str();
  solve_cmd->add_option("--restarts", solve.restarts, "Heuristic restarts")->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed, "Heuristic seed");
  solve_cmd->add_option("--time-limit", solve.time_limit, "Branch-and-bound time budget in seconds");
  solve_cmd->add_option("--node-limit", solve.node_limit, "Branch-and-bound node budget");
  solve_cmd->add_option("--workers", solve.workers, "Branch-and-bound worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_flag("--json", solve.json, "Print a JSON report");
  solve_cmd->add_option("--export-lp", solve.export_lp, "Write the ILP model in LP format");
  solve_cmd->add_flag("--export-only", solve.export_only, "Only write the LP file");
  solve_cmd->add_flag("--against-oracle", solve.against_oracle, "Report the heuristic's gap to the optimum");

  bool demo_json = false;
  auto* demo_cmd = app.add_subcommand("demonstrate", "Reproduce the degree-bounds-only counterexample");
  demo_cmd->add_flag("--json", demo_json, "Print a JSON report");

  VerifyFlags verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a solution file against an instance");
  verify_cmd->add_option("--input", verify.input, "Instance file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--solution", verify.solution, "Solution file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--metric", verify.metric)
      ->check(CLI::IsMember({"manhattan", "euclidean", "gower"}))
      ->capture_default_str();
  verify_cmd->add_flag("--against-oracle", verify.against_oracle, "Report the gap to the exact optimum");
  verify_cmd->add_flag("--json", verify.json, "Print a JSON report");

  GenFlags gen;
  std::optional<std::uint64_t> gen_seed;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random ATTR instance");
  gen_cmd->add_option("--n", gen.n)->required();
  gen_cmd->add_option("--groups", gen.groups)->required();
  gen_cmd->add_option("--min-size", gen.min_size)->required();
  gen_cmd->add_option("--max-size", gen.max_size)->required();
  gen_cmd->add_option("--kind", gen.kind)
      ->check(CLI::IsMember({"uniform1d", "uniformkd", "mixed"}))
      ->capture_default_str();
  gen_cmd->add_option("--dims", gen.dims, "Dimensions for uniformkd")->capture_default_str();
  gen_cmd->add_option("--num", gen.num, "Numeric columns for mixed")->capture_default_str();
  gen_cmd->add_option("--cat", gen.cat, "Categorical columns for mixed")->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed)->required();
  gen_cmd->add_option("--output", gen.output, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve);
    if (*demo_cmd) return cmd_demonstrate(demo_json);
    if (*verify_cmd) return cmd_verify(verify);
    if (*gen_cmd) {
      gen.seed = *gen_seed;
      return cmd_gen(gen);
    }
  } catch (const mdgp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const mdgp::ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
