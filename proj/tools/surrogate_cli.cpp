// Command-line driver: instance generation, training, evaluation and the
// three experiment runners.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "surrogate.hpp"

namespace {

using namespace surrogate;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTimeout = 2;

struct BudgetArgs {
  std::string kind = "global";
  std::optional<double> lambda;
  std::optional<double> gamma;
  std::string coupling = "N";
};

void add_budget_options(CLI::App* cmd, BudgetArgs& args) {
  cmd->add_option("--kind", args.kind, "Uncertainty set")->check(CLI::IsMember({"local", "global"}));
  auto* lambda = cmd->add_option("--lambda", args.lambda, "Relative budget scale")->check(CLI::NonNegativeNumber);
  auto* gamma = cmd->add_option("--gamma", args.gamma, "Absolute budget")->check(CLI::NonNegativeNumber);
  lambda->excludes(gamma);
  cmd->add_option("--coupling", args.coupling, "Global budget coupling")->check(CLI::IsMember({"N", "1"}));
}

UncertaintyBudget resolve_budget(const BudgetArgs& args, const Dataset& train, int depth) {
  const auto kind = parse_budget_kind(args.kind);
  if (args.gamma) {
    return UncertaintyBudget(kind, *args.gamma);
  }
  return make_budget(train, args.lambda.value_or(0.0), depth, kind, parse_coupling(args.coupling));
}

json budget_json(const BudgetArgs& args, const UncertaintyBudget& budget) {
  json j{{"kind", to_string(budget.kind)}, {"gamma", budget.gamma}, {"coupling", args.coupling}};
  j["lambda"] = args.lambda ? json(*args.lambda) : json(nullptr);
  return j;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("cannot parse " + path + ": " + e.what());
  }
}

void emit(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    save_json(j, path);
  }
}

void write_experiment(const std::vector<CsvRow>& rows, const std::string& path, const json& config) {
  if (path.empty() || path == "-") {
    std::cout << csv_header() << '\n';
    for (const auto& r : rows) {
      std::cout << format_row(r) << '\n';
    }
    return;
  }
  write_csv(rows, path);
  save_json(config, path + ".config.json");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) {
      out.push_back(std::stod(token));
    }
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust decision-tree surrogates for combinatorial optimization"};
  app.require_subcommand(1);

  // generate
  InstanceSpec gen_spec;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a random grid shortest-path instance");
  generate->add_option("--grid", gen_spec.grid_side, "Grid side length")->check(CLI::Range(2, 64));
  generate->add_option("--train", gen_spec.n_train, "Training samples");
  generate->add_option("--test", gen_spec.n_test, "Test samples");
  generate->add_option("--seed", gen_spec.seed, "Random seed");
  generate->add_option("--out", gen_out, "Output file")->required();

  // solve
  std::string instance_path;
  std::string method_name = "SG";
  int depth = 2;
  std::uint64_t seed = 0;
  double time_limit = kDefaultTimeLimit;
  std::size_t max_iterations = 0;
  std::string tree_out;
  std::string report_out;
  BudgetArgs solve_budget;
  auto* solve = app.add_subcommand("solve", "Train one tree");
  solve->add_option("--instance", instance_path, "Instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--method", method_name, "nominal, SG, H1, Htree, Hsol or Halt")
      ->check(CLI::IsMember({"nominal", "SG", "H1", "Htree", "Hsol", "Halt"}));
  add_budget_options(solve, solve_budget);
  solve->add_option("--depth", depth, "Tree depth")->check(CLI::Range(0, 6));
  solve->add_option("--seed", seed, "Heuristic seed");
  solve->add_option("--time-limit", time_limit, "Seconds")->check(CLI::PositiveNumber);
  solve->add_option("--max-iterations", max_iterations, "Heuristic restarts, 0 = until the time limit");
  solve->add_option("--out", tree_out, "Tree file (default: stdout)");
  solve->add_option("--report", report_out, "Report file");

  // evaluate
  std::string tree_path;
  std::string eval_out;
  std::optional<int> eval_depth;
  BudgetArgs eval_budget;
  auto* evaluate = app.add_subcommand("evaluate", "Nominal and worst-case objectives of a tree");
  evaluate->add_option("--tree", tree_path, "Tree file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--instance", instance_path, "Instance file")->required()->check(CLI::ExistingFile);
  add_budget_options(evaluate, eval_budget);
  evaluate->add_option("--depth", eval_depth, "Depth used to scale lambda (default: the tree's)");
  evaluate->add_option("--out", eval_out, "Output file (default: stdout)");

  // exp-corr
  CorrelationConfig corr;
  std::string corr_out;
  std::string corr_lambdas;
  auto* exp_corr = app.add_subcommand("exp-corr", "Correlation of global and local worst cases");
  exp_corr->add_option("--instances", corr.instances, "Number of instances");
  exp_corr->add_option("--grid", corr.grid_side, "Grid side length");
  exp_corr->add_option("--train", corr.n_train, "Training samples");
  exp_corr->add_option("--trees", corr.trees, "Random surrogates per instance");
  exp_corr->add_option("--depth", corr.depth, "Tree depth");
  exp_corr->add_option("--lambdas", corr_lambdas, "Comma-separated lambda values");
  exp_corr->add_option("--seed", corr.seed, "Base seed");
  exp_corr->add_option("--out", corr_out, "CSV file (default: stdout)");

  // exp-sweep
  SweepConfig sweep;
  std::string sweep_out;
  std::string sweep_lambdas;
  std::string sweep_coupling = "N";
  std::vector<std::string> sweep_methods;
  auto* exp_sweep = app.add_subcommand("exp-sweep", "Worst case per method over a lambda grid");
  exp_sweep->add_option("--instances", sweep.instances, "Number of instances");
  exp_sweep->add_option("--grid", sweep.grid_side, "Grid side length");
  exp_sweep->add_option("--train", sweep.n_train, "Training samples");
  exp_sweep->add_option("--depth", sweep.depth, "Tree depth");
  exp_sweep->add_option("--lambdas", sweep_lambdas, "Comma-separated lambda values");
  exp_sweep->add_option("--coupling", sweep_coupling, "Global budget coupling")->check(CLI::IsMember({"N", "1"}));
  exp_sweep->add_option("--method", sweep_methods, "Methods to run (repeatable)");
  exp_sweep->add_option("--time-limit", sweep.time_limit, "Seconds per training run");
  exp_sweep->add_option("--max-iterations", sweep.max_iterations, "Heuristic restarts, 0 = until the time limit");
  exp_sweep->add_option("--seed", sweep.seed, "Base seed");
  exp_sweep->add_option("--out", sweep_out, "CSV file (default: stdout)");

  // exp-tables
  TablesConfig tables;
  std::string tables_out;
  std::string tables_coupling = "N";
  auto* exp_tables = app.add_subcommand("exp-tables", "Objectives relative to the nominal tree");
  exp_tables->add_option("--instances", tables.instances, "Instances per (N, g) cell");
  exp_tables->add_option("--lambda", tables.lambda, "Relative budget scale");
  exp_tables->add_option("--coupling", tables_coupling, "Global budget coupling")->check(CLI::IsMember({"N", "1"}));
  exp_tables->add_option("--depth", tables.depth, "Tree depth");
  exp_tables->add_option("--test", tables.n_test, "Test samples per instance");
  exp_tables->add_option("--time-limit", tables.time_limit, "Seconds per heuristic run");
  exp_tables->add_option("--max-iterations", tables.max_iterations, "Heuristic restarts, 0 = until the time limit");
  exp_tables->add_option("--seed", tables.seed, "Base seed");
  exp_tables->add_option("--out", tables_out, "CSV file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      const auto instance = generate_instance(gen_spec);
      save_json(instance_to_json(instance), gen_out);
      std::cerr << "wrote " << gen_out << ": " << instance.n_items() << " items, " << instance.train.size()
                << " training and " << (instance.test ? instance.test->size() : 0) << " test samples\n";
      return kExitOk;
    }

    if (solve->parsed()) {
      const auto instance = load_instance(instance_path);
      const auto budget = resolve_budget(solve_budget, instance.train, depth);
      MethodSettings settings;
      settings.depth = depth;
      settings.time_limit = time_limit;
      settings.seed = seed;
      settings.max_iterations = max_iterations;
      const auto report = run_method(parse_method(method_name), instance.train, *instance.space, budget, settings);
      emit(tree_to_json(report.tree), tree_out);
      if (!report_out.empty()) {
        auto j = report_to_json(report);
        j["budget"] = budget_json(solve_budget, budget);
        j["depth"] = depth;
        j["seed"] = seed;
        j["instance"] = instance_path;
        save_json(j, report_out);
      }
      std::cerr << report.method << ": worst case " << report.adversary_objective << " after "
                << report.iterations << " iterations, " << report.wall_time << " s"
                << (report.timed_out ? " (time limit reached)" : "") << '\n';
      // Heuristics stop at the time limit by design; only exact methods report a timeout.
      const auto method = parse_method(method_name);
      const bool exact = method == Method::Nominal || method == Method::SG;
      return exact && report.timed_out ? kExitTimeout : kExitOk;
    }

    if (evaluate->parsed()) {
      const auto instance = load_instance(instance_path);
      const auto tree = tree_from_json(read_json(tree_path));
      const auto budget = resolve_budget(eval_budget, instance.train, eval_depth.value_or(tree.depth()));
      const auto record = evaluate_tree(tree, instance, budget);
      json j{{"instance", instance_path},
             {"tree", tree_path},
             {"budget", budget_json(eval_budget, budget)},
             {"nominal_train", record.nominal_train},
             {"robust_train", record.robust_train}};
      j["nominal_test"] = record.nominal_test ? json(*record.nominal_test) : json(nullptr);
      j["robust_test"] = record.robust_test ? json(*record.robust_test) : json(nullptr);
      emit(j, eval_out);
      return kExitOk;
    }

    if (exp_corr->parsed()) {
      if (!corr_lambdas.empty()) {
        corr.lambdas = parse_list(corr_lambdas);
      }
      const auto result = exp_correlation(corr);
      json summary = json::array();
      for (const auto& cell : result.cells) {
        std::fprintf(stderr, "lambda %.2f coupling %s: r = %.4f over %zu pairs\n", cell.lambda,
                     to_string(cell.coupling).c_str(), cell.r, cell.points);
        summary.push_back({{"lambda", cell.lambda}, {"coupling", to_string(cell.coupling)}, {"r", cell.r},
                           {"points", cell.points}});
      }
      const json config{{"experiment", "corr"}, {"instances", corr.instances}, {"grid", corr.grid_side},
                        {"train", corr.n_train},   {"trees", corr.trees},         {"depth", corr.depth},
                        {"lambdas", corr.lambdas}, {"seed", corr.seed},           {"cells", summary}};
      write_experiment(result.rows, corr_out, config);
      return kExitOk;
    }

    if (exp_sweep->parsed()) {
      if (!sweep_lambdas.empty()) {
        sweep.lambdas = parse_list(sweep_lambdas);
      }
      sweep.coupling = parse_coupling(sweep_coupling);
      if (!sweep_methods.empty()) {
        sweep.methods.clear();
        for (const auto& m : sweep_methods) {
          sweep.methods.push_back(parse_method(m));
        }
      }
      const auto result = exp_lambda_sweep(sweep);
      std::vector<std::string> methods;
      for (auto m : sweep.methods) {
        methods.push_back(to_string(m));
      }
      const json config{{"experiment", "sweep"},          {"instances", sweep.instances},
                        {"grid", sweep.grid_side},         {"train", sweep.n_train},
                        {"depth", sweep.depth},            {"lambdas", sweep.lambdas},
                        {"coupling", sweep_coupling},      {"methods", methods},
                        {"time_limit", sweep.time_limit},  {"max_iterations", sweep.max_iterations},
                        {"seed", sweep.seed}};
      write_experiment(result.rows, sweep_out, config);
      return kExitOk;
    }

    if (exp_tables->parsed()) {
      tables.coupling = parse_coupling(tables_coupling);
      const auto result = exp_relative_tables(tables);
      for (const auto& e : result.entries) {
        if (e.method == "nominal") {
          continue;
        }
        std::fprintf(stderr, "N=%zu g=%zu %-10s %-5s %-7s %-6s %8.2f%%\n", e.n_train, e.grid_side, e.method.c_str(),
                     e.split.c_str(), e.measure.c_str(), e.kind.c_str(), e.percent);
      }
      json cells = json::array();
      for (const auto& [n, g] : tables.cells) {
        cells.push_back({n, g});
      }
      const json config{{"experiment", "tables"},         {"instances", tables.instances},
                        {"cells", cells},                  {"lambda", tables.lambda},
                        {"coupling", tables_coupling},     {"depth", tables.depth},
                        {"test", tables.n_test},           {"time_limit", tables.time_limit},
                        {"max_iterations", tables.max_iterations}, {"seed", tables.seed}};
      write_experiment(result.rows, tables_out, config);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}
