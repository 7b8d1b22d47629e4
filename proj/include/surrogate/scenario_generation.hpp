#ifndef SURROGATE_SCENARIO_GENERATION_HPP
#define SURROGATE_SCENARIO_GENERATION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "surrogate/adversary.hpp"
#include "surrogate/budget.hpp"
#include "surrogate/dataset.hpp"
#include "surrogate/master.hpp"
#include "surrogate/solution_space.hpp"
#include "surrogate/timing.hpp"
#include "surrogate/tree.hpp"

namespace surrogate {

inline constexpr double kDefaultTimeLimit = 3600.0;

struct SolveLimits {
  double time_limit = kDefaultTimeLimit;
  double epsilon = kDefaultEpsilon;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  int max_depth = 3;
};

/// Outcome of any tree-learning method.
struct SolveReport {
  std::string method;
  DecisionTree tree = DecisionTree::single_leaf(Solution{0});
  /// Last master value; a lower bound on the optimum when the master was exact.
  double master_objective = 0.0;
  /// Worst-case objective of `tree`.
  double adversary_objective = 0.0;
  std::size_t iterations = 0;
  double wall_time = 0.0;
  bool converged = false;
  /// True when the tree is certified optimal.
  bool optimal = false;
  bool timed_out = false;
  std::vector<double> master_history;
  std::vector<double> adversary_history;
  /// Alternating heuristic: objective after every pass, one list per restart.
  std::vector<std::vector<double>> passes;
};

inline nlohmann::json report_to_json(const SolveReport& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["tree"] = tree_to_json(r.tree);
  j["master_objective"] = r.master_objective;
  j["adversary_objective"] = r.adversary_objective;
  j["iterations"] = r.iterations;
  j["wall_time"] = r.wall_time;
  j["converged"] = r.converged;
  j["optimal"] = r.optimal;
  j["timed_out"] = r.timed_out;
  j["master_history"] = r.master_history;
  j["adversary_history"] = r.adversary_history;
  if (!r.passes.empty()) {
    j["passes"] = r.passes;
  }
  return j;
}

/**
 * Exact robust tree by scenario generation.
 *
 * Starts from the zero scenario, alternates the exact master with the exact
 * adversary and adds the separated perturbation until the adversary cannot
 * beat the master by more than 1e-6. The returned tree is the one with the
 * smallest worst case seen; converged is false after a timeout.
 */
inline SolveReport scenario_generation(const Dataset& dataset, const UncertaintyBudget& budget,
                                       const FeasibleSpace& space, int depth, const SolveLimits& limits = {},
                                       const std::vector<Solution>* fixed_leaves = nullptr,
                                       const Deadline& outer = Deadline::never()) {
  const Stopwatch clock;
  const Deadline deadline = Deadline::earliest(Deadline::after(limits.time_limit), outer);
  const auto catalog = build_threshold_catalog(dataset);
  const AdversaryOptions adversary_options{limits.epsilon};
  MasterOptions master_options;
  master_options.max_depth = limits.max_depth;
  master_options.enumeration_cap = limits.enumeration_cap;
  master_options.deadline = deadline;

  SolveReport report;
  report.method = "SG";
  report.adversary_objective = std::numeric_limits<double>::infinity();
  ScenarioSet scenarios(dataset);
  while (true) {
    ++report.iterations;
    const auto master = solve_master(dataset, scenarios, space, depth, catalog, master_options, fixed_leaves);
    report.master_objective = master.objective;
    report.master_history.push_back(master.objective);
    const auto adversary = solve_adversary(master.tree, dataset, budget, adversary_options);
    report.adversary_history.push_back(adversary.objective);
    if (adversary.objective < report.adversary_objective) {
      report.adversary_objective = adversary.objective;
      report.tree = master.tree;
    }
    if (!master.optimal) {
      report.timed_out = true;
      break;
    }
    if (adversary.objective <= master.objective + kObjectiveTolerance) {
      report.converged = true;
      break;
    }
    if (deadline.expired()) {
      report.timed_out = true;
      break;
    }
    scenarios.add(adversary.perturbation);
  }
  report.optimal = report.converged;
  report.wall_time = clock.seconds();
  return report;
}

/// Exact nominal tree: the master over the zero scenario only.
inline SolveReport solve_nominal(const Dataset& dataset, const FeasibleSpace& space, int depth,
                                 const SolveLimits& limits = {}) {
  const Stopwatch clock;
  MasterOptions options;
  options.max_depth = limits.max_depth;
  options.enumeration_cap = limits.enumeration_cap;
  options.deadline = Deadline::after(limits.time_limit);
  const auto master = solve_master(dataset, ScenarioSet(dataset), space, depth, build_threshold_catalog(dataset),
                                   options);
  SolveReport report;
  report.method = "nominal";
  report.tree = master.tree;
  report.master_objective = master.objective;
  report.adversary_objective = master.objective;
  report.iterations = 1;
  report.converged = master.optimal;
  report.optimal = master.optimal;
  report.timed_out = !master.optimal;
  report.master_history = {master.objective};
  report.adversary_history = {master.objective};
  report.wall_time = clock.seconds();
  return report;
}

inline std::vector<double> default_pi_grid() {
  std::vector<double> pi;
  for (int t = 1; t <= 9; ++t) {
    pi.push_back(t / 10.0);
  }
  return pi;
}

struct PostProcessResult {
  DecisionTree tree;
  double objective = 0.0;
  double input_objective = 0.0;
  /// Adversary calls spent on the threshold product.
  std::size_t evaluations = 0;
  /// Extra call for the input tree when it is not part of the product.
  std::size_t baseline_evaluations = 0;
};

/// Alternative thresholds pi*a + (1-pi)*b inside the observed interval
/// (a, b) enclosing theta; just theta when no such interval exists.
inline std::vector<double> refined_thresholds(const Dataset& dataset, const Split& split, const std::vector<double>& pi) {
  const auto values = dataset.distinct_values(split.item);
  auto upper = std::upper_bound(values.begin(), values.end(), split.threshold);
  if (upper == values.begin() || upper == values.end() || *(upper - 1) == split.threshold) {
    return {split.threshold};
  }
  const double a = *(upper - 1);
  const double b = *upper;
  std::vector<double> out;
  for (double p : pi) {
    out.push_back(p * a + (1.0 - p) * b);
  }
  return out;
}

/// Re-tunes every threshold within its observed interval and keeps the
/// combination with the smallest worst case; the input wins ties.
inline PostProcessResult post_process(const DecisionTree& tree, const Dataset& dataset, const UncertaintyBudget& budget,
                                      const std::vector<double>& pi = default_pi_grid(),
                                      double epsilon = kDefaultEpsilon) {
  const AdversaryOptions options{epsilon};
  const std::size_t q_count = tree.num_inner();
  std::vector<std::vector<double>> grid(q_count);
  bool input_in_product = true;
  for (std::size_t q = 0; q < q_count; ++q) {
    grid[q] = refined_thresholds(dataset, tree.split(q), pi);
    if (std::find(grid[q].begin(), grid[q].end(), tree.split(q).threshold) == grid[q].end()) {
      input_in_product = false;
    }
  }

  PostProcessResult result{tree, evaluate_robust(tree, dataset, budget, options), 0.0, 0, 0};
  result.input_objective = result.objective;
  if (!input_in_product) {
    result.baseline_evaluations = 1;
  }
  std::vector<std::size_t> index(q_count, 0);
  TreeStructure structure = tree.structure();
  while (true) {
    for (std::size_t q = 0; q < q_count; ++q) {
      structure.nodes[q].threshold = grid[q][index[q]];
    }
    ++result.evaluations;
    if (!(structure == tree.structure())) {
      const auto candidate = tree.with_structure(structure);
      const double value = evaluate_robust(candidate, dataset, budget, options);
      if (value < result.objective - kObjectiveTolerance) {
        result.objective = value;
        result.tree = candidate;
      }
    }
    std::size_t q = q_count;
    while (q > 0 && ++index[q - 1] == grid[q - 1].size()) {
      index[q - 1] = 0;
      --q;
    }
    if (q == 0) {
      break;
    }
  }
  return result;
}

} // namespace surrogate

#endif
