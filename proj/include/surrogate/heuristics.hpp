#ifndef SURROGATE_HEURISTICS_HPP
#define SURROGATE_HEURISTICS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "surrogate/adversary.hpp"
#include "surrogate/budget.hpp"
#include "surrogate/dataset.hpp"
#include "surrogate/errors.hpp"
#include "surrogate/leaf_assignment.hpp"
#include "surrogate/random.hpp"
#include "surrogate/scenario_generation.hpp"
#include "surrogate/solution_space.hpp"
#include "surrogate/timing.hpp"
#include "surrogate/tree.hpp"

namespace surrogate {

struct HeuristicConfig {
  double time_limit = 60.0;
  std::uint64_t seed = 0;
  int depth = 2;
  PoolPolicy pool = PoolPolicy::FullEnumeration;
  /// Restarts to run; 0 means until the time limit.
  std::size_t max_iterations = 0;
  double epsilon = kDefaultEpsilon;
  std::size_t enumeration_cap = kDefaultEnumerationCap;

  void validate() const {
    if (!(time_limit > 0.0)) {
      throw InvalidInput("time limit must be positive");
    }
    if (depth < 0) {
      throw InvalidInput("depth must be nonnegative");
    }
  }
};

/// Depth-0 tree holding the optimum of the aggregated costs.
inline DecisionTree h1(const Dataset& dataset, const FeasibleSpace& space) {
  return DecisionTree::single_leaf(aggregate_optimum(dataset, space));
}

/// Random split per inner node: item uniform over items with thresholds,
/// threshold uniform over that item's catalog.
inline TreeStructure sample_random_structure(const ThresholdCatalog& catalog, int depth, Rng& rng) {
  std::vector<std::size_t> items;
  for (std::size_t i = 0; i < catalog.n_items(); ++i) {
    if (!catalog[i].empty()) {
      items.push_back(i);
    }
  }
  if (items.empty()) {
    throw NoSplitAvailable("every item has a single observed value");
  }
  TreeStructure structure;
  structure.depth = depth;
  for (std::size_t q = 0; q < inner_count(depth); ++q) {
    const auto item = items[uniform_index(rng, items.size())];
    const auto& thetas = catalog[item];
    structure.nodes.push_back({item, thetas[uniform_index(rng, thetas.size())]});
  }
  return structure;
}

namespace detail {

class Incumbent {
public:
  explicit Incumbent(SolveReport& report) : report_(report) {}

  void offer(const DecisionTree& tree, double objective) {
    if (!have_ || objective < report_.adversary_objective - 1e-9) {
      report_.tree = tree;
      report_.adversary_objective = objective;
      have_ = true;
    }
  }

  bool have() const { return have_; }

private:
  SolveReport& report_;
  bool have_ = false;
};

inline bool keep_going(const HeuristicConfig& config, const Deadline& deadline, std::size_t done) {
  return (config.max_iterations == 0 || done < config.max_iterations) && !deadline.expired();
}

inline SolveReport h1_report(const Dataset& dataset, const FeasibleSpace& space, const UncertaintyBudget& budget,
                             const HeuristicConfig& config, std::string method) {
  SolveReport report;
  report.method = std::move(method);
  report.tree = h1(dataset, space);
  report.adversary_objective = evaluate_robust(report.tree, dataset, budget, AdversaryOptions{config.epsilon});
  report.master_objective = report.adversary_objective;
  return report;
}

} // namespace detail

inline SolveReport run_h1(const Dataset& dataset, const FeasibleSpace& space, const UncertaintyBudget& budget,
                          const HeuristicConfig& config = {}) {
  const Stopwatch clock;
  auto report = detail::h1_report(dataset, space, budget, config, "H1");
  report.iterations = 1;
  report.converged = true;
  report.wall_time = clock.seconds();
  return report;
}

/// Random structures with optimal leaves; starts from the H1 tree.
inline SolveReport h_tree(const Dataset& dataset, const FeasibleSpace& space, const UncertaintyBudget& budget,
                          const HeuristicConfig& config = {}) {
  config.validate();
  const Stopwatch clock;
  const Deadline deadline = Deadline::after(config.time_limit);
  auto report = detail::h1_report(dataset, space, budget, config, "Htree");
  detail::Incumbent incumbent(report);
  incumbent.offer(report.tree, report.adversary_objective);
  const auto catalog = build_threshold_catalog(dataset);
  if (config.depth == 0 || catalog.empty()) {
    report.wall_time = clock.seconds();
    return report;
  }
  const auto pool = build_pool(dataset, space, config.pool, config.enumeration_cap);
  Rng rng = make_rng(config.seed, 11);
  while (detail::keep_going(config, deadline, report.iterations)) {
    ++report.iterations;
    const auto structure = sample_random_structure(catalog, config.depth, rng);
    const auto leaves = optimize_leaves(structure, dataset, budget, pool, config.epsilon, deadline);
    report.adversary_history.push_back(leaves.objective);
    incumbent.offer(DecisionTree(structure, leaves.leaves), leaves.objective);
  }
  report.master_objective = report.adversary_objective;
  report.timed_out = deadline.expired();
  report.wall_time = clock.seconds();
  return report;
}

/// Solutions that are optimal for at least one sample, in sample order.
inline std::vector<Solution> per_sample_optima(const Dataset& dataset, const FeasibleSpace& space) {
  std::vector<Solution> out;
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    auto x = space.min_linear(dataset.sample(j));
    if (std::find(out.begin(), out.end(), x) == out.end()) {
      out.push_back(std::move(x));
    }
  }
  return out;
}

/// Random leaf solutions from the per-sample optima with an optimal structure.
inline SolveReport h_sol(const Dataset& dataset, const FeasibleSpace& space, const UncertaintyBudget& budget,
                         const HeuristicConfig& config = {}) {
  config.validate();
  const Stopwatch clock;
  const Deadline deadline = Deadline::after(config.time_limit);
  SolveReport report;
  report.method = "Hsol";
  report.adversary_objective = std::numeric_limits<double>::infinity();
  detail::Incumbent incumbent(report);
  const auto catalog = build_threshold_catalog(dataset);
  if (config.depth > 0 && catalog.empty()) {
    return detail::h1_report(dataset, space, budget, config, "Hsol");
  }
  const auto candidates = per_sample_optima(dataset, space);
  SolveLimits limits;
  limits.time_limit = config.time_limit;
  limits.epsilon = config.epsilon;
  limits.enumeration_cap = config.enumeration_cap;
  limits.max_depth = std::max(config.depth, limits.max_depth);
  Rng rng = make_rng(config.seed, 12);
  // The first draw always runs so that a tree is returned.
  while (report.iterations == 0 || detail::keep_going(config, deadline, report.iterations)) {
    ++report.iterations;
    std::vector<Solution> leaves;
    for (std::size_t k = 0; k < leaf_count(config.depth); ++k) {
      leaves.push_back(candidates[uniform_index(rng, candidates.size())]);
    }
    const auto sg = scenario_generation(dataset, budget, space, config.depth, limits, &leaves, deadline);
    report.adversary_history.push_back(sg.adversary_objective);
    incumbent.offer(sg.tree, sg.adversary_objective);
  }
  report.master_objective = report.adversary_objective;
  report.timed_out = deadline.expired();
  report.wall_time = clock.seconds();
  return report;
}

/// Alternates optimal leaves for a fixed structure with an optimal structure
/// for fixed leaves until both passes agree; restarts from random structures.
inline SolveReport h_alt(const Dataset& dataset, const FeasibleSpace& space, const UncertaintyBudget& budget,
                         const HeuristicConfig& config = {}) {
  config.validate();
  const Stopwatch clock;
  const Deadline deadline = Deadline::after(config.time_limit);
  auto report = detail::h1_report(dataset, space, budget, config, "Halt");
  detail::Incumbent incumbent(report);
  incumbent.offer(report.tree, report.adversary_objective);
  const auto catalog = build_threshold_catalog(dataset);
  if (config.depth == 0 || catalog.empty()) {
    report.wall_time = clock.seconds();
    return report;
  }
  const auto pool = build_pool(dataset, space, config.pool, config.enumeration_cap);
  SolveLimits limits;
  limits.time_limit = config.time_limit;
  limits.epsilon = config.epsilon;
  limits.enumeration_cap = config.enumeration_cap;
  limits.max_depth = std::max(config.depth, limits.max_depth);
  Rng rng = make_rng(config.seed, 13);
  while (detail::keep_going(config, deadline, report.iterations)) {
    ++report.iterations;
    auto structure = sample_random_structure(catalog, config.depth, rng);
    std::vector<double> passes;
    while (true) {
      const auto leaves = optimize_leaves(structure, dataset, budget, pool, config.epsilon, deadline);
      passes.push_back(leaves.objective);
      incumbent.offer(DecisionTree(structure, leaves.leaves), leaves.objective);
      const auto sg = scenario_generation(dataset, budget, space, config.depth, limits, &leaves.leaves, deadline);
      passes.push_back(sg.adversary_objective);
      incumbent.offer(sg.tree, sg.adversary_objective);
      if (std::abs(sg.adversary_objective - leaves.objective) <= kObjectiveTolerance || deadline.expired()) {
        break;
      }
      structure = sg.tree.structure();
    }
    report.passes.push_back(std::move(passes));
  }
  report.master_objective = report.adversary_objective;
  report.timed_out = deadline.expired();
  report.wall_time = clock.seconds();
  return report;
}

} // namespace surrogate

#endif
