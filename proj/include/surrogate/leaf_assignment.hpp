#ifndef SURROGATE_LEAF_ASSIGNMENT_HPP
#define SURROGATE_LEAF_ASSIGNMENT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "surrogate/adversary.hpp"
#include "surrogate/dataset.hpp"
#include "surrogate/errors.hpp"
#include "surrogate/solution_space.hpp"
#include "surrogate/timing.hpp"
#include "surrogate/tree.hpp"

namespace surrogate {

/// Solutions a leaf may hold, with their cost on every training sample.
struct CandidatePool {
  std::vector<Solution> solutions;
  Table values; // values[j][p] = c_j^T solutions[p]
  std::size_t fill = 0; // used for leaves no sample can reach

  std::size_t size() const { return solutions.size(); }
};

enum class PoolPolicy { PerSampleOptima, FullEnumeration };

/// The aggregated-cost optimum min_x Sum_j c_j^T x.
inline Solution aggregate_optimum(const Dataset& dataset, const FeasibleSpace& space) {
  const auto total = dataset.aggregate();
  return space.min_linear(total);
}

inline CandidatePool make_pool(std::vector<Solution> solutions, const Dataset& dataset,
                               const Solution& fill_solution) {
  CandidatePool pool;
  auto it = std::find(solutions.begin(), solutions.end(), fill_solution);
  if (it == solutions.end()) {
    solutions.push_back(fill_solution);
    it = solutions.end() - 1;
  }
  pool.fill = static_cast<std::size_t>(it - solutions.begin());
  pool.solutions = std::move(solutions);
  pool.values.assign(dataset.size(), std::vector<double>(pool.size()));
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    for (std::size_t p = 0; p < pool.size(); ++p) {
      pool.values[j][p] = linear_cost(dataset.sample(j), pool.solutions[p]);
    }
  }
  return pool;
}

/// Per-sample optima (deduplicated, in sample order) or the whole feasible
/// set; the aggregated optimum is always included and used as the fill.
inline CandidatePool build_pool(const Dataset& dataset, const FeasibleSpace& space, PoolPolicy policy,
                                std::size_t cap = kDefaultEnumerationCap) {
  if (dataset.n_items() != space.dimension()) {
    throw DimensionMismatch("dataset has " + std::to_string(dataset.n_items()) +
                            " items, space has dimension " + std::to_string(space.dimension()));
  }
  std::vector<Solution> solutions;
  if (policy == PoolPolicy::FullEnumeration) {
    solutions = space.enumerate(cap);
  } else {
    for (std::size_t j = 0; j < dataset.size(); ++j) {
      auto x = space.min_linear(dataset.sample(j));
      if (std::find(solutions.begin(), solutions.end(), x) == solutions.end()) {
        solutions.push_back(std::move(x));
      }
    }
  }
  return make_pool(std::move(solutions), dataset, aggregate_optimum(dataset, space));
}

/**
 * Min-max leaf assignment for a fixed routing.
 *
 * leaf_of[s][j] is the leaf sample j reaches in scenario s. The search picks a
 * pool index per leaf minimizing max_s Sum_j values[j][choice[leaf_of[s][j]]].
 * Leaves with a preset index are not searched. Only tuples strictly better
 * than `cutoff` are reported.
 */
struct TupleProblem {
  const Table* values = nullptr;
  std::vector<std::vector<std::size_t>> leaf_of;
  std::size_t num_leaves = 1;
  std::vector<std::optional<std::size_t>> preset; // empty or num_leaves entries
  std::size_t fill = 0;
};

struct TupleResult {
  bool found = false;
  double objective = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> choice;
};

/// max_s Sum_j values[j][choice[leaf_of[s][j]]], summed in sample order.
inline double scenario_objective(const Table& values, const std::vector<std::vector<std::size_t>>& leaf_of,
                                 const std::vector<std::size_t>& choice) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& routing : leaf_of) {
    double total = 0.0;
    for (std::size_t j = 0; j < routing.size(); ++j) {
      total += values[j][choice[routing[j]]];
    }
    worst = std::max(worst, total);
  }
  return worst;
}

namespace detail {

inline double prune_margin(double best) { return std::isfinite(best) ? 1e-9 * (1.0 + std::abs(best)) : 0.0; }

class TupleSearch {
public:
  TupleSearch(const TupleProblem& problem, double cutoff) : problem_(problem) {
    const Table& values = *problem.values;
    const std::size_t scenarios = problem.leaf_of.size();
    const std::size_t leaves = problem.num_leaves;
    const std::size_t pool = values.empty() ? 0 : values[0].size();
    best_.objective = cutoff;

    // contrib[k][s][p]: cost of the samples routed to leaf k in scenario s.
    contrib_.assign(leaves, std::vector<std::vector<double>>(scenarios, std::vector<double>(pool, 0.0)));
    std::vector<bool> used(leaves, false);
    for (std::size_t s = 0; s < scenarios; ++s) {
      for (std::size_t j = 0; j < problem.leaf_of[s].size(); ++j) {
        const auto k = problem.leaf_of[s][j];
        used[k] = true;
        for (std::size_t p = 0; p < pool; ++p) {
          contrib_[k][s][p] += values[j][p];
        }
      }
    }
    choice_.assign(leaves, problem.fill);
    loads_.assign(scenarios, 0.0);
    remaining_lb_.assign(scenarios, 0.0);
    lb_.assign(leaves, std::vector<double>(scenarios, 0.0));
    for (std::size_t k = 0; k < leaves; ++k) {
      const bool preset = !problem.preset.empty() && problem.preset[k].has_value();
      if (preset) {
        choice_[k] = *problem.preset[k];
        for (std::size_t s = 0; s < scenarios; ++s) {
          loads_[s] += contrib_[k][s][choice_[k]];
        }
        continue;
      }
      if (!used[k]) {
        continue;
      }
      free_.push_back(k);
      for (std::size_t s = 0; s < scenarios; ++s) {
        lb_[k][s] = *std::min_element(contrib_[k][s].begin(), contrib_[k][s].end());
        remaining_lb_[s] += lb_[k][s];
      }
      std::vector<std::size_t> order(pool);
      std::iota(order.begin(), order.end(), 0);
      std::vector<double> total(pool, 0.0);
      for (std::size_t p = 0; p < pool; ++p) {
        for (std::size_t s = 0; s < scenarios; ++s) {
          total[p] += contrib_[k][s][p];
        }
      }
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return total[a] < total[b]; });
      order_.push_back(std::move(order));
    }
  }

  TupleResult run() {
    search(0);
    return best_;
  }

private:
  double bound() const {
    double b = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < loads_.size(); ++s) {
      b = std::max(b, loads_[s] + remaining_lb_[s]);
    }
    return b;
  }

  void search(std::size_t depth) {
    if (depth == free_.size()) {
      const double objective = scenario_objective(*problem_.values, problem_.leaf_of, choice_);
      if (objective < best_.objective) {
        best_ = TupleResult{true, objective, choice_};
      }
      return;
    }
    const std::size_t k = free_[depth];
    for (std::size_t s = 0; s < loads_.size(); ++s) {
      remaining_lb_[s] -= lb_[k][s];
    }
    for (auto p : order_[depth]) {
      for (std::size_t s = 0; s < loads_.size(); ++s) {
        loads_[s] += contrib_[k][s][p];
      }
      if (bound() < best_.objective - prune_margin(best_.objective)) {
        choice_[k] = p;
        search(depth + 1);
      }
      for (std::size_t s = 0; s < loads_.size(); ++s) {
        loads_[s] -= contrib_[k][s][p];
      }
    }
    choice_[k] = problem_.fill;
    for (std::size_t s = 0; s < loads_.size(); ++s) {
      remaining_lb_[s] += lb_[k][s];
    }
  }

  const TupleProblem& problem_;
  std::vector<std::vector<std::vector<double>>> contrib_;
  std::vector<std::vector<double>> lb_;
  std::vector<std::size_t> free_;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<std::size_t> choice_;
  std::vector<double> loads_;
  std::vector<double> remaining_lb_;
  TupleResult best_;
};

} // namespace detail

inline TupleResult solve_tuple(const TupleProblem& problem,
                               double cutoff = std::numeric_limits<double>::infinity()) {
  return detail::TupleSearch(problem, cutoff).run();
}

/// Leaf solutions with their objective.
struct LeafSolution {
  std::vector<Solution> leaves;
  double objective = 0.0;
  /// False when a time limit cut the optimization short.
  bool optimal = true;
  std::size_t iterations = 1;
};

/// Pool-index form of the local leaf assignment problem: minimize
/// Sum_j max_{k reachable from j} values[j][choice[k]].
inline std::vector<std::size_t> solve_local_tuple(const Table& values, const Table& rho, double gamma,
                                                  std::size_t num_leaves, std::size_t fill) {
  const std::size_t n = values.size();
  const std::size_t pool = values.empty() ? 0 : values[0].size();
  std::vector<std::vector<std::size_t>> reach(n);
  std::vector<std::vector<std::size_t>> reached_by(num_leaves);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < num_leaves; ++k) {
      if (rho[j][k] <= gamma + kBudgetSlack) {
        reach[j].push_back(k);
        reached_by[k].push_back(j);
      }
    }
  }
  std::vector<double> vmin(n);
  for (std::size_t j = 0; j < n; ++j) {
    vmin[j] = *std::min_element(values[j].begin(), values[j].end());
  }
  std::vector<std::size_t> active;
  std::vector<std::vector<std::size_t>> order;
  for (std::size_t k = 0; k < num_leaves; ++k) {
    if (reached_by[k].empty()) {
      continue;
    }
    active.push_back(k);
    std::vector<double> total(pool, 0.0);
    for (auto j : reached_by[k]) {
      for (std::size_t p = 0; p < pool; ++p) {
        total[p] += values[j][p];
      }
    }
    std::vector<std::size_t> o(pool);
    std::iota(o.begin(), o.end(), 0);
    std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return total[a] < total[b]; });
    order.push_back(std::move(o));
  }

  std::vector<std::size_t> choice(num_leaves, fill);
  std::vector<std::size_t> best_choice = choice;
  std::vector<bool> assigned(num_leaves, false);
  auto objective_of = [&](const std::vector<std::size_t>& c) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double worst = -std::numeric_limits<double>::infinity();
      for (auto k : reach[j]) {
        worst = std::max(worst, values[j][c[k]]);
      }
      total += worst;
    }
    return total;
  };
  double best = objective_of(choice);
  auto bound = [&]() {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double worst = -std::numeric_limits<double>::infinity();
      bool open = false;
      for (auto k : reach[j]) {
        if (assigned[k]) {
          worst = std::max(worst, values[j][choice[k]]);
        } else {
          open = true;
        }
      }
      if (open) {
        worst = std::max(worst, vmin[j]);
      }
      total += worst;
    }
    return total;
  };
  auto search = [&](auto&& self, std::size_t depth) -> void {
    if (depth == active.size()) {
      const double value = objective_of(choice);
      if (value < best) {
        best = value;
        best_choice = choice;
      }
      return;
    }
    const auto k = active[depth];
    assigned[k] = true;
    for (auto p : order[depth]) {
      choice[k] = p;
      if (bound() < best - detail::prune_margin(best)) {
        self(self, depth + 1);
      }
    }
    assigned[k] = false;
    choice[k] = fill;
  };
  search(search, 0);
  return best_choice;
}

inline std::vector<Solution> pool_leaves(const CandidatePool& pool, const std::vector<std::size_t>& choice) {
  std::vector<Solution> leaves;
  leaves.reserve(choice.size());
  for (auto p : choice) {
    leaves.push_back(pool.solutions[p]);
  }
  return leaves;
}

/// Optimal leaf solutions for a fixed structure against the local adversary.
inline LeafSolution optimize_leaves_local(const TreeStructure& structure, const Dataset& dataset, double gamma,
                                          const CandidatePool& pool, double epsilon = kDefaultEpsilon) {
  structure.validate();
  const auto effort = compute_efforts(structure, dataset, epsilon);
  const auto choice = solve_local_tuple(pool.values, effort.rho, gamma, structure.num_leaves(), pool.fill);
  LeafSolution out;
  out.leaves = pool_leaves(pool, choice);
  const DecisionTree tree(structure, out.leaves);
  out.objective = local_assignment(leaf_values(tree, dataset), effort.rho, effort.nominal_leaf, gamma).objective;
  return out;
}

inline LeafSolution optimize_leaves_local(const TreeStructure& structure, const Dataset& dataset, double gamma,
                                          const FeasibleSpace& space, double epsilon = kDefaultEpsilon,
                                          std::size_t cap = kDefaultEnumerationCap) {
  return optimize_leaves_local(structure, dataset, gamma, build_pool(dataset, space, PoolPolicy::FullEnumeration, cap),
                               epsilon);
}

/// Optimal leaf solutions for a fixed structure against the global adversary:
/// min over tuples of max over known worst-case assignments, separating new
/// assignments with the exact adversary until both values meet.
inline LeafSolution optimize_leaves_global(const TreeStructure& structure, const Dataset& dataset, double gamma,
                                           const CandidatePool& pool, double epsilon = kDefaultEpsilon,
                                           const Deadline& deadline = Deadline::never()) {
  structure.validate();
  const auto effort = compute_efforts(structure, dataset, epsilon);
  TupleProblem problem;
  problem.values = &pool.values;
  problem.num_leaves = structure.num_leaves();
  problem.fill = pool.fill;
  problem.leaf_of.push_back(effort.nominal_leaf);

  LeafSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  best.optimal = false;
  best.iterations = 0;
  while (true) {
    ++best.iterations;
    const auto master = solve_tuple(problem);
    std::vector<Solution> leaves = pool_leaves(pool, master.choice);
    const DecisionTree tree(structure, leaves);
    const auto adversary = global_assignment(leaf_values(tree, dataset), effort.rho, effort.nominal_leaf, gamma);
    if (adversary.objective < best.objective) {
      best.leaves = std::move(leaves);
      best.objective = adversary.objective;
    }
    if (adversary.objective <= master.objective + kObjectiveTolerance) {
      best.optimal = true;
      break;
    }
    if (std::find(problem.leaf_of.begin(), problem.leaf_of.end(), adversary.leaves) != problem.leaf_of.end()) {
      throw ConvergenceStall("leaf optimization separated a known assignment");
    }
    problem.leaf_of.push_back(adversary.leaves);
    if (deadline.expired()) {
      break;
    }
  }
  return best;
}

inline LeafSolution optimize_leaves_global(const TreeStructure& structure, const Dataset& dataset, double gamma,
                                           const FeasibleSpace& space, double epsilon = kDefaultEpsilon,
                                           std::size_t cap = kDefaultEnumerationCap) {
  return optimize_leaves_global(structure, dataset, gamma, build_pool(dataset, space, PoolPolicy::FullEnumeration, cap),
                                epsilon);
}

inline LeafSolution optimize_leaves(const TreeStructure& structure, const Dataset& dataset,
                                    const UncertaintyBudget& budget, const CandidatePool& pool,
                                    double epsilon = kDefaultEpsilon, const Deadline& deadline = Deadline::never()) {
  return budget.kind == BudgetKind::Local
             ? optimize_leaves_local(structure, dataset, budget.gamma, pool, epsilon)
             : optimize_leaves_global(structure, dataset, budget.gamma, pool, epsilon, deadline);
}

} // namespace surrogate

#endif
