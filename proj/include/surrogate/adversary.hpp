#ifndef SURROGATE_ADVERSARY_HPP
#define SURROGATE_ADVERSARY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "surrogate/budget.hpp"
#include "surrogate/dataset.hpp"
#include "surrogate/errors.hpp"
#include "surrogate/solution_space.hpp"
#include "surrogate/tree.hpp"

namespace surrogate {

inline constexpr double kDefaultEpsilon = 1e-3;
/// Slack granted when comparing a perturbation's L1 size against the budget.
inline constexpr double kBudgetSlack = 1e-9;
/// Absolute tolerance for "objective values are equal".
inline constexpr double kObjectiveTolerance = 1e-6;
inline constexpr std::uint64_t kDefaultAssignmentCap = 10'000'000;

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

using Table = std::vector<std::vector<double>>;

struct AdversaryOptions {
  /// Extra distance needed to move strictly above a threshold.
  double epsilon = kDefaultEpsilon;
};

namespace detail {

// Interval (above, at_most] that one item must land in to follow a path.
struct ItemWindow {
  std::size_t item;
  double above = -std::numeric_limits<double>::infinity();
  double at_most = std::numeric_limits<double>::infinity();
};

// Windows for every item queried on the root-to-leaf path, sorted by item.
// Returns false when some window is empty.
inline bool path_windows(const TreeStructure& structure, std::size_t leaf, std::vector<ItemWindow>& out) {
  out.clear();
  std::size_t q = 0;
  for (int level = 0; level < structure.depth; ++level) {
    const bool go_right = (leaf >> (structure.depth - 1 - level)) & 1U;
    const Split& s = structure.nodes[q];
    auto it = std::find_if(out.begin(), out.end(), [&](const ItemWindow& w) { return w.item == s.item; });
    if (it == out.end()) {
      out.push_back({s.item});
      it = out.end() - 1;
    }
    if (go_right) {
      it->above = std::max(it->above, s.threshold);
    } else {
      it->at_most = std::min(it->at_most, s.threshold);
    }
    q = go_right ? right_child(q) : left_child(q);
  }
  std::sort(out.begin(), out.end(), [](const ItemWindow& a, const ItemWindow& b) { return a.item < b.item; });
  return std::all_of(out.begin(), out.end(), [](const ItemWindow& w) { return w.above < w.at_most; });
}

inline bool inside(double v, const ItemWindow& w) { return v > w.above && v <= w.at_most; }

// Smallest change moving `value` into the window. The result is adjusted
// by single ulps so that value + delta really lands inside in floating point.
inline double window_shift(double value, const ItemWindow& w, double epsilon) {
  if (inside(value, w)) {
    return 0.0;
  }
  const double target = value <= w.above ? std::min(w.above + epsilon, w.at_most) : w.at_most;
  double delta = target - value;
  for (int guard = 0; guard < 64 && !inside(value + delta, w); ++guard) {
    delta = value + delta <= w.above ? std::nextafter(delta, kUnreachable)
                                     : std::nextafter(delta, -kUnreachable);
  }
  return delta;
}

} // namespace detail

/// Minimum L1 change of `observation` that routes it to each leaf; the
/// unreachable sentinel marks leaves whose path is contradictory.
inline std::vector<double> perturbation_cost(const TreeStructure& structure,
                                             std::span<const double> observation,
                                             double epsilon = kDefaultEpsilon) {
  std::vector<double> row(structure.num_leaves(), kUnreachable);
  std::vector<detail::ItemWindow> windows;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (!detail::path_windows(structure, k, windows)) {
      continue;
    }
    double total = 0.0;
    for (const auto& w : windows) {
      total += std::abs(detail::window_shift(observation[w.item], w, epsilon));
    }
    row[k] = total;
  }
  return row;
}

/// The perturbation realizing perturbation_cost for one leaf; its L1 norm
/// equals the effort bit for bit.
inline std::vector<double> reconstruct_perturbation(const TreeStructure& structure,
                                                    std::span<const double> observation,
                                                    std::size_t leaf,
                                                    double epsilon = kDefaultEpsilon) {
  std::vector<detail::ItemWindow> windows;
  if (leaf >= structure.num_leaves() || !detail::path_windows(structure, leaf, windows)) {
    throw InfeasibleTarget("leaf " + std::to_string(leaf) + " cannot be reached by any observation");
  }
  std::vector<double> xi(observation.size(), 0.0);
  for (const auto& w : windows) {
    xi[w.item] = detail::window_shift(observation[w.item], w, epsilon);
  }
  return xi;
}

/// Effort matrix rho[j][k] and undisturbed leaves for a whole dataset.
struct PerturbationEffort {
  Table rho;
  std::vector<std::size_t> nominal_leaf;
  double epsilon = kDefaultEpsilon;
};

inline PerturbationEffort compute_efforts(const TreeStructure& structure, const Dataset& dataset,
                                          double epsilon = kDefaultEpsilon) {
  PerturbationEffort e;
  e.epsilon = epsilon;
  e.rho.reserve(dataset.size());
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    e.rho.push_back(perturbation_cost(structure, dataset.sample(j), epsilon));
    e.nominal_leaf.push_back(traverse(structure, dataset.sample(j)));
  }
  return e;
}

struct AdversaryResult {
  double objective = 0.0;
  std::vector<std::size_t> assignment;
  /// N x n; row j is xi_j.
  std::vector<std::vector<double>> perturbation;
  /// Sum over samples of the L1 norm of xi_j.
  double spent = 0.0;
};

/// Leaf assignment chosen by an adversary, before perturbations are rebuilt.
struct Assignment {
  double objective = 0.0;
  std::vector<std::size_t> leaves;
};

/// Sum_j values[j][leaves[j]] in sample order; every objective the library
/// reports is computed this way so equal assignments compare equal.
inline double assignment_value(const Table& values, const std::vector<std::size_t>& leaves) {
  double total = 0.0;
  for (std::size_t j = 0; j < leaves.size(); ++j) {
    total += values[j][leaves[j]];
  }
  return total;
}

/// Per-sample worst reachable leaf. Ties go to the nominal leaf, then to the
/// lowest index.
inline Assignment local_assignment(const Table& values, const Table& rho,
                                   const std::vector<std::size_t>& nominal, double gamma) {
  Assignment a;
  a.leaves.resize(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    std::size_t best = nominal[j];
    for (std::size_t k = 0; k < values[j].size(); ++k) {
      if (rho[j][k] <= gamma + kBudgetSlack && values[j][k] > values[j][best]) {
        best = k;
      }
    }
    a.leaves[j] = best;
  }
  a.objective = assignment_value(values, a.leaves);
  return a;
}

namespace detail {

struct KnapsackOption {
  std::size_t leaf;
  double weight;
  double gain;
};

struct HullStep {
  std::size_t sample;
  std::size_t option;
  double weight;
  double gain;
  double slope;
};

// Exact multiple-choice knapsack: every sample keeps its nominal leaf (weight
// 0) or moves to another leaf at weight rho and gain v - v_nominal. Depth-first
// branch and bound over samples, bounded by the LP relaxation (upper convex
// hulls merged greedily by slope).
class KnapsackSearch {
public:
  KnapsackSearch(const Table& values, const Table& rho, const std::vector<std::size_t>& nominal,
                 double gamma)
      : values_(values), nominal_(nominal), capacity_(gamma + kBudgetSlack) {
    const std::size_t n = values.size();
    options_.resize(n);
    base_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      base_[j] = values[j][nominal[j]];
      std::vector<KnapsackOption> opts;
      for (std::size_t k = 0; k < values[j].size(); ++k) {
        const double gain = values[j][k] - base_[j];
        if (k != nominal[j] && gain > 0.0 && rho[j][k] <= capacity_) {
          opts.push_back({k, rho[j][k], gain});
        }
      }
      // Drop options beaten by a lighter option with at least the same gain.
      std::sort(opts.begin(), opts.end(), [](const KnapsackOption& a, const KnapsackOption& b) {
        if (a.weight != b.weight) {
          return a.weight < b.weight;
        }
        if (a.gain != b.gain) {
          return a.gain > b.gain;
        }
        return a.leaf < b.leaf;
      });
      double best_gain = 0.0;
      for (const auto& o : opts) {
        if (o.gain > best_gain) {
          options_[j].push_back(o);
          best_gain = o.gain;
        }
      }
      add_hull(j);
    }
    std::stable_sort(steps_.begin(), steps_.end(),
                     [](const HullStep& a, const HullStep& b) { return a.slope > b.slope; });
    lp_choice_.assign(n, -1);
    double room = capacity_;
    for (const auto& s : steps_) {
      if (s.weight > room) {
        break;
      }
      room -= s.weight;
      lp_choice_[s.sample] = static_cast<int>(s.option);
    }
  }

  Assignment run() {
    const std::size_t n = values_.size();
    best_ = Assignment{assignment_value(values_, nominal_), nominal_};
    current_.assign(n, 0);
    order_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      order_[j] = branch_order(j);
    }
    double base_total = 0.0;
    for (double b : base_) {
      base_total += b;
    }
    search(0, 0.0, base_total);
    return best_;
  }

private:
  void add_hull(std::size_t j) {
    // Options are sorted by weight with strictly increasing gain; keep the
    // upper concave envelope starting at the origin.
    std::vector<KnapsackOption> hull;
    for (const auto& o : options_[j]) {
      while (!hull.empty()) {
        const double w0 = hull.size() >= 2 ? hull[hull.size() - 2].weight : 0.0;
        const double g0 = hull.size() >= 2 ? hull[hull.size() - 2].gain : 0.0;
        const auto& mid = hull.back();
        // Remove `mid` when it lies on or below the segment (w0,g0)-(o).
        if ((mid.gain - g0) * (o.weight - w0) <= (o.gain - g0) * (mid.weight - w0)) {
          hull.pop_back();
        } else {
          break;
        }
      }
      hull.push_back(o);
    }
    double w = 0.0;
    double g = 0.0;
    for (const auto& h : hull) {
      const double dw = h.weight - w;
      const double dg = h.gain - g;
      const auto option = static_cast<std::size_t>(
          std::find_if(options_[j].begin(), options_[j].end(),
                       [&](const KnapsackOption& o) { return o.leaf == h.leaf; }) -
          options_[j].begin());
      steps_.push_back({j, option, dw, dg, dw > 0.0 ? dg / dw : kUnreachable});
      w = h.weight;
      g = h.gain;
    }
  }

  // Integral part of the LP optimum first, then by decreasing gain, nominal last.
  std::vector<int> branch_order(std::size_t j) const {
    std::vector<int> order{lp_choice_[j]};
    for (int o = static_cast<int>(options_[j].size()) - 1; o >= -1; --o) {
      if (o != lp_choice_[j]) {
        order.push_back(o);
      }
    }
    return order;
  }

  double bound(std::size_t depth, double spent) const {
    double room = capacity_ - spent;
    double extra = 0.0;
    for (const auto& s : steps_) {
      if (s.sample < depth) {
        continue;
      }
      if (s.weight <= room) {
        room -= s.weight;
        extra += s.gain;
      } else {
        extra += s.gain * (room / s.weight);
        break;
      }
    }
    return extra;
  }

  void search(std::size_t depth, double spent, double value) {
    const std::size_t n = values_.size();
    if (depth == n) {
      std::vector<std::size_t> leaves(n);
      for (std::size_t j = 0; j < n; ++j) {
        leaves[j] = current_[j] < 0 ? nominal_[j] : options_[j][static_cast<std::size_t>(current_[j])].leaf;
      }
      const double objective = assignment_value(values_, leaves);
      if (objective > best_.objective) {
        best_ = Assignment{objective, std::move(leaves)};
      }
      return;
    }
    const double cutoff = best_.objective + 1e-9 * (1.0 + std::abs(best_.objective));
    if (value + bound(depth, spent) <= cutoff) {
      return;
    }
    for (int o : order_[depth]) {
      double w = 0.0;
      double g = 0.0;
      if (o >= 0) {
        const auto& opt = options_[depth][static_cast<std::size_t>(o)];
        w = opt.weight;
        g = opt.gain;
        if (spent + w > capacity_) {
          continue;
        }
      }
      current_[depth] = o;
      search(depth + 1, spent + w, value + g);
    }
    current_[depth] = -1;
  }

  const Table& values_;
  const std::vector<std::size_t>& nominal_;
  double capacity_;
  std::vector<double> base_;
  std::vector<std::vector<KnapsackOption>> options_;
  std::vector<HullStep> steps_;
  std::vector<int> lp_choice_;
  std::vector<std::vector<int>> order_;
  std::vector<int> current_;
  Assignment best_;
};

} // namespace detail

/// Exact worst case under a global budget: maximize Sum_j values[j][y_j]
/// subject to Sum_j rho[j][y_j] <= gamma.
inline Assignment global_assignment(const Table& values, const Table& rho,
                                    const std::vector<std::size_t>& nominal, double gamma) {
  return detail::KnapsackSearch(values, rho, nominal, gamma).run();
}

/// Exhaustive version of global_assignment. Candidates are visited with the
/// nominal leaf first and the first strictly better assignment is kept.
inline Assignment brute_force_assignment(const Table& values, const Table& rho,
                                         const std::vector<std::size_t>& nominal, double gamma,
                                         std::uint64_t cap = kDefaultAssignmentCap) {
  const std::size_t n = values.size();
  const std::size_t leaves = n == 0 ? 1 : values[0].size();
  long double total = 1.0L;
  for (std::size_t j = 0; j < n; ++j) {
    total *= static_cast<long double>(leaves);
  }
  if (total > static_cast<long double>(cap)) {
    throw CapExceeded("brute force needs " + std::to_string(static_cast<double>(total)) +
                      " assignments, cap is " + std::to_string(cap));
  }
  auto leaf_at = [&](std::size_t j, std::size_t rank) {
    if (rank == 0) {
      return nominal[j];
    }
    const std::size_t k = rank - 1;
    return k < nominal[j] ? k : k + 1;
  };
  std::vector<std::size_t> rank(n, 0);
  std::vector<std::size_t> pick(n);
  Assignment best{-kUnreachable, {}};
  while (true) {
    double spent = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      pick[j] = leaf_at(j, rank[j]);
      spent += rho[j][pick[j]];
    }
    if (spent <= gamma + kBudgetSlack) {
      const double objective = assignment_value(values, pick);
      if (objective > best.objective) {
        best = Assignment{objective, pick};
      }
    }
    // Odometer with the last sample turning fastest.
    std::size_t j = n;
    while (j > 0 && ++rank[j - 1] == leaves) {
      rank[j - 1] = 0;
      --j;
    }
    if (j == 0) {
      break;
    }
  }
  return best;
}

namespace detail {

inline AdversaryResult finish(const DecisionTree& tree, const Dataset& dataset, const Assignment& a,
                              double epsilon) {
  AdversaryResult r;
  r.objective = a.objective;
  r.assignment = a.leaves;
  r.perturbation.reserve(dataset.size());
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    auto xi = reconstruct_perturbation(tree.structure(), dataset.sample(j), a.leaves[j], epsilon);
    for (double d : xi) {
      r.spent += std::abs(d);
    }
    r.perturbation.push_back(std::move(xi));
  }
  return r;
}

} // namespace detail

inline AdversaryResult solve_local(const DecisionTree& tree, const Dataset& dataset, double gamma,
                                   const AdversaryOptions& options = {}) {
  const auto values = leaf_values(tree, dataset);
  const auto effort = compute_efforts(tree.structure(), dataset, options.epsilon);
  return detail::finish(tree, dataset, local_assignment(values, effort.rho, effort.nominal_leaf, gamma),
                        options.epsilon);
}

inline AdversaryResult solve_global(const DecisionTree& tree, const Dataset& dataset, double gamma,
                                    const AdversaryOptions& options = {}) {
  const auto values = leaf_values(tree, dataset);
  const auto effort = compute_efforts(tree.structure(), dataset, options.epsilon);
  return detail::finish(tree, dataset, global_assignment(values, effort.rho, effort.nominal_leaf, gamma),
                        options.epsilon);
}

inline AdversaryResult brute_force_global(const DecisionTree& tree, const Dataset& dataset, double gamma,
                                          const AdversaryOptions& options = {},
                                          std::uint64_t cap = kDefaultAssignmentCap) {
  const auto values = leaf_values(tree, dataset);
  const auto effort = compute_efforts(tree.structure(), dataset, options.epsilon);
  return detail::finish(tree, dataset,
                        brute_force_assignment(values, effort.rho, effort.nominal_leaf, gamma, cap),
                        options.epsilon);
}

inline AdversaryResult solve_adversary(const DecisionTree& tree, const Dataset& dataset,
                                       const UncertaintyBudget& budget,
                                       const AdversaryOptions& options = {}) {
  return budget.kind == BudgetKind::Local ? solve_local(tree, dataset, budget.gamma, options)
                                          : solve_global(tree, dataset, budget.gamma, options);
}

/// Worst-case total cost of the tree over the budgeted uncertainty set.
inline double evaluate_robust(const DecisionTree& tree, const Dataset& dataset,
                              const UncertaintyBudget& budget, const AdversaryOptions& options = {}) {
  const auto values = leaf_values(tree, dataset);
  const auto effort = compute_efforts(tree.structure(), dataset, options.epsilon);
  return budget.kind == BudgetKind::Local
             ? local_assignment(values, effort.rho, effort.nominal_leaf, budget.gamma).objective
             : global_assignment(values, effort.rho, effort.nominal_leaf, budget.gamma).objective;
}

/// As above, after checking every leaf solution against the feasible space.
inline double evaluate_robust(const DecisionTree& tree, const Dataset& dataset,
                              const UncertaintyBudget& budget, const FeasibleSpace& space,
                              const AdversaryOptions& options = {}) {
  if (tree.solution_size() != space.dimension()) {
    throw DimensionMismatch("tree leaves do not match the space dimension");
  }
  for (std::size_t k = 0; k < tree.num_leaves(); ++k) {
    if (!space.is_feasible(tree.leaf(k))) {
      throw InvalidInput("leaf " + std::to_string(k) + " holds an infeasible solution");
    }
  }
  return evaluate_robust(tree, dataset, budget, options);
}

} // namespace surrogate

#endif
