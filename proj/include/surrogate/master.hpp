#ifndef SURROGATE_MASTER_HPP
#define SURROGATE_MASTER_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "surrogate/adversary.hpp"
#include "surrogate/dataset.hpp"
#include "surrogate/errors.hpp"
#include "surrogate/leaf_assignment.hpp"
#include "surrogate/solution_space.hpp"
#include "surrogate/timing.hpp"
#include "surrogate/tree.hpp"

namespace surrogate {

/// Known perturbations xi^s (each N x n). The first one is always zero.
class ScenarioSet {
public:
  explicit ScenarioSet(const Dataset& dataset)
      : n_samples_(dataset.size()), n_items_(dataset.n_items()) {
    scenarios_.emplace_back(n_samples_, std::vector<double>(n_items_, 0.0));
  }

  std::size_t size() const { return scenarios_.size(); }
  const std::vector<std::vector<double>>& operator[](std::size_t s) const { return scenarios_[s]; }

  /// True if an entrywise-equal (within 1e-9) scenario is already present.
  bool contains(const std::vector<std::vector<double>>& xi) const {
    return std::any_of(scenarios_.begin(), scenarios_.end(), [&](const auto& known) {
      for (std::size_t j = 0; j < n_samples_; ++j) {
        for (std::size_t i = 0; i < n_items_; ++i) {
          if (std::abs(known[j][i] - xi[j][i]) > 1e-9) {
            return false;
          }
        }
      }
      return true;
    });
  }

  void add(std::vector<std::vector<double>> xi) {
    if (xi.size() != n_samples_ ||
        std::any_of(xi.begin(), xi.end(), [&](const auto& row) { return row.size() != n_items_; })) {
      throw DimensionMismatch("scenario shape does not match the dataset");
    }
    if (contains(xi)) {
      throw ConvergenceStall("scenario already known");
    }
    scenarios_.push_back(std::move(xi));
  }

private:
  std::size_t n_samples_;
  std::size_t n_items_;
  std::vector<std::vector<std::vector<double>>> scenarios_;
};

struct MasterOptions {
  int max_depth = 3;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  Deadline deadline;
};

struct MasterResult {
  DecisionTree tree;
  double objective = 0.0;
  bool optimal = true;
  std::size_t structures = 0;
};

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline bool test_bit(const Bits& b, std::size_t t) { return (b[t >> 6] >> (t & 63)) & 1U; }
inline void set_bit(Bits& b, std::size_t t) { b[t >> 6] |= std::uint64_t{1} << (t & 63); }

inline bool none(const Bits& b) {
  return std::all_of(b.begin(), b.end(), [](std::uint64_t w) { return w == 0; });
}

inline Bits bits_and(const Bits& a, const Bits& b) {
  Bits r(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) {
    r[w] = a[w] & b[w];
  }
  return r;
}

inline Bits bits_and_not(const Bits& a, const Bits& b) {
  Bits r(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) {
    r[w] = a[w] & ~b[w];
  }
  return r;
}

inline std::vector<Split> catalog_splits(const ThresholdCatalog& catalog) {
  std::vector<Split> splits;
  for (std::size_t i = 0; i < catalog.n_items(); ++i) {
    for (double theta : catalog[i]) {
      splits.push_back({i, theta});
    }
  }
  return splits;
}

inline double leaf_set_cost(const Dataset& dataset, std::uint64_t mask, const Solution& x) {
  double total = 0.0;
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    if ((mask >> j) & 1U) {
      total += linear_cost(dataset.sample(j), x);
    }
  }
  return total;
}

// Nominal master (only the zero scenario, free leaves): exact dynamic program
// over (remaining depth, sample subset). A leaf holding a subset takes the
// linear optimum of its summed costs.
class NominalProgram {
public:
  NominalProgram(const Dataset& dataset, const FeasibleSpace& space, const std::vector<Split>& splits,
                 Solution fill)
      : dataset_(dataset), space_(space), splits_(splits), fill_(std::move(fill)) {
    for (const auto& s : splits_) {
      std::uint64_t left = 0;
      for (std::size_t j = 0; j < dataset_.size(); ++j) {
        if (dataset_.sample(j)[s.item] <= s.threshold) {
          left |= std::uint64_t{1} << j;
        }
      }
      left_.push_back(left);
    }
  }

  DecisionTree solve(int depth) {
    const std::uint64_t all = dataset_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dataset_.size()) - 1;
    value(depth, all);
    TreeStructure structure;
    structure.depth = depth;
    structure.nodes.resize(inner_count(depth));
    std::vector<Solution> leaves(leaf_count(depth));
    std::vector<std::uint64_t> sets(inner_count(depth) + leaf_count(depth), 0);
    sets[0] = all;
    for (std::size_t q = 0; q < inner_count(depth); ++q) {
      const int level = static_cast<int>(std::bit_width(q + 1)) - 1;
      const auto& entry = memo_.at({depth - level, sets[q]});
      structure.nodes[q] = splits_[entry.split];
      sets[left_child(q)] = sets[q] & left_[entry.split];
      sets[right_child(q)] = sets[q] & ~left_[entry.split];
    }
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      leaves[k] = leaf_solution(sets[inner_count(depth) + k]);
    }
    return DecisionTree(std::move(structure), std::move(leaves));
  }

private:
  struct Entry {
    double value;
    std::size_t split;
  };

  Solution leaf_solution(std::uint64_t mask) const {
    if (mask == 0) {
      return fill_;
    }
    std::vector<double> total(dataset_.n_items(), 0.0);
    for (std::size_t j = 0; j < dataset_.size(); ++j) {
      if ((mask >> j) & 1U) {
        for (std::size_t i = 0; i < total.size(); ++i) {
          total[i] += dataset_.sample(j)[i];
        }
      }
    }
    return space_.min_linear(total);
  }

  double value(int depth, std::uint64_t mask) {
    if (depth == 0 || mask == 0) {
      if (depth > 0) {
        memo_.emplace(std::make_pair(depth, mask), Entry{0.0, 0});
      }
      if (mask == 0) {
        return 0.0;
      }
      auto [it, fresh] = leaf_cost_.try_emplace(mask, 0.0);
      if (fresh) {
        it->second = leaf_set_cost(dataset_, mask, leaf_solution(mask));
      }
      return it->second;
    }
    if (auto it = memo_.find({depth, mask}); it != memo_.end()) {
      return it->second.value;
    }
    // A split that keeps the whole subset together is never better than a
    // separating one (copy the subtree to both sides), so it is only used
    // when nothing separates.
    Entry best{std::numeric_limits<double>::infinity(), 0};
    std::set<std::uint64_t> seen;
    for (std::size_t c = 0; c < splits_.size(); ++c) {
      const std::uint64_t left = mask & left_[c];
      if (left == 0 || left == mask || !seen.insert(left).second) {
        continue;
      }
      const double v = value(depth - 1, left) + value(depth - 1, mask & ~left);
      if (v < best.value) {
        best = Entry{v, c};
      }
    }
    if (seen.empty()) {
      const std::uint64_t left = mask & left_[0];
      best = Entry{value(depth - 1, left) + value(depth - 1, mask & ~left), 0};
    }
    memo_.emplace(std::make_pair(depth, mask), best);
    return best.value;
  }

  const Dataset& dataset_;
  const FeasibleSpace& space_;
  const std::vector<Split>& splits_;
  Solution fill_;
  std::vector<std::uint64_t> left_;
  std::map<std::pair<int, std::uint64_t>, Entry> memo_;
  std::map<std::uint64_t, double> leaf_cost_;
};

// General master: depth-first search over split structures in level order.
// A point is a (scenario, sample) pair routed by its perturbed observation.
// Per node, candidate splits are deduplicated by the set of reaching points
// they send left; with free leaves only separating candidates are kept.
// Every complete structure is finished by the tuple search.
class StructureSearch {
public:
  StructureSearch(const Dataset& dataset, const ScenarioSet& scenarios, int depth,
                  const std::vector<Split>& splits, const CandidatePool& pool,
                  const std::vector<std::optional<std::size_t>>& preset, const Deadline& deadline)
      : dataset_(dataset), depth_(depth), splits_(splits), pool_(pool), preset_(preset),
        deadline_(deadline), n_(dataset.size()), s_count_(scenarios.size()),
        points_(n_ * s_count_), words_((points_ + 63) / 64),
        inner_(inner_count(depth)), leaves_(leaf_count(depth)) {
    free_leaves_ = preset_.empty();
    for (const auto& s : splits_) {
      Bits left(words_, 0);
      for (std::size_t sc = 0; sc < s_count_; ++sc) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (dataset_.sample(j)[s.item] + scenarios[sc][j][s.item] <= s.threshold) {
            set_bit(left, sc * n_ + j);
          }
        }
      }
      left_.push_back(std::move(left));
    }
    vmin_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      vmin_[j] = *std::min_element(pool_.values[j].begin(), pool_.values[j].end());
    }
    reach_.assign(inner_ + leaves_, Bits(words_, 0));
    for (std::size_t t = 0; t < points_; ++t) {
      set_bit(reach_[0], t);
    }
    chosen_.assign(inner_, 0);
  }

  /// Seeds the incumbent, e.g. with a known feasible tree.
  void seed(std::vector<std::size_t> splits, std::vector<std::size_t> choice, double objective) {
    best_splits_ = std::move(splits);
    best_choice_ = std::move(choice);
    best_objective_ = objective;
    have_incumbent_ = true;
  }

  void set_floor(double floor) { floor_ = floor; }

  bool run() {
    search(0);
    return !stopped_;
  }

  bool have_incumbent() const { return have_incumbent_; }
  double objective() const { return best_objective_; }
  std::size_t structures() const { return structures_; }

  DecisionTree tree() const {
    TreeStructure structure;
    structure.depth = depth_;
    for (auto c : best_splits_) {
      structure.nodes.push_back(splits_[c]);
    }
    std::vector<Solution> leaves;
    for (auto p : best_choice_) {
      leaves.push_back(pool_.solutions[p]);
    }
    return DecisionTree(std::move(structure), std::move(leaves));
  }

private:
  double margin() const { return prune_margin(best_objective_); }

  bool done() const { return have_incumbent_ && best_objective_ <= floor_; }

  std::vector<std::size_t> candidates(std::size_t q) const {
    std::vector<std::size_t> out;
    std::set<Bits> seen;
    std::size_t fallback = splits_.size();
    for (std::size_t c = 0; c < splits_.size(); ++c) {
      Bits left = bits_and(reach_[q], left_[c]);
      if (!seen.insert(left).second) {
        continue;
      }
      if (free_leaves_ && (none(left) || left == reach_[q])) {
        if (fallback == splits_.size()) {
          fallback = c;
        }
        continue;
      }
      out.push_back(c);
    }
    if (out.empty()) {
      out.push_back(fallback);
    }
    return out;
  }

  // Lower bound on max_s load once nodes [0, next) are fixed.
  double bound(std::size_t next) const {
    std::vector<double> load(s_count_, 0.0);
    for (std::size_t v = next; v < inner_ + leaves_; ++v) {
      if (v != 0 && parent_of(v) >= next) {
        continue;
      }
      if (v >= inner_) {
        const std::size_t k = v - inner_;
        for (std::size_t sc = 0; sc < s_count_; ++sc) {
          if (!free_leaves_) {
            for (std::size_t j = 0; j < n_; ++j) {
              if (test_bit(reach_[v], sc * n_ + j)) {
                load[sc] += pool_.values[j][*preset_[k]];
              }
            }
            continue;
          }
          double lb = std::numeric_limits<double>::infinity();
          for (std::size_t p = 0; p < pool_.size(); ++p) {
            double total = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
              if (test_bit(reach_[v], sc * n_ + j)) {
                total += pool_.values[j][p];
              }
            }
            lb = std::min(lb, total);
          }
          load[sc] += lb;
        }
        continue;
      }
      // Unsplit inner node: each point ends in some leaf below it.
      std::size_t first = v;
      std::size_t last = v;
      while (first < inner_) {
        first = left_child(first);
        last = right_child(last);
      }
      for (std::size_t sc = 0; sc < s_count_; ++sc) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (!test_bit(reach_[v], sc * n_ + j)) {
            continue;
          }
          if (free_leaves_) {
            load[sc] += vmin_[j];
          } else {
            double lb = std::numeric_limits<double>::infinity();
            for (std::size_t leaf = first; leaf <= last; ++leaf) {
              lb = std::min(lb, pool_.values[j][*preset_[leaf - inner_]]);
            }
            load[sc] += lb;
          }
        }
      }
    }
    return *std::max_element(load.begin(), load.end());
  }

  void finish_structure() {
    ++structures_;
    TupleProblem problem;
    problem.values = &pool_.values;
    problem.num_leaves = leaves_;
    problem.fill = pool_.fill;
    problem.preset = preset_;
    problem.leaf_of.assign(s_count_, std::vector<std::size_t>(n_, 0));
    for (std::size_t k = 0; k < leaves_; ++k) {
      for (std::size_t t = 0; t < points_; ++t) {
        if (test_bit(reach_[inner_ + k], t)) {
          problem.leaf_of[t / n_][t % n_] = k;
        }
      }
    }
    const double cutoff = have_incumbent_ ? best_objective_ : std::numeric_limits<double>::infinity();
    const auto result = solve_tuple(problem, cutoff);
    if (result.found && (!have_incumbent_ || result.objective < best_objective_)) {
      best_objective_ = result.objective;
      best_choice_ = result.choice;
      best_splits_ = chosen_;
      have_incumbent_ = true;
    }
  }

  void search(std::size_t q) {
    if (stopped_ || done()) {
      return;
    }
    if (q == inner_) {
      finish_structure();
      if (have_incumbent_ && structures_ % 256 == 0 && deadline_.expired()) {
        stopped_ = true;
      }
      return;
    }
    for (auto c : candidates(q)) {
      chosen_[q] = c;
      const Bits left = bits_and(reach_[q], left_[c]);
      reach_[left_child(q)] = left;
      reach_[right_child(q)] = bits_and_not(reach_[q], left_[c]);
      if (!have_incumbent_ || bound(q + 1) < best_objective_ - margin()) {
        search(q + 1);
      }
      if (stopped_ || done()) {
        return;
      }
    }
  }

  const Dataset& dataset_;
  int depth_;
  const std::vector<Split>& splits_;
  const CandidatePool& pool_;
  const std::vector<std::optional<std::size_t>>& preset_;
  Deadline deadline_;
  std::size_t n_;
  std::size_t s_count_;
  std::size_t points_;
  std::size_t words_;
  std::size_t inner_;
  std::size_t leaves_;
  bool free_leaves_ = true;
  std::vector<Bits> left_;
  std::vector<double> vmin_;
  std::vector<Bits> reach_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_splits_;
  std::vector<std::size_t> best_choice_;
  double best_objective_ = std::numeric_limits<double>::infinity();
  double floor_ = -std::numeric_limits<double>::infinity();
  bool have_incumbent_ = false;
  bool stopped_ = false;
  std::size_t structures_ = 0;
};

} // namespace detail

/// max_s Sum_j c_j^T T(c_j + xi_j^s), summed in sample order.
inline double master_objective(const DecisionTree& tree, const Dataset& dataset, const ScenarioSet& scenarios) {
  double worst = -std::numeric_limits<double>::infinity();
  std::vector<double> observation(dataset.n_items());
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    double total = 0.0;
    for (std::size_t j = 0; j < dataset.size(); ++j) {
      for (std::size_t i = 0; i < observation.size(); ++i) {
        observation[i] = dataset.sample(j)[i] + scenarios[s][j][i];
      }
      total += linear_cost(dataset.sample(j), tree.leaf(traverse(tree, observation)));
    }
    worst = std::max(worst, total);
  }
  return worst;
}

/**
 * Exact tree optimization over a finite scenario set.
 *
 * Minimizes max_s Sum_j c_j^T T(c_j + xi_j^s) over all structures with
 * thresholds from the catalog and all leaf solutions from the feasible set.
 * When fixed_leaves is given only the structure is optimized. On timeout the
 * incumbent is returned with optimal = false.
 */
inline MasterResult solve_master(const Dataset& dataset, const ScenarioSet& scenarios, const FeasibleSpace& space,
                                 int depth, const ThresholdCatalog& catalog, const MasterOptions& options = {},
                                 const std::vector<Solution>* fixed_leaves = nullptr) {
  if (depth < 0 || depth > options.max_depth) {
    throw InvalidInput("depth must lie in [0, " + std::to_string(options.max_depth) + "]");
  }
  if (dataset.n_items() != space.dimension()) {
    throw DimensionMismatch("dataset and space dimensions differ");
  }
  if (fixed_leaves && fixed_leaves->size() != leaf_count(depth)) {
    throw InvalidInput("fixed leaves do not match the depth");
  }
  const Solution fill = aggregate_optimum(dataset, space);
  if (depth == 0) {
    const Solution x = fixed_leaves ? fixed_leaves->front() : fill;
    auto tree = DecisionTree::single_leaf(x);
    const double objective = master_objective(tree, dataset, scenarios);
    return MasterResult{std::move(tree), objective, true, 1};
  }
  const auto splits = detail::catalog_splits(catalog);
  if (splits.empty()) {
    throw NoSplitAvailable("no item has two distinct observed values");
  }

  if (!fixed_leaves && scenarios.size() == 1 && dataset.size() <= 64) {
    detail::NominalProgram program(dataset, space, splits, fill);
    auto tree = program.solve(depth);
    const double objective = master_objective(tree, dataset, scenarios);
    return MasterResult{std::move(tree), objective, true, 1};
  }

  CandidatePool pool;
  std::vector<std::optional<std::size_t>> preset;
  if (fixed_leaves) {
    std::vector<Solution> unique;
    for (const auto& x : *fixed_leaves) {
      if (std::find(unique.begin(), unique.end(), x) == unique.end()) {
        unique.push_back(x);
      }
    }
    pool = make_pool(unique, dataset, fill);
    for (const auto& x : *fixed_leaves) {
      preset.emplace_back(static_cast<std::size_t>(
          std::find(pool.solutions.begin(), pool.solutions.end(), x) - pool.solutions.begin()));
    }
  } else {
    pool = build_pool(dataset, space, PoolPolicy::FullEnumeration, options.enumeration_cap);
  }

  detail::StructureSearch search(dataset, scenarios, depth, splits, pool, preset, options.deadline);
  if (!fixed_leaves) {
    // The aggregate optimum at every leaf is feasible; every (point) pays at
    // least its cheapest candidate.
    const double h1 = master_objective(DecisionTree::single_leaf(fill), dataset, scenarios);
    search.seed(std::vector<std::size_t>(inner_count(depth), 0), std::vector<std::size_t>(leaf_count(depth), pool.fill),
                h1);
    double floor = 0.0;
    for (std::size_t j = 0; j < dataset.size(); ++j) {
      floor += *std::min_element(pool.values[j].begin(), pool.values[j].end());
    }
    search.set_floor(floor);
  }
  const bool complete = search.run();
  auto tree = search.tree();
  const double objective = master_objective(tree, dataset, scenarios);
  return MasterResult{std::move(tree), objective, complete, search.structures()};
}

} // namespace surrogate

#endif
