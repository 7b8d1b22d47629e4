#ifndef SURROGATE_TESTS_FIXTURES_HPP
#define SURROGATE_TESTS_FIXTURES_HPP

#include <limits>
#include <memory>
#include <vector>

#include "surrogate.hpp"

namespace fixtures {

using namespace surrogate;

/// Two disjoint s-t paths: A = e1,e2 and B = e3,e4.
inline std::shared_ptr<DagPathSpace> two_path_space() {
  return std::make_shared<DagPathSpace>(4, std::vector<Edge>{{0, 1}, {1, 3}, {0, 2}, {2, 3}}, 0, 3);
}

/// Five observed cost vectors over four edges.
inline Dataset motivating_data() {
  return Dataset(4, {{0, 1, 7, 9}, {1, 5, 3, 10}, {9, 4, 4, 9}, {9, 10, 5, 7}, {10, 8, 2, 2}});
}

inline const Solution kPathA{1, 1, 0, 0};
inline const Solution kPathB{0, 0, 1, 1};

/// Route A when e1 <= 5.
inline DecisionTree single_split_tree() {
  return DecisionTree(TreeStructure{1, {{0, 5.0}}}, {kPathA, kPathB});
}

/// Route A when e1 <= 5 and e2 <= 6.5, B otherwise.
inline DecisionTree two_split_tree() {
  return DecisionTree(TreeStructure{2, {{0, 5.0}, {1, 6.5}, {2, 0.0}}}, {kPathA, kPathB, kPathB, kPathB});
}

/// Random dataset with entries drawn uniformly from [lo, hi].
inline Dataset random_dataset(Rng& rng, std::size_t n_items, std::size_t samples, double lo = 0.0,
                              double hi = 10.0) {
  std::vector<CostVector> rows(samples, CostVector(n_items));
  for (auto& row : rows) {
    for (auto& v : row) {
      v = uniform_real(rng, lo, hi);
    }
  }
  return Dataset(n_items, std::move(rows));
}

/// Random complete tree over the dataset's thresholds with random leaves
/// drawn from the space.
inline DecisionTree random_tree(Rng& rng, const Dataset& dataset, const FeasibleSpace& space, int depth) {
  const auto catalog = build_threshold_catalog(dataset);
  const auto options = space.enumerate();
  const auto structure = sample_random_structure(catalog, depth, rng);
  std::vector<Solution> leaves;
  for (std::size_t k = 0; k < structure.num_leaves(); ++k) {
    leaves.push_back(options[uniform_index(rng, options.size())]);
  }
  return DecisionTree(structure, std::move(leaves));
}

/// Every structure of the given depth over the catalog's splits.
inline std::vector<TreeStructure> all_structures(const ThresholdCatalog& catalog, int depth) {
  std::vector<Split> splits;
  for (std::size_t i = 0; i < catalog.n_items(); ++i) {
    for (double theta : catalog[i]) {
      splits.push_back({i, theta});
    }
  }
  const std::size_t inner = inner_count(depth);
  std::vector<TreeStructure> out;
  std::vector<std::size_t> index(inner, 0);
  while (true) {
    TreeStructure s{depth, {}};
    for (auto t : index) {
      s.nodes.push_back(splits[t]);
    }
    out.push_back(std::move(s));
    std::size_t q = inner;
    while (q > 0 && ++index[q - 1] == splits.size()) {
      index[q - 1] = 0;
      --q;
    }
    if (q == 0) {
      break;
    }
  }
  return out;
}

/// Every tuple of `leaves` indices into a pool of `pool` entries.
inline std::vector<std::vector<std::size_t>> all_tuples(std::size_t pool, std::size_t leaves) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> t(leaves, 0);
  while (true) {
    out.push_back(t);
    std::size_t k = leaves;
    while (k > 0 && ++t[k - 1] == pool) {
      t[k - 1] = 0;
      --k;
    }
    if (k == 0) {
      break;
    }
  }
  return out;
}

/// Worst case by exhaustive search: per sample for local budgets, over all
/// leaf assignments for global budgets.
inline double oracle_worst_case(const std::vector<std::vector<double>>& values, const std::vector<std::vector<double>>& rho,
                                const UncertaintyBudget& budget) {
  const std::size_t n = values.size();
  if (budget.kind == BudgetKind::Local) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < values[j].size(); ++k) {
        if (rho[j][k] <= budget.gamma + 1e-9) {
          worst = std::max(worst, values[j][k]);
        }
      }
      total += worst;
    }
    return total;
  }
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(n, 0);
  auto visit = [&](auto&& self, std::size_t j, double spent, double value) -> void {
    if (spent > budget.gamma + 1e-9) {
      return;
    }
    if (j == n) {
      best = std::max(best, value);
      return;
    }
    for (std::size_t k = 0; k < values[j].size(); ++k) {
      self(self, j + 1, spent + rho[j][k], value + values[j][k]);
    }
  };
  visit(visit, 0, 0.0, 0.0);
  return best;
}

inline double oracle_robust(const DecisionTree& tree, const Dataset& d, const UncertaintyBudget& budget) {
  std::vector<std::vector<double>> values(d.size());
  std::vector<std::vector<double>> rho(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    rho[j] = perturbation_cost(tree.structure(), d.sample(j));
    for (std::size_t k = 0; k < tree.num_leaves(); ++k) {
      values[j].push_back(linear_cost(d.sample(j), tree.leaf(k)));
    }
  }
  return oracle_worst_case(values, rho, budget);
}

/// Min-max optimum over all structures and leaf tuples of the given depth.
inline double oracle_optimum(const Dataset& d, const FeasibleSpace& space, int depth, const UncertaintyBudget& budget) {
  const auto pool = space.enumerate();
  const auto tuples = all_tuples(pool.size(), leaf_count(depth));
  // cost[j][p]: sample j under pool entry p.
  std::vector<std::vector<double>> cost(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (const auto& x : pool) {
      cost[j].push_back(linear_cost(d.sample(j), x));
    }
  }
  std::vector<TreeStructure> structures =
      depth == 0 ? std::vector<TreeStructure>{TreeStructure{}} : all_structures(build_threshold_catalog(d), depth);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> values(d.size(), std::vector<double>(leaf_count(depth)));
  for (const auto& s : structures) {
    std::vector<std::vector<double>> rho;
    for (std::size_t j = 0; j < d.size(); ++j) {
      rho.push_back(perturbation_cost(s, d.sample(j)));
    }
    for (const auto& t : tuples) {
      for (std::size_t j = 0; j < d.size(); ++j) {
        for (std::size_t k = 0; k < t.size(); ++k) {
          values[j][k] = cost[j][t[k]];
        }
      }
      best = std::min(best, oracle_worst_case(values, rho, budget));
    }
  }
  return best;
}

/// Min over trees of the max over explicit scenarios of the routed cost.
inline double oracle_master(const Dataset& d, const std::vector<std::vector<std::vector<double>>>& scenarios,
                            const FeasibleSpace& space, int depth) {
  const auto pool = space.enumerate();
  const auto tuples = all_tuples(pool.size(), leaf_count(depth));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : all_structures(build_threshold_catalog(d), depth)) {
    // leaf[s][j]
    std::vector<std::vector<std::size_t>> leaf;
    for (const auto& xi : scenarios) {
      std::vector<std::size_t> row;
      for (std::size_t j = 0; j < d.size(); ++j) {
        CostVector moved(d.sample(j).begin(), d.sample(j).end());
        for (std::size_t i = 0; i < moved.size(); ++i) {
          moved[i] += xi[j][i];
        }
        row.push_back(traverse(s, moved));
      }
      leaf.push_back(std::move(row));
    }
    for (const auto& t : tuples) {
      double worst = -std::numeric_limits<double>::infinity();
      for (const auto& row : leaf) {
        double total = 0.0;
        for (std::size_t j = 0; j < d.size(); ++j) {
          total += linear_cost(d.sample(j), pool[t[row[j]]]);
        }
        worst = std::max(worst, total);
      }
      best = std::min(best, worst);
    }
  }
  return best;
}

/// Random g x g grid instance with the library's generator.
inline Instance grid_instance(std::size_t g, std::size_t n_train, std::uint64_t seed, std::size_t n_test = 0) {
  InstanceSpec spec;
  spec.grid_side = g;
  spec.n_train = n_train;
  spec.n_test = n_test;
  spec.seed = seed;
  return generate_instance(spec);
}

} // namespace fixtures

#endif
