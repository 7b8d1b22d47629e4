#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace surrogate;
using fixtures::kPathA;
using fixtures::kPathB;

namespace {

constexpr double kEps = kDefaultEpsilon;

// Additive effort of the root-to-leaf path; exact when no item repeats.
double additive_effort(const TreeStructure& s, const CostVector& c, std::size_t leaf) {
  double total = 0.0;
  std::size_t q = 0;
  for (int level = 0; level < s.depth; ++level) {
    const bool right = (leaf >> (s.depth - 1 - level)) & 1U;
    const auto& split = s.nodes[q];
    total += right ? std::max(0.0, split.threshold - c[split.item] + kEps)
                   : std::max(0.0, c[split.item] - split.threshold);
    q = right ? 2 * q + 2 : 2 * q + 1;
  }
  return total;
}

bool items_distinct_on_paths(const TreeStructure& s) {
  for (std::size_t k = 0; k < s.num_leaves(); ++k) {
    std::vector<std::size_t> seen;
    std::size_t q = 0;
    for (int level = 0; level < s.depth; ++level) {
      if (std::find(seen.begin(), seen.end(), s.nodes[q].item) != seen.end()) {
        return false;
      }
      seen.push_back(s.nodes[q].item);
      q = ((k >> (s.depth - 1 - level)) & 1U) ? 2 * q + 2 : 2 * q + 1;
    }
  }
  return true;
}

// Per-sample worst reachable value, recomputed from scratch.
double local_oracle(const DecisionTree& tree, const Dataset& d, double gamma) {
  double total = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const CostVector c(d.sample(j).begin(), d.sample(j).end());
    double worst = linear_cost(c, tree.leaf(traverse(tree, c)));
    const auto rho = perturbation_cost(tree.structure(), c);
    for (std::size_t k = 0; k < tree.num_leaves(); ++k) {
      if (rho[k] <= gamma + kBudgetSlack) {
        worst = std::max(worst, linear_cost(c, tree.leaf(k)));
      }
    }
    total += worst;
  }
  return total;
}

void expect_valid(const DecisionTree& tree, const Dataset& d, const AdversaryResult& r, BudgetKind kind,
                  double gamma) {
  double spent = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    CostVector moved(d.sample(j).begin(), d.sample(j).end());
    double norm = 0.0;
    for (std::size_t i = 0; i < moved.size(); ++i) {
      moved[i] += r.perturbation[j][i];
      norm += std::abs(r.perturbation[j][i]);
    }
    EXPECT_EQ(traverse(tree, moved), r.assignment[j]);
    if (kind == BudgetKind::Local) {
      EXPECT_LE(norm, gamma + 1e-9);
    }
    spent += norm;
  }
  if (kind == BudgetKind::Global) {
    EXPECT_LE(spent, gamma + 1e-9);
  }
}

} // namespace

TEST(PerturbationCost, MotivatingExample) {
  const auto shallow = fixtures::single_split_tree();
  const auto row = perturbation_cost(shallow.structure(), CostVector{10, 8, 2, 2});
  EXPECT_DOUBLE_EQ(row[0], 5.0);
  EXPECT_DOUBLE_EQ(row[1], 0.0);
  const auto xi = reconstruct_perturbation(shallow.structure(), CostVector{10, 8, 2, 2}, 0);
  EXPECT_EQ(xi, (std::vector<double>{-5, 0, 0, 0}));

  const auto deep = fixtures::two_split_tree();
  const auto row3 = perturbation_cost(deep.structure(), CostVector{1, 5, 3, 10});
  EXPECT_DOUBLE_EQ(row3[0], 0.0);
  EXPECT_NEAR(row3[1], 1.5 + kEps, 1e-12);
  const auto xi3 = reconstruct_perturbation(deep.structure(), CostVector{1, 5, 3, 10}, 1);
  EXPECT_NEAR(xi3[1], 1.501, 1e-12);
  EXPECT_EQ(xi3[0], 0.0);
  EXPECT_EQ(xi3[2], 0.0);
  EXPECT_EQ(xi3[3], 0.0);
}

TEST(PerturbationCost, RepeatedItemsUseTightestWindow) {
  // Root: x0 <= 5; left child: x0 <= 2; right child: x0 <= 8.
  const TreeStructure s{2, {{0, 5.0}, {0, 2.0}, {0, 8.0}}};
  const auto row = perturbation_cost(s, CostVector{9.0});
  // Summing per-node efforts would give 4 + 7 for leaf 0.
  EXPECT_DOUBLE_EQ(row[0], 7.0);
  EXPECT_DOUBLE_EQ(row[1], 4.0);
  EXPECT_DOUBLE_EQ(row[2], 1.0);
  EXPECT_DOUBLE_EQ(row[3], 0.0);
}

TEST(PerturbationCost, ContradictoryPathIsUnreachable) {
  const TreeStructure s{2, {{0, 5.0}, {0, 8.0}, {0, 2.0}}};
  const auto row = perturbation_cost(s, CostVector{3.0});
  // Leaf 1: x0 <= 5 and x0 > 8 is empty; leaf 2: x0 > 5 and x0 <= 2 is empty.
  EXPECT_TRUE(std::isinf(row[1]));
  EXPECT_TRUE(std::isinf(row[2]));
  EXPECT_THROW(reconstruct_perturbation(s, CostVector{3.0}, 1), InfeasibleTarget);
}

TEST(PerturbationCost, MatchesAdditiveFormulaAndReplays) {
  Rng rng = make_rng(21);
  std::size_t checked = 0;
  for (int t = 0; t < 300; ++t) {
    const auto d = fixtures::random_dataset(rng, 5, 6);
    const auto s = sample_random_structure(build_threshold_catalog(d), 1 + static_cast<int>(t % 3), rng);
    const bool additive = items_distinct_on_paths(s);
    for (std::size_t j = 0; j < d.size(); ++j) {
      const CostVector c(d.sample(j).begin(), d.sample(j).end());
      const auto row = perturbation_cost(s, c);
      EXPECT_EQ(row[traverse(s, c)], 0.0);
      for (std::size_t k = 0; k < s.num_leaves(); ++k) {
        if (std::isinf(row[k])) {
          continue;
        }
        if (additive) {
          EXPECT_NEAR(row[k], additive_effort(s, c, k), 1e-9);
          ++checked;
        }
        const auto xi = reconstruct_perturbation(s, c, k);
        CostVector moved = c;
        double norm = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
          moved[i] += xi[i];
          norm += std::abs(xi[i]);
        }
        EXPECT_EQ(traverse(s, moved), k);
        EXPECT_NEAR(norm, row[k], 1e-9);
      }
    }
  }
  EXPECT_GT(checked, 1000U);
}

TEST(Adversary, MotivatingExampleValues) {
  const auto d = fixtures::motivating_data();
  const auto shallow = fixtures::single_split_tree();
  EXPECT_DOUBLE_EQ(solve_global(shallow, d, 5.0).objective, 50.0);
  EXPECT_DOUBLE_EQ(brute_force_global(shallow, d, 5.0).objective, 50.0);
  // Per-sample budgets of 5 reach further than one shared budget of 5.
  EXPECT_DOUBLE_EQ(solve_local(shallow, d, 5.0).objective, local_oracle(shallow, d, 5.0));
  EXPECT_GT(solve_local(shallow, d, 5.0).objective, 50.0);
  EXPECT_DOUBLE_EQ(solve_global(shallow, d, 0.0).objective, 36.0);
  EXPECT_DOUBLE_EQ(solve_local(shallow, d, 0.0).objective, 36.0);

  const auto deep = fixtures::two_split_tree();
  const double oracle = brute_force_global(deep, d, 5.0).objective;
  EXPECT_DOUBLE_EQ(oracle, 43.0);
  EXPECT_DOUBLE_EQ(solve_global(deep, d, 5.0).objective, oracle);
}

TEST(Adversary, ZeroBudgetIsNominalAssignment) {
  const auto d = fixtures::motivating_data();
  const auto deep = fixtures::two_split_tree();
  const auto r = solve_global(deep, d, 0.0);
  for (std::size_t j = 0; j < d.size(); ++j) {
    EXPECT_EQ(r.assignment[j], traverse(deep, d.sample(j)));
  }
  EXPECT_EQ(r.spent, 0.0);
}

TEST(Adversary, UnboundedBudgetReachesEveryLeaf) {
  const auto d = fixtures::motivating_data();
  const auto deep = fixtures::two_split_tree();
  double expected = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    expected += std::max(linear_cost(d.sample(j), kPathA), linear_cost(d.sample(j), kPathB));
  }
  EXPECT_DOUBLE_EQ(solve_local(deep, d, 1e6).objective, expected);
  EXPECT_DOUBLE_EQ(solve_global(deep, d, 1e6).objective, expected);
}

TEST(Adversary, GlobalMatchesBruteForceAndReplays) {
  Rng rng = make_rng(31);
  const SelectionSpace space(5, 2);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + uniform_index(rng, 5);
    const auto d = fixtures::random_dataset(rng, 5, n);
    const int depth = 1 + static_cast<int>(uniform_index(rng, 2));
    const auto tree = fixtures::random_tree(rng, d, space, depth);
    const double gamma = uniform_real(rng, 0.0, 12.0);
    const auto fast = solve_global(tree, d, gamma);
    const auto slow = brute_force_global(tree, d, gamma);
    EXPECT_EQ(fast.objective, slow.objective) << "trial " << t;
    expect_valid(tree, d, fast, BudgetKind::Global, gamma);
    expect_valid(tree, d, slow, BudgetKind::Global, gamma);
    const auto local = solve_local(tree, d, gamma);
    EXPECT_EQ(local.objective, local_oracle(tree, d, gamma));
    expect_valid(tree, d, local, BudgetKind::Local, gamma);
  }
}

TEST(Adversary, OrderingBetweenSets) {
  Rng rng = make_rng(32);
  const GridPathSpace space(3);
  for (int t = 0; t < 100; ++t) {
    const auto d = fixtures::random_dataset(rng, space.dimension(), 5, 1.0, 20.0);
    const auto tree = fixtures::random_tree(rng, d, space, 2);
    const double gamma = uniform_real(rng, 0.0, 6.0);
    const double n = static_cast<double>(d.size());
    const double glob = evaluate_robust(tree, d, {BudgetKind::Global, gamma});
    const double loc = evaluate_robust(tree, d, {BudgetKind::Local, gamma});
    const double glob_n = evaluate_robust(tree, d, {BudgetKind::Global, n * gamma});
    EXPECT_LE(glob, loc + 1e-9);
    EXPECT_GE(glob_n, loc - 1e-9);
    EXPECT_GE(glob, nominal_objective(tree, d) - 1e-9);
  }
}

TEST(Adversary, MonotoneInBudget) {
  Rng rng = make_rng(33);
  const GridPathSpace space(3);
  for (int t = 0; t < 50; ++t) {
    const auto d = fixtures::random_dataset(rng, space.dimension(), 6, 1.0, 20.0);
    const auto tree = fixtures::random_tree(rng, d, space, 2);
    for (auto kind : {BudgetKind::Local, BudgetKind::Global}) {
      double previous = nominal_objective(tree, d);
      EXPECT_EQ(evaluate_robust(tree, d, {kind, 0.0}), previous);
      for (double gamma : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double value = evaluate_robust(tree, d, {kind, gamma});
        EXPECT_GE(value, previous - 1e-9);
        previous = value;
      }
    }
  }
}

TEST(Adversary, LocalTieBreakPrefersNominal) {
  // Both leaves hold the same solution: the nominal leaf must be kept.
  const Dataset d(4, {{0, 1, 7, 9}});
  const DecisionTree tree(TreeStructure{1, {{0, 5.0}}}, {kPathA, kPathA});
  const auto r = solve_local(tree, d, 100.0);
  EXPECT_EQ(r.assignment[0], 0U);
  EXPECT_EQ(r.spent, 0.0);
}

TEST(Adversary, BruteForceCap) {
  const auto d = fixtures::motivating_data();
  EXPECT_THROW(brute_force_global(fixtures::two_split_tree(), d, 5.0, {}, 100), CapExceeded);
}

TEST(Adversary, FeasibilityCheckedAgainstSpace) {
  const auto d = fixtures::motivating_data();
  const auto space = fixtures::two_path_space();
  const DecisionTree bad = DecisionTree::single_leaf(Solution{1, 0, 1, 0});
  EXPECT_THROW(evaluate_robust(bad, d, {BudgetKind::Global, 1.0}, *space), InvalidInput);
  const DecisionTree short_leaf = DecisionTree::single_leaf(Solution{1, 1});
  EXPECT_THROW(evaluate_robust(short_leaf, d, {BudgetKind::Global, 1.0}, *space), DimensionMismatch);
}

TEST(Adversary, DepthZeroIsBudgetIndependent) {
  const auto d = fixtures::motivating_data();
  const auto tree = DecisionTree::single_leaf(kPathA);
  for (double gamma : {0.0, 1.0, 100.0}) {
    EXPECT_EQ(evaluate_robust(tree, d, {BudgetKind::Local, gamma}), 57.0);
    EXPECT_EQ(evaluate_robust(tree, d, {BudgetKind::Global, gamma}), 57.0);
  }
}
