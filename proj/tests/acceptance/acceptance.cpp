#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"

using namespace surrogate;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Checker {
public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      ++failures_;
      if (first_.empty()) {
        first_ = what;
      }
    }
  }

  Verdict verdict(const std::string& summary) const {
    if (failures_ == 0) {
      return {true, summary};
    }
    return {false, std::to_string(failures_) + " check(s) failed; first: " + first_};
  }

private:
  std::size_t failures_ = 0;
  std::string first_;
};

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6g", v);
  return buffer;
}

Verdict criterion_1() {
  Checker check;
  const auto d = fixtures::motivating_data();
  const auto space = fixtures::two_path_space();
  for (int depth = 1; depth <= 2; ++depth) {
    const double nominal = solve_nominal(d, *space, depth).master_objective;
    check.expect(nominal == 36.0, "nominal depth " + std::to_string(depth) + " = " + fmt(nominal));
  }
  const double shallow = solve_global(fixtures::single_split_tree(), d, 5.0).objective;
  check.expect(shallow == 50.0, "first tree global worst case = " + fmt(shallow));
  const auto deep = fixtures::two_split_tree();
  const double deep_nominal = nominal_objective(deep, d);
  check.expect(deep_nominal == 36.0, "second tree nominal = " + fmt(deep_nominal));
  const double deep_robust = solve_global(deep, d, 5.0).objective;
  const double deep_oracle = brute_force_global(deep, d, 5.0).objective;
  check.expect(deep_robust == deep_oracle, "second tree worst case " + fmt(deep_robust) + " != oracle " + fmt(deep_oracle));
  check.expect(deep_robust == fixtures::oracle_robust(deep, d, UncertaintyBudget(BudgetKind::Global, 5.0)),
               "second tree worst case differs from exhaustive perturbation oracle");
  return check.verdict("nominal 36, first tree 50, second tree nominal 36 and worst case " + fmt(deep_robust) +
                       " = oracle (reference value 41)");
}

struct Triple {
  DecisionTree tree;
  Dataset data;
  double gamma;
};

std::vector<Triple> random_triples() {
  Rng rng = make_rng(2024);
  std::vector<Triple> out;
  const SelectionSpace space(5, 2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n_samples = 1 + uniform_index(rng, 6);
    // A single sample has no split thresholds.
    const int depth = n_samples == 1 ? 0 : static_cast<int>(uniform_index(rng, 3));
    auto d = fixtures::random_dataset(rng, space.dimension(), n_samples, 0.0, 10.0);
    auto tree = depth == 0 ? DecisionTree::single_leaf(aggregate_optimum(d, space))
                           : fixtures::random_tree(rng, d, space, depth);
    const double gamma = uniform_real(rng, 0.0, 8.0 * static_cast<double>(depth + 1));
    out.push_back({std::move(tree), std::move(d), gamma});
  }
  return out;
}

double local_recompute(const DecisionTree& tree, const Dataset& d, double gamma) {
  double total = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const auto& c = d.sample(j);
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

Verdict criterion_2() {
  Checker check;
  const auto triples = random_triples();
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const auto& [tree, d, gamma] = triples[t];
    const double global = solve_global(tree, d, gamma).objective;
    const double brute = brute_force_global(tree, d, gamma).objective;
    check.expect(global == brute, "triple " + std::to_string(t) + ": global " + fmt(global) + " vs " + fmt(brute));
    const double local = solve_local(tree, d, gamma).objective;
    const double oracle = local_recompute(tree, d, gamma);
    check.expect(local == oracle, "triple " + std::to_string(t) + ": local " + fmt(local) + " vs " + fmt(oracle));
  }
  return check.verdict("200 triples: global = brute force and local = per-sample recomputation");
}

void check_replay(Checker& check, const DecisionTree& tree, const Dataset& d, const AdversaryResult& r,
                  BudgetKind kind, double gamma, const std::string& label) {
  double spent = 0.0;
  double value = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    CostVector moved(d.sample(j).begin(), d.sample(j).end());
    double norm = 0.0;
    for (std::size_t i = 0; i < moved.size(); ++i) {
      moved[i] += r.perturbation[j][i];
      norm += std::abs(r.perturbation[j][i]);
    }
    const auto leaf = traverse(tree, moved);
    check.expect(leaf == r.assignment[j], label + ": sample " + std::to_string(j) + " replays to a different leaf");
    value += linear_cost(d.sample(j), tree.leaf(leaf));
    if (kind == BudgetKind::Local) {
      check.expect(norm <= gamma + 1e-9, label + ": local budget exceeded by " + fmt(norm - gamma));
    }
    spent += norm;
  }
  if (kind == BudgetKind::Global) {
    check.expect(spent <= gamma + 1e-9, label + ": global budget exceeded by " + fmt(spent - gamma));
  }
  check.expect(std::abs(value - r.objective) <= 1e-9, label + ": replayed cost differs from objective");
}

Verdict criterion_3() {
  Checker check;
  const auto triples = random_triples();
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const auto& [tree, d, gamma] = triples[t];
    const auto label = "triple " + std::to_string(t);
    check_replay(check, tree, d, solve_global(tree, d, gamma), BudgetKind::Global, gamma, label + " global");
    check_replay(check, tree, d, brute_force_global(tree, d, gamma), BudgetKind::Global, gamma, label + " brute");
    check_replay(check, tree, d, solve_local(tree, d, gamma), BudgetKind::Local, gamma, label + " local");
  }
  return check.verdict("600 adversary results replay to their leaves within budget");
}

std::vector<Instance> small_pool() {
  std::vector<Instance> out;
  for (std::uint64_t i = 0; i < 20; ++i) {
    out.push_back(fixtures::grid_instance(3, 4, 4000 + i));
  }
  return out;
}

Verdict criterion_4() {
  Checker check;
  std::size_t iterations = 0;
  for (const auto& inst : small_pool()) {
    for (auto kind : {BudgetKind::Global, BudgetKind::Local}) {
      const auto budget = make_budget(inst.train, 0.05, 1, kind);
      const auto label = "seed " + std::to_string(inst.spec.seed) + " " + to_string(kind);
      const auto r = scenario_generation(inst.train, budget, *inst.space, 1);
      iterations += r.iterations;
      check.expect(r.converged, label + ": not converged");
      check.expect(std::abs(r.master_objective - r.adversary_history.back()) <= 1e-6,
                   label + ": master " + fmt(r.master_objective) + " vs adversary " + fmt(r.adversary_history.back()));
      for (std::size_t t = 1; t < r.master_history.size(); ++t) {
        check.expect(r.master_history[t] >= r.master_history[t - 1] - 1e-9, label + ": master history decreases");
      }
      const double oracle = fixtures::oracle_optimum(inst.train, *inst.space, 1, budget);
      check.expect(std::abs(r.adversary_objective - oracle) <= 1e-6,
                   label + ": SG " + fmt(r.adversary_objective) + " vs exhaustive " + fmt(oracle));
    }
  }
  return check.verdict("40 runs converged to the exhaustive optimum (" + std::to_string(iterations) + " iterations)");
}

HeuristicConfig bounded(std::size_t iterations, std::uint64_t seed, int depth) {
  HeuristicConfig c;
  c.time_limit = 60.0;
  c.max_iterations = iterations;
  c.seed = seed;
  c.depth = depth;
  return c;
}

Verdict criterion_5() {
  Checker check;
  constexpr int depth = 1;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto inst = fixtures::grid_instance(3, 4, 5000 + i);
    for (auto kind : {BudgetKind::Local, BudgetKind::Global}) {
      const auto budget = make_budget(inst.train, 1.01, depth, kind);
      const auto label = "seed " + std::to_string(inst.spec.seed) + " " + to_string(kind);
      const double h1_value = run_h1(inst.train, *inst.space, budget).adversary_objective;
      const double tree_value = h_tree(inst.train, *inst.space, budget, bounded(20, i, depth)).adversary_objective;
      const double alt_value = h_alt(inst.train, *inst.space, budget, bounded(3, i, depth)).adversary_objective;
      const auto sg = scenario_generation(inst.train, budget, *inst.space, depth);
      check.expect(sg.converged, label + ": SG not converged");
      check.expect(tree_value == h1_value, label + ": Htree " + fmt(tree_value) + " vs H1 " + fmt(h1_value));
      check.expect(alt_value == h1_value, label + ": Halt " + fmt(alt_value) + " vs H1 " + fmt(h1_value));
      check.expect(sg.adversary_objective == h1_value,
                   label + ": SG " + fmt(sg.adversary_objective) + " vs H1 " + fmt(h1_value));
    }
  }
  return check.verdict("40 runs at depth 1: H1 = Htree = Halt = SG exactly");
}

Verdict criterion_6() {
  Checker check;
  Rng rng = make_rng(606);
  std::size_t trees = 0;
  for (const auto& inst : small_pool()) {
    for (auto kind : {BudgetKind::Global, BudgetKind::Local}) {
      const auto budget = make_budget(inst.train, 0.05, 1, kind);
      const auto label = "seed " + std::to_string(inst.spec.seed) + " " + to_string(kind);
      const double h1_value = run_h1(inst.train, *inst.space, budget).adversary_objective;
      const auto tree_report = h_tree(inst.train, *inst.space, budget, bounded(30, inst.spec.seed, 1));
      const auto alt_report = h_alt(inst.train, *inst.space, budget, bounded(5, inst.spec.seed, 1));
      check.expect(tree_report.adversary_objective <= h1_value, label + ": Htree above H1");
      check.expect(alt_report.adversary_objective <= h1_value, label + ": Halt above H1");

      std::vector<DecisionTree> candidates{tree_report.tree, alt_report.tree,
                                           fixtures::random_tree(rng, inst.train, *inst.space, 1),
                                           fixtures::random_tree(rng, inst.train, *inst.space, 2)};
      for (const auto& tree : candidates) {
        ++trees;
        const double nominal = nominal_objective(tree, inst.train);
        const double zero = evaluate_robust(tree, inst.train, UncertaintyBudget(kind, 0.0));
        check.expect(zero == nominal, label + ": zero budget " + fmt(zero) + " vs nominal " + fmt(nominal));
        double previous = zero;
        for (double lambda : {0.025, 0.05, 0.1, 0.2, 0.4}) {
          const double value = evaluate_robust(tree, inst.train, make_budget(inst.train, lambda, 1, kind));
          check.expect(value >= previous, label + ": not monotone at lambda " + fmt(lambda));
          previous = value;
        }
      }
    }
  }
  return check.verdict("40 runs: Htree, Halt <= H1; " + std::to_string(trees) +
                       " trees monotone in the budget with zero budget = nominal");
}

Verdict criterion_7() {
  Checker check;
  const auto result = exp_correlation(CorrelationConfig{});
  double lowest = 1.0;
  for (const auto& cell : result.cells) {
    const auto label = "lambda " + fmt(cell.lambda) + " coupling " + to_string(cell.coupling);
    check.expect(std::isfinite(cell.r), label + ": degenerate correlation");
    check.expect(cell.r >= 0.8, label + ": r = " + fmt(cell.r));
    std::cout << "  " << label << ": r = " << fmt(cell.r) << " over " << cell.points << " points\n";
    lowest = std::min(lowest, cell.r);
  }
  return check.verdict(std::to_string(result.cells.size()) + " cells, lowest r = " + fmt(lowest));
}

Verdict criterion_8() {
  Checker check;
  const auto result = exp_relative_tables(TablesConfig{});
  std::size_t seen_glob = 0;
  std::size_t seen_loc = 0;
  std::size_t seen_h1 = 0;
  for (const auto& e : result.entries) {
    if (e.split != "train") {
      continue;
    }
    const auto label = "N=" + std::to_string(e.n_train) + " g=" + std::to_string(e.grid_side) + " " + e.method;
    if (e.method == "Htree_glob" && e.measure == "robust" && e.kind == "global") {
      ++seen_glob;
      check.expect(e.percent < 0.0, label + " robust global " + fmt(e.percent) + "%");
      std::cout << "  " << label << " robust global: " << fmt(e.percent) << "%\n";
    }
    if (e.method == "Htree_loc" && e.measure == "robust" && e.kind == "local") {
      ++seen_loc;
      check.expect(e.percent < 0.0, label + " robust local " + fmt(e.percent) + "%");
      std::cout << "  " << label << " robust local: " << fmt(e.percent) << "%\n";
    }
    if (e.method == "H1" && e.measure == "nominal") {
      ++seen_h1;
      check.expect(e.percent > 0.0, label + " nominal " + fmt(e.percent) + "%");
      std::cout << "  " << label << " nominal: " << fmt(e.percent) << "%\n";
    }
  }
  check.expect(seen_glob == 4 && seen_loc == 4 && seen_h1 == 4, "missing table cells");
  return check.verdict("Htree robust training values negative and H1 nominal training values positive in all 4 cells");
}

Verdict criterion_9() {
  Checker check;
  Rng rng = make_rng(909);
  const auto pi = default_pi_grid();
  std::size_t trees = 0;
  std::uint64_t seed = 9000;
  while (trees < 50) {
    const auto inst = fixtures::grid_instance(3, 4, seed++);
    const auto kind = trees % 2 == 0 ? BudgetKind::Global : BudgetKind::Local;
    const double lambda = uniform_real(rng, 0.02, 0.2);
    const auto budget = make_budget(inst.train, lambda, 1, kind);
    const auto sg = scenario_generation(inst.train, budget, *inst.space, 1);
    check.expect(sg.converged, "seed " + std::to_string(inst.spec.seed) + ": SG not converged");
    if (!sg.converged) {
      continue;
    }
    ++trees;
    const auto r = post_process(sg.tree, inst.train, budget, pi);
    const double input = evaluate_robust(sg.tree, inst.train, budget);
    const auto label = "seed " + std::to_string(inst.spec.seed);
    check.expect(r.objective <= input, label + ": post-processing worsened " + fmt(input) + " to " + fmt(r.objective));
    check.expect(evaluate_robust(r.tree, inst.train, budget) == r.objective, label + ": reported objective is stale");
    const auto expected = static_cast<std::size_t>(std::pow(pi.size(), sg.tree.num_inner()));
    check.expect(r.evaluations == expected,
                 label + ": " + std::to_string(r.evaluations) + " evaluations, expected " + std::to_string(expected));
  }
  return check.verdict("50 converged trees: never worse, |Pi|^|Q| evaluations each");
}

Dataset partition_instance(const std::vector<double>& w, double big) {
  const std::size_t n = w.size();
  const std::size_t p = n / 2;
  double total = 0.0;
  for (double v : w) {
    total += v;
  }
  CostVector c1(n + p, big);
  CostVector c2(n + p, 0.0);
  CostVector c3(n + p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    c1[i] = total - w[i];
    c2[i] = big;
    c3[i] = 2.0 * w[i];
  }
  c3[n] = total;
  return Dataset(n + p, {c1, c2, c3});
}

Verdict criterion_10() {
  Checker check;
  const std::vector<double> w{1, 2, 3, 4};
  const auto d = partition_instance(w, 60.0);
  const SelectionSpace space(6, 2);
  const TreeStructure structure{1, {{4, 10.0}}};
  const auto r = optimize_leaves_local(structure, d, 1.0, space);
  check.expect(r.objective == 25.0, "objective " + fmt(r.objective));
  const double replay = evaluate_robust(DecisionTree(structure, r.leaves), d, UncertaintyBudget(BudgetKind::Local, 1.0));
  check.expect(replay == 25.0, "leaves evaluate to " + fmt(replay));
  const auto pool = space.enumerate();
  std::vector<std::vector<double>> rho;
  for (std::size_t j = 0; j < d.size(); ++j) {
    rho.push_back(perturbation_cost(structure, d.sample(j)));
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> values(d.size(), std::vector<double>(2));
  for (const auto& t : fixtures::all_tuples(pool.size(), 2)) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        values[j][k] = linear_cost(d.sample(j), pool[t[k]]);
      }
    }
    best = std::min(best, fixtures::oracle_worst_case(values, rho, UncertaintyBudget(BudgetKind::Local, 1.0)));
  }
  check.expect(best == 25.0, "exhaustive tuples give " + fmt(best));
  return check.verdict("weights {1,2,3,4}: objective 25 = (p + 1/2) W, confirmed by " +
                       std::to_string(pool.size() * pool.size()) + " leaf tuples");
}

const std::vector<std::function<Verdict()>> kCriteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                      criterion_5, criterion_6, criterion_7, criterion_8,
                                                      criterion_9, criterion_10};

} // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--criterion") == 0 && a + 1 < argc) {
      selected.push_back(std::atoi(argv[++a]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (int c = 1; c <= static_cast<int>(kCriteria.size()); ++c) {
      selected.push_back(c);
    }
  }
  int failed = 0;
  for (int c : selected) {
    if (c < 1 || c > static_cast<int>(kCriteria.size())) {
      std::cerr << "unknown criterion " << c << '\n';
      return 2;
    }
    const Stopwatch clock;
    Verdict v;
    try {
      v = kCriteria[c - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c << ": " << v.detail << " [" << fmt(clock.seconds())
              << " s]" << std::endl;
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
