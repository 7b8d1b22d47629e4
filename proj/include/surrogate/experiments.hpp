#ifndef SURROGATE_EXPERIMENTS_HPP
#define SURROGATE_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "surrogate/adversary.hpp"
#include "surrogate/budget.hpp"
#include "surrogate/dataset.hpp"
#include "surrogate/errors.hpp"
#include "surrogate/heuristics.hpp"
#include "surrogate/instance.hpp"
#include "surrogate/leaf_assignment.hpp"
#include "surrogate/random.hpp"
#include "surrogate/scenario_generation.hpp"
#include "surrogate/tree.hpp"

namespace surrogate {

/// Sample Pearson correlation of (x, y) pairs.
inline double pearson_r(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2) {
    throw DegenerateVariance("correlation needs at least two pairs");
  }
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pairs.size());
  my /= static_cast<double>(pairs.size());
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw DegenerateVariance("correlation of a constant series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// (obj - nom) / nom, or nothing when the reference is zero.
inline std::optional<double> scaled_objective(double obj, double nom) {
  if (nom == 0.0) {
    return std::nullopt;
  }
  return (obj - nom) / nom;
}

// ---------------------------------------------------------------- CSV

struct CsvRow {
  std::string experiment;
  std::string instance;
  std::string method;
  std::string coupling;
  std::optional<double> lambda;
  std::string kind;
  std::string split;
  std::string metric;
  std::optional<double> value;
  /// Per-surrogate rows carry the surrogate's index.
  std::optional<std::size_t> index;
};

inline std::string csv_header() { return "experiment,instance,method,coupling,lambda,kind,split,metric,value,index"; }

inline std::string format_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", v);
  return buffer;
}

inline std::string format_row(const CsvRow& r) {
  std::ostringstream out;
  out << r.experiment << ',' << r.instance << ',' << r.method << ',' << r.coupling << ','
      << (r.lambda ? format_number(*r.lambda) : "") << ',' << r.kind << ',' << r.split << ',' << r.metric << ','
      << (r.value ? format_number(*r.value) : "") << ',' << (r.index ? std::to_string(*r.index) : "");
  return out.str();
}

inline void write_csv(const std::vector<CsvRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInput("cannot write " + path);
  }
  out << csv_header() << '\n';
  for (const auto& r : rows) {
    out << format_row(r) << '\n';
  }
}

// ---------------------------------------------------------------- workers

/// SURROGATE_WORKERS if set, otherwise the hardware concurrency.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("SURROGATE_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) {
      return static_cast<std::size_t>(v);
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) on up to `workers` threads. The first
/// exception is rethrown after all threads have joined.
template <class Body>
void parallel_for(std::size_t n, std::size_t workers, Body body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : threads) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

// ---------------------------------------------------------------- methods

enum class Method { Nominal, SG, H1, Htree, Hsol, Halt };

inline std::string to_string(Method m) {
  switch (m) {
  case Method::Nominal: return "nominal";
  case Method::SG: return "SG";
  case Method::H1: return "H1";
  case Method::Htree: return "Htree";
  case Method::Hsol: return "Hsol";
  case Method::Halt: return "Halt";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  for (auto m : {Method::Nominal, Method::SG, Method::H1, Method::Htree, Method::Hsol, Method::Halt}) {
    if (to_string(m) == s) {
      return m;
    }
  }
  throw InvalidInput("unknown method: " + s);
}

struct MethodSettings {
  int depth = 2;
  double time_limit = kDefaultTimeLimit;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 0;
  double epsilon = kDefaultEpsilon;
};

/// Trains a tree with any method; the report's adversary_objective is the
/// tree's worst case under `budget` on the training data.
inline SolveReport run_method(Method method, const Dataset& train, const FeasibleSpace& space,
                              const UncertaintyBudget& budget, const MethodSettings& settings) {
  HeuristicConfig config;
  config.time_limit = settings.time_limit;
  config.seed = settings.seed;
  config.depth = settings.depth;
  config.max_iterations = settings.max_iterations;
  config.epsilon = settings.epsilon;
  SolveLimits limits;
  limits.time_limit = settings.time_limit;
  limits.epsilon = settings.epsilon;
  limits.max_depth = std::max(3, settings.depth);
  switch (method) {
  case Method::Nominal: {
    auto report = solve_nominal(train, space, settings.depth, limits);
    report.adversary_objective = evaluate_robust(report.tree, train, budget, AdversaryOptions{settings.epsilon});
    return report;
  }
  case Method::SG: return scenario_generation(train, budget, space, settings.depth, limits);
  case Method::H1: return run_h1(train, space, budget, config);
  case Method::Htree: return h_tree(train, space, budget, config);
  case Method::Hsol: return h_sol(train, space, budget, config);
  case Method::Halt: return h_alt(train, space, budget, config);
  }
  throw InvalidInput("unknown method");
}

/// Nominal and robust objectives of a tree on training and test data.
struct EvalRecord {
  double nominal_train = 0.0;
  double robust_train = 0.0;
  std::optional<double> nominal_test;
  std::optional<double> robust_test;
};

inline EvalRecord evaluate_tree(const DecisionTree& tree, const Instance& instance, const UncertaintyBudget& budget,
                                double epsilon = kDefaultEpsilon) {
  EvalRecord r;
  const AdversaryOptions options{epsilon};
  r.nominal_train = nominal_objective(tree, instance.train);
  r.robust_train = evaluate_robust(tree, instance.train, budget, *instance.space, options);
  if (instance.test) {
    r.nominal_test = nominal_objective(tree, *instance.test);
    r.robust_test = evaluate_robust(tree, *instance.test, budget, *instance.space, options);
  }
  return r;
}

inline std::uint64_t instance_seed(std::uint64_t base, std::size_t index) { return base * 1000003ULL + index; }

// ---------------------------------------------------------------- experiment 1

struct CorrelationConfig {
  std::size_t instances = 20;
  std::size_t grid_side = 4;
  std::size_t n_train = 5;
  std::size_t trees = 200;
  int depth = 2;
  std::vector<double> lambdas{0.05, 0.10, 0.15, 0.20};
  std::vector<Coupling> couplings{Coupling::ScaledByN, Coupling::Equal};
  std::uint64_t seed = 1;
  double epsilon = kDefaultEpsilon;
};

struct CorrelationCell {
  double lambda = 0.0;
  Coupling coupling = Coupling::ScaledByN;
  double r = 0.0;
  std::size_t points = 0;
};

struct CorrelationResult {
  std::vector<CsvRow> rows;
  std::vector<CorrelationCell> cells;
};

/// Leaves of a fixed structure optimized for the undisturbed samples: each
/// leaf takes the linear optimum of the summed costs routed to it.
inline DecisionTree nominal_leaves(const TreeStructure& structure, const Dataset& dataset, const FeasibleSpace& space) {
  std::vector<std::vector<double>> sums(structure.num_leaves(), std::vector<double>(dataset.n_items(), 0.0));
  std::vector<bool> used(structure.num_leaves(), false);
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    const auto k = traverse(structure, dataset.sample(j));
    used[k] = true;
    for (std::size_t i = 0; i < dataset.n_items(); ++i) {
      sums[k][i] += dataset.sample(j)[i];
    }
  }
  const Solution fill = aggregate_optimum(dataset, space);
  std::vector<Solution> leaves;
  for (std::size_t k = 0; k < structure.num_leaves(); ++k) {
    leaves.push_back(used[k] ? space.min_linear(sums[k]) : fill);
  }
  return DecisionTree(structure, std::move(leaves));
}

/**
 * Random surrogates evaluated under both uncertainty sets. Every instance
 * contributes `trees` random structures with nominally optimized leaves;
 * r is pooled over all instances per (lambda, coupling) cell.
 */
inline CorrelationResult exp_correlation(const CorrelationConfig& config) {
  struct PerInstance {
    // values[cell][t] = (global, local)
    std::vector<std::vector<std::pair<double, double>>> values;
  };
  const std::size_t cells = config.lambdas.size() * config.couplings.size();
  std::vector<PerInstance> results(config.instances);
  parallel_for(config.instances, worker_count(), [&](std::size_t idx) {
    InstanceSpec spec;
    spec.grid_side = config.grid_side;
    spec.n_train = config.n_train;
    spec.n_test = 0;
    spec.seed = instance_seed(config.seed, idx);
    const auto instance = generate_instance(spec);
    const auto catalog = build_threshold_catalog(instance.train);
    Rng rng = make_rng(spec.seed, 21);
    std::vector<DecisionTree> trees;
    for (std::size_t t = 0; t < config.trees; ++t) {
      trees.push_back(nominal_leaves(sample_random_structure(catalog, config.depth, rng), instance.train, *instance.space));
    }
    auto& out = results[idx];
    out.values.assign(cells, {});
    const AdversaryOptions options{config.epsilon};
    for (std::size_t l = 0; l < config.lambdas.size(); ++l) {
      const double lambda = config.lambdas[l];
      const auto local = make_budget(instance.train, lambda, config.depth, BudgetKind::Local);
      std::vector<double> local_values;
      for (const auto& tree : trees) {
        local_values.push_back(evaluate_robust(tree, instance.train, local, options));
      }
      for (std::size_t c = 0; c < config.couplings.size(); ++c) {
        const auto global = make_budget(instance.train, lambda, config.depth, BudgetKind::Global, config.couplings[c]);
        auto& cell = out.values[l * config.couplings.size() + c];
        for (std::size_t t = 0; t < trees.size(); ++t) {
          cell.emplace_back(evaluate_robust(trees[t], instance.train, global, options), local_values[t]);
        }
      }
    }
  });

  CorrelationResult result;
  for (std::size_t l = 0; l < config.lambdas.size(); ++l) {
    for (std::size_t c = 0; c < config.couplings.size(); ++c) {
      const std::size_t cell = l * config.couplings.size() + c;
      std::vector<std::pair<double, double>> pooled;
      for (std::size_t idx = 0; idx < config.instances; ++idx) {
        const auto& values = results[idx].values[cell];
        for (std::size_t t = 0; t < values.size(); ++t) {
          const auto inst = std::to_string(idx);
          const auto coupling = to_string(config.couplings[c]);
          result.rows.push_back({"corr", inst, "random", coupling, config.lambdas[l], "global", "train", "robust",
                                 values[t].first, t});
          result.rows.push_back({"corr", inst, "random", coupling, config.lambdas[l], "local", "train", "robust",
                                 values[t].second, t});
          pooled.push_back(values[t]);
        }
      }
      CorrelationCell summary{config.lambdas[l], config.couplings[c], 0.0, pooled.size()};
      std::optional<double> r;
      try {
        r = pearson_r(pooled);
        summary.r = *r;
      } catch (const DegenerateVariance&) {
        summary.r = std::nan("");
      }
      result.cells.push_back(summary);
      result.rows.push_back({"corr", "all", "random", to_string(config.couplings[c]), config.lambdas[l], "both", "train",
                             "pearson_r", r, std::nullopt});
    }
  }
  return result;
}

// ---------------------------------------------------------------- experiment 2

inline std::vector<double> default_sweep_lambdas() {
  std::vector<double> out;
  for (int t = 0; t <= 10; ++t) {
    out.push_back(t / 100.0);
  }
  for (int t = 12; t <= 20; t += 2) {
    out.push_back(t / 100.0);
  }
  return out;
}

struct SweepConfig {
  std::size_t instances = 20;
  std::size_t grid_side = 4;
  std::size_t n_train = 5;
  int depth = 2;
  std::vector<double> lambdas = default_sweep_lambdas();
  Coupling coupling = Coupling::ScaledByN;
  std::vector<Method> methods{Method::Nominal, Method::SG, Method::H1, Method::Htree, Method::Hsol, Method::Halt};
  double time_limit = 60.0;
  std::size_t max_iterations = 0;
  std::uint64_t seed = 2;
  double epsilon = kDefaultEpsilon;
};

struct SweepResult {
  std::vector<CsvRow> rows;
  /// Instances solved to optimality by SG per (lambda index, kind).
  std::map<std::pair<std::size_t, BudgetKind>, std::size_t> optimal_counts;
};

/**
 * Robust in-sample objective per method and lambda, trained for one
 * uncertainty set and evaluated on both (the cross-evaluation).
 */
inline SweepResult exp_lambda_sweep(const SweepConfig& config) {
  struct Entry {
    std::vector<CsvRow> rows;
    std::vector<std::tuple<std::size_t, BudgetKind, bool>> sg_optimal;
  };
  std::vector<Entry> entries(config.instances);
  parallel_for(config.instances, worker_count(), [&](std::size_t idx) {
    InstanceSpec spec;
    spec.grid_side = config.grid_side;
    spec.n_train = config.n_train;
    spec.n_test = 0;
    spec.seed = instance_seed(config.seed, idx);
    const auto instance = generate_instance(spec);
    auto& entry = entries[idx];
    const auto inst = std::to_string(idx);
    const auto coupling = to_string(config.coupling);
    MethodSettings settings;
    settings.depth = config.depth;
    settings.time_limit = config.time_limit;
    settings.max_iterations = config.max_iterations;
    settings.seed = spec.seed;
    settings.epsilon = config.epsilon;
    for (std::size_t l = 0; l < config.lambdas.size(); ++l) {
      const double lambda = config.lambdas[l];
      const auto local = make_budget(instance.train, lambda, config.depth, BudgetKind::Local);
      const auto global = make_budget(instance.train, lambda, config.depth, BudgetKind::Global, config.coupling);
      for (auto method : config.methods) {
        for (const auto& trained : {global, local}) {
          const auto report = run_method(method, instance.train, *instance.space, trained, settings);
          const std::string label = to_string(method) + "_" + (trained.kind == BudgetKind::Global ? "glob" : "loc");
          for (const auto& evaluated : {global, local}) {
            const double value = evaluate_robust(report.tree, instance.train, evaluated, AdversaryOptions{config.epsilon});
            entry.rows.push_back({"sweep", inst, label, coupling, lambda, to_string(evaluated.kind), "train", "robust",
                                  value, std::nullopt});
          }
          if (method == Method::SG) {
            entry.sg_optimal.emplace_back(l, trained.kind, report.optimal);
            entry.rows.push_back({"sweep", inst, label, coupling, lambda, to_string(trained.kind), "train", "optimal",
                                  report.optimal ? 1.0 : 0.0, std::nullopt});
          }
          entry.rows.push_back({"sweep", inst, label, coupling, lambda, to_string(trained.kind), "train", "runtime",
                                report.wall_time, std::nullopt});
        }
      }
    }
  });
  SweepResult result;
  for (auto& entry : entries) {
    result.rows.insert(result.rows.end(), entry.rows.begin(), entry.rows.end());
    for (const auto& [l, kind, optimal] : entry.sg_optimal) {
      result.optimal_counts[{l, kind}] += optimal ? 1 : 0;
    }
  }
  for (const auto& [key, count] : result.optimal_counts) {
    result.rows.push_back({"sweep", "all", "SG_" + std::string(key.second == BudgetKind::Global ? "glob" : "loc"),
                           to_string(config.coupling), config.lambdas[key.first], to_string(key.second), "train",
                           "optimal_count", static_cast<double>(count), std::nullopt});
  }
  return result;
}

// ---------------------------------------------------------------- experiment 3

struct TablesConfig {
  std::size_t instances = 20;
  /// (N, g) combinations.
  std::vector<std::pair<std::size_t, std::size_t>> cells{{3, 3}, {3, 4}, {5, 3}, {5, 4}};
  double lambda = 0.05;
  Coupling coupling = Coupling::ScaledByN;
  int depth = 2;
  double time_limit = 60.0;
  std::size_t max_iterations = 0;
  std::size_t n_test = 1000;
  std::uint64_t seed = 3;
  double epsilon = kDefaultEpsilon;
};

/// Mean scaled value (in percent) of one method in one table cell.
struct TableEntry {
  std::size_t n_train = 0;
  std::size_t grid_side = 0;
  std::string method;  // H1, Htree_glob, Htree_loc, nominal
  std::string split;   // train | test
  std::string measure; // nominal | robust
  std::string kind;    // global | local | "" for nominal measures
  double percent = 0.0;
  std::size_t count = 0;
};

struct TablesResult {
  std::vector<CsvRow> rows;
  std::vector<TableEntry> entries;
};

/**
 * Relative nominal and robust objectives against the nominal tree, per
 * (N, g) cell, on training and test data. The training budget is reused
 * unchanged on the test data.
 */
inline TablesResult exp_relative_tables(const TablesConfig& config) {
  struct Job {
    std::size_t cell;
    std::size_t instance;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < config.cells.size(); ++c) {
    for (std::size_t i = 0; i < config.instances; ++i) {
      jobs.push_back({c, i});
    }
  }
  struct Outcome {
    std::vector<CsvRow> rows;
    // (method, split, measure, kind) -> scaled
    std::vector<std::tuple<std::string, std::string, std::string, std::string, std::optional<double>>> scaled;
  };
  std::vector<Outcome> outcomes(jobs.size());
  parallel_for(jobs.size(), worker_count(), [&](std::size_t jdx) {
    const auto [n_train, grid] = config.cells[jobs[jdx].cell];
    InstanceSpec spec;
    spec.grid_side = grid;
    spec.n_train = n_train;
    spec.n_test = config.n_test;
    spec.seed = instance_seed(config.seed + 1000 * jobs[jdx].cell, jobs[jdx].instance);
    const auto instance = generate_instance(spec);
    const auto local = make_budget(instance.train, config.lambda, config.depth, BudgetKind::Local);
    const auto global = make_budget(instance.train, config.lambda, config.depth, BudgetKind::Global, config.coupling);
    MethodSettings settings;
    settings.depth = config.depth;
    settings.time_limit = config.time_limit;
    settings.max_iterations = config.max_iterations;
    settings.seed = spec.seed;
    settings.epsilon = config.epsilon;

    const auto nominal = run_method(Method::Nominal, instance.train, *instance.space, local, settings).tree;
    const auto single = run_method(Method::H1, instance.train, *instance.space, local, settings).tree;
    const auto tree_glob = run_method(Method::Htree, instance.train, *instance.space, global, settings).tree;
    const auto tree_loc = run_method(Method::Htree, instance.train, *instance.space, local, settings).tree;

    auto& out = outcomes[jdx];
    const std::string inst = std::to_string(n_train) + "x" + std::to_string(grid) + "#" + std::to_string(jobs[jdx].instance);
    const auto coupling = to_string(config.coupling);
    const std::vector<std::pair<std::string, const DecisionTree*>> methods{
        {"nominal", &nominal}, {"H1", &single}, {"Htree_glob", &tree_glob}, {"Htree_loc", &tree_loc}};
    std::map<std::string, EvalRecord> eval_global;
    std::map<std::string, EvalRecord> eval_local;
    for (const auto& [name, tree] : methods) {
      eval_global[name] = evaluate_tree(*tree, instance, global, config.epsilon);
      eval_local[name] = evaluate_tree(*tree, instance, local, config.epsilon);
      const auto& g = eval_global[name];
      const auto& l = eval_local[name];
      out.rows.push_back({"tables", inst, name, coupling, config.lambda, "", "train", "nominal", g.nominal_train, std::nullopt});
      out.rows.push_back({"tables", inst, name, coupling, config.lambda, "global", "train", "robust", g.robust_train, std::nullopt});
      out.rows.push_back({"tables", inst, name, coupling, config.lambda, "local", "train", "robust", l.robust_train, std::nullopt});
      if (instance.test) {
        out.rows.push_back({"tables", inst, name, coupling, config.lambda, "", "test", "nominal", g.nominal_test, std::nullopt});
        out.rows.push_back({"tables", inst, name, coupling, config.lambda, "global", "test", "robust", g.robust_test, std::nullopt});
        out.rows.push_back({"tables", inst, name, coupling, config.lambda, "local", "test", "robust", l.robust_test, std::nullopt});
      }
    }
    const auto& ref_g = eval_global["nominal"];
    const auto& ref_l = eval_local["nominal"];
    for (const auto& [name, tree] : methods) {
      const auto& g = eval_global[name];
      const auto& l = eval_local[name];
      out.scaled.emplace_back(name, "train", "nominal", "", scaled_objective(g.nominal_train, ref_g.nominal_train));
      out.scaled.emplace_back(name, "train", "robust", "global", scaled_objective(g.robust_train, ref_g.robust_train));
      out.scaled.emplace_back(name, "train", "robust", "local", scaled_objective(l.robust_train, ref_l.robust_train));
      if (instance.test) {
        out.scaled.emplace_back(name, "test", "nominal", "", scaled_objective(*g.nominal_test, *ref_g.nominal_test));
        out.scaled.emplace_back(name, "test", "robust", "global", scaled_objective(*g.robust_test, *ref_g.robust_test));
        out.scaled.emplace_back(name, "test", "robust", "local", scaled_objective(*l.robust_test, *ref_l.robust_test));
      }
    }
    for (const auto& [name, split, measure, kind, value] : out.scaled) {
      out.rows.push_back({"tables", inst, name, coupling, config.lambda, kind, split, measure + "_scaled",
                          value ? std::optional<double>(*value * 100.0) : std::nullopt, std::nullopt});
    }
  });

  TablesResult result;
  using Key = std::tuple<std::size_t, std::string, std::string, std::string, std::string>;
  std::map<Key, std::pair<double, std::size_t>> sums;
  std::vector<Key> order;
  for (std::size_t jdx = 0; jdx < jobs.size(); ++jdx) {
    auto& out = outcomes[jdx];
    result.rows.insert(result.rows.end(), out.rows.begin(), out.rows.end());
    for (const auto& [name, split, measure, kind, value] : out.scaled) {
      const Key key{jobs[jdx].cell, name, split, measure, kind};
      auto [it, fresh] = sums.try_emplace(key, 0.0, 0);
      if (fresh) {
        order.push_back(key);
      }
      if (value) {
        it->second.first += *value * 100.0;
        it->second.second += 1;
      }
    }
  }
  for (const auto& key : order) {
    const auto& [cell, name, split, measure, kind] = key;
    const auto [total, count] = sums[key];
    TableEntry e{config.cells[cell].first, config.cells[cell].second, name, split, measure, kind,
                 count ? total / static_cast<double>(count) : std::nan(""), count};
    result.entries.push_back(e);
    const std::string inst = std::to_string(e.n_train) + "x" + std::to_string(e.grid_side);
    result.rows.push_back({"tables", inst, name, to_string(config.coupling), config.lambda, kind, split,
                           measure + "_scaled_mean", count ? std::optional<double>(e.percent) : std::nullopt,
                           std::nullopt});
  }
  return result;
}

} // namespace surrogate

#endif
