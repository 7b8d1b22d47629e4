#ifndef SURROGATE_BUDGET_HPP
#define SURROGATE_BUDGET_HPP

#include <cmath>
#include <string>

#include "surrogate/dataset.hpp"
#include "surrogate/errors.hpp"

namespace surrogate {

/// Local: every sample may move by at most gamma in L1. Global: all samples
/// together may move by at most gamma.
enum class BudgetKind { Local, Global };

/// How a global budget is derived from the local one.
enum class Coupling { ScaledByN, Equal };

struct UncertaintyBudget {
  BudgetKind kind = BudgetKind::Global;
  double gamma = 0.0;

  UncertaintyBudget() = default;
  UncertaintyBudget(BudgetKind k, double g) : kind(k), gamma(g) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw InvalidInput("budget must be finite and nonnegative");
    }
  }
};

inline std::string to_string(BudgetKind kind) {
  return kind == BudgetKind::Local ? "local" : "global";
}

inline BudgetKind parse_budget_kind(const std::string& s) {
  if (s == "local" || s == "loc") {
    return BudgetKind::Local;
  }
  if (s == "global" || s == "glob") {
    return BudgetKind::Global;
  }
  throw InvalidInput("unknown budget kind: " + s);
}

inline std::string to_string(Coupling coupling) {
  return coupling == Coupling::ScaledByN ? "N" : "1";
}

inline Coupling parse_coupling(const std::string& s) {
  if (s == "N" || s == "n") {
    return Coupling::ScaledByN;
  }
  if (s == "1") {
    return Coupling::Equal;
  }
  throw InvalidInput("unknown coupling: " + s);
}

/// gamma_loc = lambda * depth * (largest per-item range of the training data);
/// a global budget is N * gamma_loc or gamma_loc depending on the coupling.
inline double compute_budget(const Dataset& training, double lambda, int depth, BudgetKind kind,
                             Coupling coupling = Coupling::ScaledByN) {
  if (!(lambda >= 0.0) || depth < 0) {
    throw InvalidInput("lambda and depth must be nonnegative");
  }
  const double local = lambda * static_cast<double>(depth) * training.max_item_range();
  if (kind == BudgetKind::Local || coupling == Coupling::Equal) {
    return local;
  }
  return static_cast<double>(training.size()) * local;
}

inline UncertaintyBudget make_budget(const Dataset& training, double lambda, int depth,
                                     BudgetKind kind, Coupling coupling = Coupling::ScaledByN) {
  return UncertaintyBudget(kind, compute_budget(training, lambda, depth, kind, coupling));
}

} // namespace surrogate

#endif
