#ifndef SURROGATE_INSTANCE_HPP
#define SURROGATE_INSTANCE_HPP

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "surrogate/dataset.hpp"
#include "surrogate/errors.hpp"
#include "surrogate/random.hpp"
#include "surrogate/solution_space.hpp"

namespace surrogate {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct InstanceSpec {
  std::size_t grid_side = 4;
  std::size_t n_train = 5;
  std::size_t n_test = 1000;
  std::uint64_t seed = 0;
  std::size_t basis_scenarios = 3;
  /// Lower interval end ~ U[low_min, low_max]; width ~ U[width_min, width_max].
  double low_min = 1.0;
  double low_max = 10.0;
  double width_min = 0.0;
  double width_max = 10.0;

  void validate() const {
    if (grid_side < 2) {
      throw InvalidInput("grid side must be at least 2");
    }
    if (n_train < 1) {
      throw InvalidInput("at least one training sample is required");
    }
    if (basis_scenarios < 1) {
      throw InvalidInput("at least one basis scenario is required");
    }
    if (!(low_min <= low_max) || !(width_min <= width_max) || low_min < 0.0 || width_min < 0.0) {
      throw InvalidInput("invalid interval parameters");
    }
  }
};

/// Training and test costs for one feasible space.
struct Instance {
  InstanceSpec spec;
  std::shared_ptr<const FeasibleSpace> space;
  /// basis[b][e]: cost interval of edge e in basis scenario b.
  std::vector<std::vector<Interval>> basis;
  Dataset train;
  std::optional<Dataset> test;

  std::size_t n_items() const { return train.n_items(); }
};

namespace detail {

inline std::vector<CostVector> draw_samples(const std::vector<std::vector<Interval>>& basis, std::size_t count,
                                            Rng& rng) {
  std::vector<CostVector> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto& scenario = basis[uniform_index(rng, basis.size())];
    CostVector c(scenario.size());
    for (std::size_t e = 0; e < scenario.size(); ++e) {
      c[e] = uniform_real(rng, scenario[e].lo, scenario[e].hi);
    }
    out.push_back(std::move(c));
  }
  return out;
}

} // namespace detail

/**
 * Random shortest-path instance on a g x g grid.
 *
 * Each basis scenario gives every edge an interval [l, l + w]. A sample picks
 * a basis scenario uniformly, then draws every edge uniformly from its
 * interval. Scenarios, training and test samples use separate substreams of
 * the seed, so changing the test size leaves the training data untouched.
 */
inline Instance generate_instance(const InstanceSpec& spec) {
  spec.validate();
  auto space = std::make_shared<GridPathSpace>(spec.grid_side);
  const std::size_t n = space->dimension();
  Rng scenario_rng = make_rng(spec.seed, 1);
  std::vector<std::vector<Interval>> basis(spec.basis_scenarios, std::vector<Interval>(n));
  for (auto& scenario : basis) {
    for (auto& interval : scenario) {
      interval.lo = uniform_real(scenario_rng, spec.low_min, spec.low_max);
      interval.hi = interval.lo + uniform_real(scenario_rng, spec.width_min, spec.width_max);
    }
  }
  Rng train_rng = make_rng(spec.seed, 2);
  Dataset train(n, detail::draw_samples(basis, spec.n_train, train_rng));
  std::optional<Dataset> test;
  if (spec.n_test > 0) {
    Rng test_rng = make_rng(spec.seed, 3);
    test.emplace(n, detail::draw_samples(basis, spec.n_test, test_rng));
  }
  return Instance{spec, std::move(space), std::move(basis), std::move(train), std::move(test)};
}

inline nlohmann::json spec_to_json(const InstanceSpec& spec) {
  return {{"grid_side", spec.grid_side}, {"n_train", spec.n_train}, {"n_test", spec.n_test},
          {"seed", spec.seed}, {"basis_scenarios", spec.basis_scenarios}, {"low_min", spec.low_min},
          {"low_max", spec.low_max}, {"width_min", spec.width_min}, {"width_max", spec.width_max}};
}

inline nlohmann::json instance_to_json(const Instance& instance) {
  nlohmann::json j;
  j["grid_side"] = instance.spec.grid_side;
  j["seed"] = instance.spec.seed;
  j["basis_scenarios"] = nlohmann::json::array();
  for (const auto& scenario : instance.basis) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& interval : scenario) {
      rows.push_back({interval.lo, interval.hi});
    }
    j["basis_scenarios"].push_back(std::move(rows));
  }
  j["train"] = instance.train.samples();
  j["test"] = instance.test ? nlohmann::json(instance.test->samples()) : nlohmann::json::array();
  j["spec"] = spec_to_json(instance.spec);
  // Grids are implied by grid_side; other spaces are stored explicitly.
  if (!dynamic_cast<const GridPathSpace*>(instance.space.get())) {
    j["space"] = instance.space->to_json();
  }
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  try {
    Instance instance{InstanceSpec{}, nullptr, {}, Dataset(1, {{0.0}}), std::nullopt};
    if (j.contains("space")) {
      instance.space = space_from_json(j.at("space"));
      instance.spec.grid_side = j.value("grid_side", std::size_t{0});
    } else {
      instance.spec.grid_side = j.at("grid_side").get<std::size_t>();
      instance.space = std::make_shared<GridPathSpace>(instance.spec.grid_side);
    }
    instance.spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("spec")) {
      const auto& s = j.at("spec");
      instance.spec.basis_scenarios = s.value("basis_scenarios", instance.spec.basis_scenarios);
      instance.spec.low_min = s.value("low_min", instance.spec.low_min);
      instance.spec.low_max = s.value("low_max", instance.spec.low_max);
      instance.spec.width_min = s.value("width_min", instance.spec.width_min);
      instance.spec.width_max = s.value("width_max", instance.spec.width_max);
    }
    if (j.contains("basis_scenarios")) {
      for (const auto& scenario : j.at("basis_scenarios")) {
        std::vector<Interval> rows;
        for (const auto& interval : scenario) {
          rows.push_back({interval.at(0).get<double>(), interval.at(1).get<double>()});
        }
        instance.basis.push_back(std::move(rows));
      }
    }
    const std::size_t n = instance.space->dimension();
    instance.train = Dataset(n, j.at("train").get<std::vector<CostVector>>());
    instance.spec.n_train = instance.train.size();
    const auto test = j.value("test", std::vector<CostVector>{});
    instance.spec.n_test = test.size();
    if (!test.empty()) {
      instance.test.emplace(n, test);
    }
    return instance;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed instance JSON: ") + e.what());
  }
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open instance file " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("cannot parse " + path + ": " + e.what());
  }
  return instance_from_json(j);
}

inline void save_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInput("cannot write " + path);
  }
  out << j.dump(2) << '\n';
}

} // namespace surrogate

#endif
