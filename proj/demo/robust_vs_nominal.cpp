// Trains nominal, H1 and Htree surrogates on a random grid instance and
// compares them in and out of sample.

#include <cstdio>
#include <cstdlib>

#include "surrogate.hpp"

using namespace surrogate;

int main(int argc, char** argv) {
  InstanceSpec spec;
  spec.grid_side = 4;
  spec.n_train = 5;
  spec.n_test = 1000;
  spec.seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
  const double time_limit = argc > 2 ? std::atof(argv[2]) : 5.0;
  const auto instance = generate_instance(spec);

  const auto budget = make_budget(instance.train, 0.05, 2, BudgetKind::Global);
  std::printf("grid %zux%zu, %zu edges, N=%zu, global gamma %.3f\n", spec.grid_side, spec.grid_side,
              instance.n_items(), instance.train.size(), budget.gamma);

  MethodSettings settings;
  settings.time_limit = time_limit;
  settings.seed = spec.seed;
  std::printf("%-8s %12s %12s %12s %12s\n", "method", "nom train", "rob train", "nom test", "rob test");
  for (auto method : {Method::Nominal, Method::H1, Method::Htree}) {
    const auto report = run_method(method, instance.train, *instance.space, budget, settings);
    const auto r = evaluate_tree(report.tree, instance, budget);
    std::printf("%-8s %12.2f %12.2f %12.2f %12.2f\n", to_string(method).c_str(), r.nominal_train, r.robust_train,
                *r.nominal_test, *r.robust_test);
  }
  return 0;
}
