#ifndef SURROGATE_HPP
#define SURROGATE_HPP

#include "surrogate/adversary.hpp"
#include "surrogate/budget.hpp"
#include "surrogate/dataset.hpp"
#include "surrogate/errors.hpp"
#include "surrogate/experiments.hpp"
#include "surrogate/heuristics.hpp"
#include "surrogate/instance.hpp"
#include "surrogate/leaf_assignment.hpp"
#include "surrogate/master.hpp"
#include "surrogate/random.hpp"
#include "surrogate/scenario_generation.hpp"
#include "surrogate/solution_space.hpp"
#include "surrogate/timing.hpp"
#include "surrogate/tree.hpp"

#endif
