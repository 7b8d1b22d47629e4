#ifndef SURROGATE_TREE_HPP
#define SURROGATE_TREE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "surrogate/dataset.hpp"
#include "surrogate/errors.hpp"

namespace surrogate {

/// Binary decision vector x of a combinatorial problem. Feasibility is judged
/// by a FeasibleSpace, never by this type.
using Solution = std::vector<std::uint8_t>;

/// Univariate split: observations with value <= threshold on `item` go left.
struct Split {
  std::size_t item = 0;
  double threshold = 0.0;

  friend bool operator==(const Split&, const Split&) = default;
};

// Complete binary layout: root 0, children 2q+1 and 2q+2. Leaves are numbered
// 0..2^D-1 from left to right and sit at node ids (2^D - 1) + k.
inline constexpr std::size_t left_child(std::size_t q) { return 2 * q + 1; }
inline constexpr std::size_t right_child(std::size_t q) { return 2 * q + 2; }
inline constexpr std::size_t parent_of(std::size_t v) { return (v - 1) / 2; }
inline constexpr std::size_t inner_count(int depth) { return (std::size_t{1} << depth) - 1; }
inline constexpr std::size_t leaf_count(int depth) { return std::size_t{1} << depth; }

/// The split part of a tree: depth and one split per inner node in level order.
struct TreeStructure {
  int depth = 0;
  std::vector<Split> nodes;

  std::size_t num_inner() const { return nodes.size(); }
  std::size_t num_leaves() const { return leaf_count(depth); }

  void validate() const {
    if (depth < 0 || depth > 20) {
      throw InvalidInput("tree depth out of range: " + std::to_string(depth));
    }
    if (nodes.size() != inner_count(depth)) {
      throw InvalidInput("depth " + std::to_string(depth) + " needs " +
                         std::to_string(inner_count(depth)) + " inner nodes, got " +
                         std::to_string(nodes.size()));
    }
  }

  friend bool operator==(const TreeStructure&, const TreeStructure&) = default;
};

inline std::size_t traverse(const TreeStructure& structure, std::span<const double> observation) {
  std::size_t q = 0;
  for (int level = 0; level < structure.depth; ++level) {
    const Split& s = structure.nodes[q];
    q = observation[s.item] <= s.threshold ? left_child(q) : right_child(q);
  }
  return q - structure.num_inner();
}

/// A complete univariate tree whose leaves hold solutions.
class DecisionTree {
public:
  DecisionTree(TreeStructure structure, std::vector<Solution> leaves)
      : structure_(std::move(structure)), leaves_(std::move(leaves)) {
    structure_.validate();
    if (leaves_.size() != structure_.num_leaves()) {
      throw InvalidInput("depth " + std::to_string(structure_.depth) + " needs " +
                         std::to_string(structure_.num_leaves()) + " leaves, got " +
                         std::to_string(leaves_.size()));
    }
    for (const auto& leaf : leaves_) {
      if (leaf.size() != leaves_.front().size()) {
        throw InvalidInput("leaf solutions differ in length");
      }
      for (auto v : leaf) {
        if (v > 1) {
          throw InvalidInput("leaf solution is not binary");
        }
      }
    }
  }

  static DecisionTree single_leaf(Solution x) { return DecisionTree(TreeStructure{}, {std::move(x)}); }

  int depth() const { return structure_.depth; }
  const TreeStructure& structure() const { return structure_; }
  const std::vector<Split>& nodes() const { return structure_.nodes; }
  const Split& split(std::size_t q) const { return structure_.nodes[q]; }
  const std::vector<Solution>& leaves() const { return leaves_; }
  const Solution& leaf(std::size_t k) const { return leaves_[k]; }
  std::size_t num_inner() const { return structure_.num_inner(); }
  std::size_t num_leaves() const { return leaves_.size(); }
  std::size_t solution_size() const { return leaves_.front().size(); }

  DecisionTree with_structure(TreeStructure structure) const {
    return DecisionTree(std::move(structure), leaves_);
  }

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

private:
  TreeStructure structure_;
  std::vector<Solution> leaves_;
};

inline std::size_t traverse(const DecisionTree& tree, std::span<const double> observation) {
  return traverse(tree.structure(), observation);
}

/// c^T x.
inline double linear_cost(std::span<const double> c, const Solution& x) {
  if (c.size() != x.size()) {
    throw DimensionMismatch("cost vector has " + std::to_string(c.size()) +
                            " entries, solution has " + std::to_string(x.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (x[i]) {
      total += c[i];
    }
  }
  return total;
}

/// Value table v[j][k] = c_j^T x_k for every sample and leaf.
inline std::vector<std::vector<double>> leaf_values(const DecisionTree& tree, const Dataset& dataset) {
  if (tree.solution_size() != dataset.n_items()) {
    throw DimensionMismatch("tree solutions have " + std::to_string(tree.solution_size()) +
                            " entries, dataset has " + std::to_string(dataset.n_items()) +
                            " items");
  }
  std::vector<std::vector<double>> values(dataset.size(), std::vector<double>(tree.num_leaves()));
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    for (std::size_t k = 0; k < tree.num_leaves(); ++k) {
      values[j][k] = linear_cost(dataset.sample(j), tree.leaf(k));
    }
  }
  return values;
}

/// Sum over samples of c_j^T T(c_j), i.e. undisturbed traversal.
inline double nominal_objective(const DecisionTree& tree, const Dataset& dataset) {
  if (tree.solution_size() != dataset.n_items()) {
    throw DimensionMismatch("tree and dataset dimensions differ");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    total += linear_cost(dataset.sample(j), tree.leaf(traverse(tree, dataset.sample(j))));
  }
  return total;
}

inline nlohmann::json tree_to_json(const DecisionTree& tree) {
  nlohmann::json j;
  j["depth"] = tree.depth();
  j["nodes"] = nlohmann::json::array();
  for (const auto& s : tree.nodes()) {
    j["nodes"].push_back({{"item", s.item}, {"threshold", s.threshold}});
  }
  j["leaves"] = nlohmann::json::array();
  for (const auto& leaf : tree.leaves()) {
    nlohmann::json row = nlohmann::json::array();
    for (auto v : leaf) {
      row.push_back(static_cast<int>(v));
    }
    j["leaves"].push_back(std::move(row));
  }
  return j;
}

inline DecisionTree tree_from_json(const nlohmann::json& j) {
  try {
    TreeStructure structure;
    structure.depth = j.at("depth").get<int>();
    for (const auto& node : j.at("nodes")) {
      structure.nodes.push_back({node.at("item").get<std::size_t>(), node.at("threshold").get<double>()});
    }
    std::vector<Solution> leaves;
    for (const auto& row : j.at("leaves")) {
      Solution x;
      for (const auto& v : row) {
        const int bit = v.get<int>();
        if (bit != 0 && bit != 1) {
          throw InvalidInput("leaf entries must be 0 or 1");
        }
        x.push_back(static_cast<std::uint8_t>(bit));
      }
      leaves.push_back(std::move(x));
    }
    return DecisionTree(std::move(structure), std::move(leaves));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed tree JSON: ") + e.what());
  }
}

} // namespace surrogate

#endif
