#ifndef SURROGATE_SOLUTION_SPACE_HPP
#define SURROGATE_SOLUTION_SPACE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "surrogate/errors.hpp"
#include "surrogate/tree.hpp"

namespace surrogate {

inline constexpr std::size_t kDefaultEnumerationCap = 10000;

/**
 * Oracle for the feasible set X of the underlying problem.
 *
 * min_linear must return a feasible minimizer of c^T x for every finite c,
 * negative entries included, breaking ties towards the lexicographically
 * smallest vector. enumerate lists X in ascending lexicographic order and
 * refuses with CapExceeded when |X| exceeds the cap.
 */
class FeasibleSpace {
public:
  virtual ~FeasibleSpace() = default;

  virtual std::size_t dimension() const = 0;
  virtual Solution min_linear(std::span<const double> c) const = 0;
  virtual bool is_feasible(const Solution& x) const = 0;
  /// |X|, saturating at the largest uint64.
  virtual std::uint64_t count() const = 0;
  virtual std::vector<Solution> enumerate(std::size_t cap = kDefaultEnumerationCap) const = 0;
  virtual nlohmann::json to_json() const = 0;

protected:
  void check_dimension(std::span<const double> c) const {
    if (c.size() != dimension()) {
      throw DimensionMismatch("cost vector has " + std::to_string(c.size()) +
                              " entries, space has dimension " + std::to_string(dimension()));
    }
  }

  void check_cap(std::size_t cap) const {
    const auto n = count();
    if (n > cap) {
      throw CapExceeded("feasible set has " + std::to_string(n) +
                        " solutions, enumeration cap is " + std::to_string(cap));
    }
  }
};

namespace detail {

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const auto max = std::numeric_limits<std::uint64_t>::max();
  return a > max - b ? max : a + b;
}

inline bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace detail

struct Edge {
  std::size_t tail = 0;
  std::size_t head = 0;
};

/// s-t paths in a directed acyclic graph; x_e = 1 iff edge e is on the path.
class DagPathSpace : public FeasibleSpace {
public:
  DagPathSpace(std::size_t num_nodes, std::vector<Edge> edges, std::size_t source, std::size_t sink)
      : num_nodes_(num_nodes), edges_(std::move(edges)), source_(source), sink_(sink) {
    if (source_ >= num_nodes_ || sink_ >= num_nodes_ || source_ == sink_) {
      throw InvalidInput("invalid source/sink");
    }
    out_.resize(num_nodes_);
    std::vector<std::size_t> indegree(num_nodes_, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edges_[e].tail >= num_nodes_ || edges_[e].head >= num_nodes_) {
        throw InvalidInput("edge endpoint out of range");
      }
      out_[edges_[e].tail].push_back(e);
      ++indegree[edges_[e].head];
    }
    // Kahn's algorithm; a leftover node means a cycle.
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < num_nodes_; ++v) {
      if (indegree[v] == 0) {
        ready.push_back(v);
      }
    }
    while (!ready.empty()) {
      const auto v = ready.back();
      ready.pop_back();
      order_.push_back(v);
      for (auto e : out_[v]) {
        if (--indegree[edges_[e].head] == 0) {
          ready.push_back(edges_[e].head);
        }
      }
    }
    if (order_.size() != num_nodes_) {
      throw InvalidInput("graph contains a cycle");
    }
    if (count() == 0) {
      throw InvalidInput("sink is not reachable from source");
    }
  }

  std::size_t dimension() const override { return edges_.size(); }
  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t source() const { return source_; }
  std::size_t sink() const { return sink_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Dynamic programming towards the sink in reverse topological order, which
  // is exact for negative edge costs. Among equal-cost continuations the one
  // with the lexicographically smaller edge vector wins; this composes because
  // the first edge of a path never reappears in its suffix.
  Solution min_linear(std::span<const double> c) const override {
    check_dimension(c);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(num_nodes_, inf);
    std::vector<Solution> best(num_nodes_);
    dist[sink_] = 0.0;
    best[sink_] = Solution(edges_.size(), 0);
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const auto v = *it;
      if (v == sink_) {
        continue;
      }
      for (auto e : out_[v]) {
        const auto w = edges_[e].head;
        if (dist[w] == inf) {
          continue;
        }
        const double candidate = c[e] + dist[w];
        bool take = false;
        Solution bits;
        if (dist[v] == inf || (candidate < dist[v] && !detail::nearly_equal(candidate, dist[v]))) {
          take = true;
          bits = best[w];
          bits[e] = 1;
        } else if (detail::nearly_equal(candidate, dist[v])) {
          bits = best[w];
          bits[e] = 1;
          take = bits < best[v];
        }
        if (take) {
          dist[v] = candidate;
          best[v] = std::move(bits);
        }
      }
    }
    return best[source_];
  }

  bool is_feasible(const Solution& x) const override {
    if (x.size() != edges_.size()) {
      return false;
    }
    std::size_t selected = 0;
    for (auto v : x) {
      if (v > 1) {
        return false;
      }
      selected += v;
    }
    std::size_t v = source_;
    std::size_t walked = 0;
    while (v != sink_) {
      std::size_t next_edge = edges_.size();
      for (auto e : out_[v]) {
        if (x[e]) {
          if (next_edge != edges_.size()) {
            return false;
          }
          next_edge = e;
        }
      }
      if (next_edge == edges_.size()) {
        return false;
      }
      ++walked;
      v = edges_[next_edge].head;
    }
    return walked == selected;
  }

  std::uint64_t count() const override {
    std::vector<std::uint64_t> paths(num_nodes_, 0);
    paths[sink_] = 1;
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      if (*it == sink_) {
        continue;
      }
      for (auto e : out_[*it]) {
        paths[*it] = detail::saturating_add(paths[*it], paths[edges_[e].head]);
      }
    }
    return paths[source_];
  }

  std::vector<Solution> enumerate(std::size_t cap = kDefaultEnumerationCap) const override {
    check_cap(cap);
    std::vector<Solution> all;
    Solution current(edges_.size(), 0);
    enumerate_from(source_, current, all);
    std::sort(all.begin(), all.end());
    return all;
  }

  nlohmann::json to_json() const override {
    nlohmann::json j;
    j["type"] = "dag";
    j["num_nodes"] = num_nodes_;
    j["source"] = source_;
    j["sink"] = sink_;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : edges_) {
      j["edges"].push_back({e.tail, e.head});
    }
    return j;
  }

private:
  void enumerate_from(std::size_t v, Solution& current, std::vector<Solution>& all) const {
    if (v == sink_) {
      all.push_back(current);
      return;
    }
    for (auto e : out_[v]) {
      current[e] = 1;
      enumerate_from(edges_[e].head, current, all);
      current[e] = 0;
    }
  }

  std::size_t num_nodes_;
  std::vector<Edge> edges_;
  std::size_t source_;
  std::size_t sink_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::size_t> order_;
};

/**
 * g x g grid with edges directed west to east and south to north.
 *
 * Node (x, y) has id y*g + x; (0,0) is the source, (g-1,g-1) the sink. Edge
 * indices: all horizontal edges row by row (y ascending, x ascending), then
 * all vertical edges row by row. n = 2 g (g-1).
 */
class GridGraph {
public:
  explicit GridGraph(std::size_t side) : side_(side) {
    if (side_ < 2) {
      throw InvalidInput("grid side must be at least 2");
    }
    for (std::size_t y = 0; y < side_; ++y) {
      for (std::size_t x = 0; x + 1 < side_; ++x) {
        edges_.push_back({node(x, y), node(x + 1, y)});
      }
    }
    for (std::size_t y = 0; y + 1 < side_; ++y) {
      for (std::size_t x = 0; x < side_; ++x) {
        edges_.push_back({node(x, y), node(x, y + 1)});
      }
    }
  }

  std::size_t side() const { return side_; }
  std::size_t node(std::size_t x, std::size_t y) const { return y * side_ + x; }
  std::size_t num_nodes() const { return side_ * side_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t source() const { return 0; }
  std::size_t sink() const { return num_nodes() - 1; }

private:
  std::size_t side_;
  std::vector<Edge> edges_;
};

class GridPathSpace : public DagPathSpace {
public:
  explicit GridPathSpace(std::size_t side) : GridPathSpace(GridGraph(side)) {}

  std::size_t side() const { return side_; }

  nlohmann::json to_json() const override { return {{"type", "grid"}, {"side", side_}}; }

private:
  explicit GridPathSpace(const GridGraph& grid)
      : DagPathSpace(grid.num_nodes(), grid.edges(), grid.source(), grid.sink()), side_(grid.side()) {}

  std::size_t side_;
};

/// Binary vectors of length n with exactly p ones.
class SelectionSpace : public FeasibleSpace {
public:
  SelectionSpace(std::size_t n, std::size_t p) : n_(n), p_(p) {
    if (n_ == 0 || p_ > n_) {
      throw InvalidInput("selection space needs 0 <= p <= n and n > 0");
    }
  }

  std::size_t dimension() const override { return n_; }
  std::size_t cardinality() const { return p_; }

  // The p cheapest items; among equal costs the higher indices are taken,
  // which yields the lexicographically smallest optimal vector.
  Solution min_linear(std::span<const double> c) const override {
    check_dimension(c);
    std::vector<std::size_t> idx(n_);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (c[a] != c[b]) {
        return c[a] < c[b];
      }
      return a > b;
    });
    Solution x(n_, 0);
    for (std::size_t t = 0; t < p_; ++t) {
      x[idx[t]] = 1;
    }
    return x;
  }

  bool is_feasible(const Solution& x) const override {
    if (x.size() != n_) {
      return false;
    }
    std::size_t ones = 0;
    for (auto v : x) {
      if (v > 1) {
        return false;
      }
      ones += v;
    }
    return ones == p_;
  }

  std::uint64_t count() const override {
    // C(n, p) with saturation.
    const auto k = std::min(p_, n_ - p_);
    long double value = 1.0L;
    for (std::size_t t = 1; t <= k; ++t) {
      value = value * static_cast<long double>(n_ - k + t) / static_cast<long double>(t);
    }
    const auto max = static_cast<long double>(std::numeric_limits<std::uint64_t>::max());
    return value >= max ? std::numeric_limits<std::uint64_t>::max()
                        : static_cast<std::uint64_t>(std::llround(value));
  }

  std::vector<Solution> enumerate(std::size_t cap = kDefaultEnumerationCap) const override {
    check_cap(cap);
    std::vector<Solution> all;
    // prev_permutation on a sorted-descending vector walks the combinations in
    // descending lexicographic order; reverse at the end.
    Solution x(n_, 0);
    std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p_), 1);
    do {
      all.push_back(x);
    } while (std::prev_permutation(x.begin(), x.end()));
    std::reverse(all.begin(), all.end());
    return all;
  }

  nlohmann::json to_json() const override { return {{"type", "selection"}, {"n", n_}, {"p", p_}}; }

private:
  std::size_t n_;
  std::size_t p_;
};

inline std::shared_ptr<const FeasibleSpace> space_from_json(const nlohmann::json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    if (type == "grid") {
      return std::make_shared<GridPathSpace>(j.at("side").get<std::size_t>());
    }
    if (type == "selection") {
      return std::make_shared<SelectionSpace>(j.at("n").get<std::size_t>(), j.at("p").get<std::size_t>());
    }
    if (type == "dag") {
      std::vector<Edge> edges;
      for (const auto& e : j.at("edges")) {
        edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
      }
      return std::make_shared<DagPathSpace>(j.at("num_nodes").get<std::size_t>(), std::move(edges),
                                            j.at("source").get<std::size_t>(),
                                            j.at("sink").get<std::size_t>());
    }
    throw InvalidInput("unknown space type: " + type);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed space JSON: ") + e.what());
  }
}

} // namespace surrogate

#endif
