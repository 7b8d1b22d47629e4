#ifndef SURROGATE_DATASET_HPP
#define SURROGATE_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "surrogate/errors.hpp"

namespace surrogate {

using CostVector = std::vector<double>;

/**
 * Historical cost observations c_1, ..., c_N over n items.
 *
 * Every sample has exactly n_items finite entries and there is at least one
 * sample. Immutable after construction.
 */
class Dataset {
public:
  Dataset(std::size_t n_items, std::vector<CostVector> samples,
          std::vector<std::string> labels = {})
      : n_items_(n_items), samples_(std::move(samples)), labels_(std::move(labels)) {
    if (n_items_ == 0) {
      throw InvalidInput("dataset needs at least one item");
    }
    if (samples_.empty()) {
      throw InvalidInput("dataset needs at least one sample");
    }
    for (std::size_t j = 0; j < samples_.size(); ++j) {
      if (samples_[j].size() != n_items_) {
        throw InvalidInput("sample " + std::to_string(j) + " has " +
                           std::to_string(samples_[j].size()) + " entries, expected " +
                           std::to_string(n_items_));
      }
      for (double v : samples_[j]) {
        if (!std::isfinite(v)) {
          throw InvalidInput("sample " + std::to_string(j) + " has a non-finite entry");
        }
      }
    }
    if (!labels_.empty() && labels_.size() != samples_.size()) {
      throw InvalidInput("label count does not match sample count");
    }
  }

  std::size_t n_items() const { return n_items_; }
  std::size_t size() const { return samples_.size(); }
  std::span<const double> sample(std::size_t j) const { return samples_[j]; }
  const std::vector<CostVector>& samples() const { return samples_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Sum of all samples, the aggregated cost vector.
  CostVector aggregate() const {
    CostVector total(n_items_, 0.0);
    for (const auto& c : samples_) {
      for (std::size_t i = 0; i < n_items_; ++i) {
        total[i] += c[i];
      }
    }
    return total;
  }

  /// Largest per-item spread max_j c_{j,i} - min_j c_{j,i} over all items.
  double max_item_range() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_items_; ++i) {
      double lo = samples_[0][i];
      double hi = lo;
      for (const auto& c : samples_) {
        lo = std::min(lo, c[i]);
        hi = std::max(hi, c[i]);
      }
      best = std::max(best, hi - lo);
    }
    return best;
  }

  /// Distinct observed values of one item, ascending.
  std::vector<double> distinct_values(std::size_t item) const {
    std::vector<double> values;
    values.reserve(samples_.size());
    for (const auto& c : samples_) {
      values.push_back(c[item]);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
  }

private:
  std::size_t n_items_;
  std::vector<CostVector> samples_;
  std::vector<std::string> labels_;
};

/// Candidate split thresholds per item, each list sorted and duplicate-free.
struct ThresholdCatalog {
  std::vector<std::vector<double>> per_item;

  std::size_t n_items() const { return per_item.size(); }
  const std::vector<double>& operator[](std::size_t item) const { return per_item[item]; }

  std::size_t total() const {
    std::size_t count = 0;
    for (const auto& t : per_item) {
      count += t.size();
    }
    return count;
  }

  bool empty() const { return total() == 0; }
};

/// Midpoints between consecutive distinct observed values of every item.
inline ThresholdCatalog build_threshold_catalog(const Dataset& dataset) {
  ThresholdCatalog catalog;
  catalog.per_item.resize(dataset.n_items());
  for (std::size_t i = 0; i < dataset.n_items(); ++i) {
    const auto values = dataset.distinct_values(i);
    auto& thresholds = catalog.per_item[i];
    for (std::size_t a = 0; a + 1 < values.size(); ++a) {
      thresholds.push_back((values[a] + values[a + 1]) / 2.0);
    }
  }
  return catalog;
}

inline nlohmann::json dataset_to_json(const Dataset& dataset) {
  nlohmann::json j;
  j["n_items"] = dataset.n_items();
  j["samples"] = dataset.samples();
  if (!dataset.labels().empty()) {
    j["labels"] = dataset.labels();
  }
  return j;
}

inline Dataset dataset_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> labels;
    if (j.contains("labels")) {
      labels = j.at("labels").get<std::vector<std::string>>();
    }
    return Dataset(j.at("n_items").get<std::size_t>(),
                   j.at("samples").get<std::vector<CostVector>>(), std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed dataset JSON: ") + e.what());
  }
}

} // namespace surrogate

#endif
