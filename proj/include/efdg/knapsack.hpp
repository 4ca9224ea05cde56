#pragma once

#include <optional>
#include <span>
#include <vector>

#include "efdg/model.hpp"

namespace efdg {

/// True iff some sub-multiset of values sums exactly to target.
/// Classic O(count * target) table.
bool subset_sum(std::span<const Utility> values, Utility target);

struct SubsetWitness {
  int size = 0;
  std::vector<int> indices;  // ascending positions into the input sequence
};

/// Minimum-cardinality subset summing exactly to target, with one witness.
/// Absent when no subset hits the target. Zero-valued entries are never
/// part of a minimum witness.
std::optional<SubsetWitness> min_size_subset_sum(std::span<const Utility> values,
                                                 Utility target);

/// Maximum-cardinality subset summing exactly to target. Zero-valued
/// entries count as free cardinality and always join a maximum witness.
std::optional<SubsetWitness> max_size_subset_sum(std::span<const Utility> values,
                                                 Utility target);

/// One choice class of a multiple-choice knapsack: exactly one item must
/// be selected. Weights and profits are non-negative.
struct McKpClass {
  std::vector<std::pair<Utility, Utility>> items;  // (weight, profit)
};

/// Selects one item per class with total weight <= capacity and total
/// profit >= profit_target, or reports infeasibility. DP over capacity,
/// O(capacity * total item count).
std::optional<std::vector<int>> mckp_decide(std::span<const McKpClass> classes,
                                            Utility capacity, Utility profit_target);

}  // namespace efdg
