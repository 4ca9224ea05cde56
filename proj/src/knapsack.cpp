#include "efdg/knapsack.hpp"

#include <algorithm>
#include <limits>

namespace efdg {

namespace {

constexpr int kUnreachable = -1;

}  // namespace

bool subset_sum(std::span<const Utility> values, Utility target) {
  if (target < 0) return false;
  std::vector<char> reachable(static_cast<size_t>(target) + 1, 0);
  reachable[0] = 1;
  for (const Utility v : values) {
    if (v == 0 || v > target) continue;
    for (Utility s = target; s >= v; --s)
      if (reachable[static_cast<size_t>(s - v)]) reachable[static_cast<size_t>(s)] = 1;
  }
  return reachable[static_cast<size_t>(target)] != 0;
}

std::optional<SubsetWitness> min_size_subset_sum(std::span<const Utility> values,
                                                 Utility target) {
  if (target < 0) return std::nullopt;
  const int count = static_cast<int>(values.size());
  const size_t width = static_cast<size_t>(target) + 1;
  // dp[i][s]: minimum cardinality over the first i items, kUnreachable if
  // the sum s cannot be hit. Full table kept for witness reconstruction.
  std::vector<int> dp(static_cast<size_t>(count + 1) * width, kUnreachable);
  dp[0] = 0;
  for (int i = 1; i <= count; ++i) {
    const Utility v = values[i - 1];
    const int* prev = &dp[static_cast<size_t>(i - 1) * width];
    int* cur = &dp[static_cast<size_t>(i) * width];
    for (Utility s = 0; s <= target; ++s) {
      int best = prev[s];
      if (v > 0 && v <= s && prev[s - v] != kUnreachable) {
        const int with = prev[s - v] + 1;
        if (best == kUnreachable || with < best) best = with;
      }
      cur[s] = best;
    }
  }
  if (dp[static_cast<size_t>(count) * width + target] == kUnreachable) return std::nullopt;
  SubsetWitness witness;
  witness.size = dp[static_cast<size_t>(count) * width + target];
  Utility s = target;
  for (int i = count; i >= 1; --i) {
    const int* prev = &dp[static_cast<size_t>(i - 1) * width];
    const int* cur = &dp[static_cast<size_t>(i) * width];
    if (prev[s] == cur[s]) continue;  // ties resolve toward earlier items
    witness.indices.push_back(i - 1);
    s -= values[i - 1];
  }
  std::reverse(witness.indices.begin(), witness.indices.end());
  return witness;
}

std::optional<SubsetWitness> max_size_subset_sum(std::span<const Utility> values,
                                                 Utility target) {
  if (target < 0) return std::nullopt;
  const int count = static_cast<int>(values.size());
  const size_t width = static_cast<size_t>(target) + 1;
  std::vector<int> dp(static_cast<size_t>(count + 1) * width, kUnreachable);
  dp[0] = 0;
  for (int i = 1; i <= count; ++i) {
    const Utility v = values[i - 1];
    const int* prev = &dp[static_cast<size_t>(i - 1) * width];
    int* cur = &dp[static_cast<size_t>(i) * width];
    for (Utility s = 0; s <= target; ++s) {
      int best = prev[s];
      if (v <= s && prev[s - v] != kUnreachable) {
        const int with = prev[s - v] + 1;
        if (with > best) best = with;
      }
      cur[s] = best;
    }
  }
  if (dp[static_cast<size_t>(count) * width + target] == kUnreachable) return std::nullopt;
  SubsetWitness witness;
  witness.size = dp[static_cast<size_t>(count) * width + target];
  Utility s = target;
  for (int i = count; i >= 1; --i) {
    const int* prev = &dp[static_cast<size_t>(i - 1) * width];
    const int* cur = &dp[static_cast<size_t>(i) * width];
    const Utility v = values[i - 1];
    if (v <= s && prev[s - v] != kUnreachable && prev[s - v] + 1 == cur[s]) {
      witness.indices.push_back(i - 1);
      s -= v;
    }
  }
  std::reverse(witness.indices.begin(), witness.indices.end());
  return witness;
}

std::optional<std::vector<int>> mckp_decide(std::span<const McKpClass> classes,
                                            Utility capacity, Utility profit_target) {
  constexpr Utility kMinusInf = std::numeric_limits<Utility>::min() / 4;
  for (const auto& cls : classes) {
    if (cls.items.empty()) throw std::invalid_argument("mckp class must be non-empty");
    for (const auto& [w, p] : cls.items)
      if (w < 0 || p < 0) throw std::invalid_argument("mckp weights and profits must be non-negative");
  }
  if (capacity < 0) return std::nullopt;
  // No selection weighs more than the sum of per-class maxima, so larger
  // capacities are equivalent.
  Utility weight_ceiling = 0;
  for (const auto& cls : classes) {
    Utility cls_max = 0;
    for (const auto& [w, p] : cls.items) cls_max = std::max(cls_max, w);
    weight_ceiling += cls_max;
  }
  capacity = std::min(capacity, weight_ceiling);

  const int num_classes = static_cast<int>(classes.size());
  const size_t width = static_cast<size_t>(capacity) + 1;
  std::vector<Utility> prev(width, 0);  // zero classes: profit 0 at any budget
  std::vector<Utility> cur(width, kMinusInf);
  std::vector<int> choice(static_cast<size_t>(num_classes) * width, -1);
  for (int i = 0; i < num_classes; ++i) {
    std::fill(cur.begin(), cur.end(), kMinusInf);
    int* pick = &choice[static_cast<size_t>(i) * width];
    for (Utility c = 0; c <= capacity; ++c) {
      Utility best = kMinusInf;
      int best_j = -1;
      for (int j = 0; j < static_cast<int>(classes[i].items.size()); ++j) {
        const auto& [w, p] = classes[i].items[j];
        if (w > c || prev[c - w] == kMinusInf) continue;
        const Utility value = prev[c - w] + p;
        if (value > best) {
          best = value;
          best_j = j;
        }
      }
      cur[c] = best;
      pick[c] = best_j;
    }
    std::swap(prev, cur);
  }
  if (prev[static_cast<size_t>(capacity)] == kMinusInf ||
      prev[static_cast<size_t>(capacity)] < profit_target)
    return std::nullopt;

  // Walk the stored per-class argmax table backwards from the final budget.
  std::vector<int> selection(num_classes, -1);
  Utility c = capacity;
  for (int i = num_classes - 1; i >= 0; --i) {
    const int j = choice[static_cast<size_t>(i) * width + c];
    selection[i] = j;
    c -= classes[i].items[j].first;
  }
  return selection;
}

}  // namespace efdg
