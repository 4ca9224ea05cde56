#include "efdg/identical.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "efdg/knapsack.hpp"

namespace efdg {

namespace {

constexpr long long kSolverWorkLimit = 2'000'000'000;

void require_identical(const Instance& inst, const char* who) {
  for (int a = 1; a < inst.n; ++a)
    if (inst.utilities[a] != inst.utilities[0])
      throw std::invalid_argument(std::string(who) + " requires identical valuations");
}

struct WorkMeter {
  long long used = 0;
  void charge(long long units, const char* who) {
    used += units;
    if (used > kSolverWorkLimit)
      throw CapabilityError(std::string(who) + ": work limit exceeded");
  }
};

// Bundle positions sorted by (value descending, index ascending).
std::vector<int> sorted_desc(const IdenticalView& view, const std::vector<int>& bundle) {
  std::vector<int> order = bundle;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (view.values[x] != view.values[y]) return view.values[x] > view.values[y];
    return x < y;
  });
  return order;
}

// Greedy per-agent deletion: drop the most valuable resources until the
// kept remainder r satisfies sum(r) - max(r) <= u0. Returns view indices.
std::vector<int> greedy_agent_deletions(const IdenticalView& view, int agent) {
  const std::vector<int> order = sorted_desc(view, view.bundles[agent]);
  Utility suffix = view.bundle_values[agent];
  size_t j = 0;
  while (j < order.size() && suffix - view.values[order[j]] > view.u0) {
    suffix -= view.values[order[j]];
    ++j;
  }
  return {order.begin(), order.begin() + j};
}

// Subset-sum support: only resources of value <= target can join a subset
// hitting the target, and at most floor(target/value) copies of each value
// can be useful. Retains the lowest-index representatives.
std::vector<int> subset_support(const IdenticalView& view, const std::vector<int>& bundle,
                                int excluded, Utility target) {
  std::map<Utility, int> used;
  std::vector<int> support;
  for (int r : bundle) {
    if (r == excluded) continue;
    const Utility v = view.values[r];
    if (v > target) continue;
    int& count = used[v];
    if (count >= target / v) continue;
    ++count;
    support.push_back(r);
  }
  return support;
}

std::vector<Utility> support_values(const IdenticalView& view, const std::vector<int>& support) {
  std::vector<Utility> values;
  values.reserve(support.size());
  for (int r : support) values.push_back(view.values[r]);
  return values;
}

std::vector<int> to_original(const IdenticalView& view, const std::vector<int>& view_indices) {
  std::vector<int> out;
  out.reserve(view_indices.size());
  for (int r : view_indices) out.push_back(view.to_original[r]);
  return out;
}

// One kept-or-deleted candidate per achievable utility value.
struct Candidate {
  int size = 0;
  std::vector<int> resources;  // view indices
};

struct StepTwoInput {
  std::vector<std::vector<Utility>> totals;          // per agent, candidate utilities
  std::vector<std::vector<const Candidate*>> cands;  // parallel to totals
};

}  // namespace

IdenticalView build_identical_view(const Instance& inst) {
  require_identical(inst, "build_identical_view");
  IdenticalView view;
  for (int r = 0; r < inst.m; ++r) {
    if (inst.utilities[0][r] > 0) {
      view.to_original.push_back(r);
      view.values.push_back(inst.utilities[0][r]);
    } else {
      view.zero_resources.push_back(r);
    }
  }
  view.m = static_cast<int>(view.values.size());
  view.k_minus = std::min(inst.k_minus, view.m);
  view.bundles.assign(inst.n, {});
  for (int i = 0; i < view.m; ++i)
    view.bundles[inst.owner[view.to_original[i]]].push_back(i);
  view.bundle_values.assign(inst.n, 0);
  for (int a = 0; a < inst.n; ++a)
    for (int r : view.bundles[a]) view.bundle_values[a] += view.values[r];
  view.u0 = *std::min_element(view.bundle_values.begin(), view.bundle_values.end());
  for (int a = 0; a < inst.n; ++a) {
    if (view.bundle_values[a] == view.u0) {
      view.a0.push_back(a);
      continue;
    }
    bool envied;
    if (inst.notion == Notion::EF) {
      envied = view.bundle_values[a] > view.u0;
    } else {
      Utility best = 0;
      for (int r : view.bundles[a]) best = std::max(best, view.values[r]);
      envied = !view.bundles[a].empty() && view.bundle_values[a] - best > view.u0;
    }
    if (envied) view.a_star.push_back(a);
  }
  return view;
}

Solution ef1_greedy_number(const Instance& inst) {
  require_identical(inst, "ef1_greedy_number");
  if (inst.notion != Notion::EF1)
    throw std::invalid_argument("ef1_greedy_number handles EF1 only");
  if (inst.ell_plus != 0)
    throw std::invalid_argument("ef1_greedy_number handles the number variant only");
  const IdenticalView view = build_identical_view(inst);
  std::vector<int> deleted;
  for (int a : view.a_star) {
    const auto mine = greedy_agent_deletions(view, a);
    deleted.insert(deleted.end(), mine.begin(), mine.end());
  }
  if (static_cast<int>(deleted.size()) > view.k_minus)
    return infeasible_solution("ef1_greedy_number");
  return make_feasible_solution(inst, to_original(view, deleted), "ef1_greedy_number");
}

Solution normalize_ef1_solution(const Instance& inst, const Solution& sol) {
  require_identical(inst, "normalize_ef1_solution");
  if (inst.notion != Notion::EF1)
    throw std::invalid_argument("normalize_ef1_solution handles EF1 only");
  if (!sol.feasible) throw std::invalid_argument("normalize_ef1_solution needs a feasible solution");
  if (!verify_solution(inst, sol).ok())
    throw std::invalid_argument("normalize_ef1_solution input does not verify");

  std::vector<char> gone(inst.m, 0);
  for (int r : sol.deleted) gone[r] = 1;
  std::vector<Utility> value(inst.n, 0);
  for (int a = 0; a < inst.n; ++a)
    for (int r : inst.bundles[a])
      if (!gone[r]) value[a] += inst.utilities[0][r];
  std::vector<int> missing(inst.n, 0);
  for (int r : sol.deleted) ++missing[inst.owner[r]];

  // Repeatedly hand one deleted resource back to a least-happy agent whose
  // bundle is still incomplete; stops once all minimum agents are whole.
  for (;;) {
    const Utility lowest = *std::min_element(value.begin(), value.end());
    int pick = -1;
    for (int a = 0; a < inst.n && pick == -1; ++a)
      if (value[a] == lowest && missing[a] > 0) pick = a;
    if (pick == -1) break;
    for (int r : inst.bundles[pick]) {
      if (gone[r]) {
        gone[r] = 0;
        --missing[pick];
        value[pick] += inst.utilities[0][r];
        break;
      }
    }
  }
  std::vector<int> deleted;
  for (int r = 0; r < inst.m; ++r)
    if (gone[r]) deleted.push_back(r);
  return make_feasible_solution(inst, std::move(deleted), "normalize_ef1");
}

namespace {

// Step 2 shared by both EF1 dynamic programs: choose one candidate per
// envied agent through a multiple-choice knapsack over (size, utility)
// pairs, with profits shifted into the non-negative range per class.
struct StepTwoResult {
  bool feasible = false;
  std::vector<int> selection;  // candidate position per agent class
};

StepTwoResult mckp_select(const std::vector<std::vector<std::pair<Utility, Utility>>>& items,
                          Utility capacity, Utility profit_target) {
  std::vector<McKpClass> classes;
  classes.reserve(items.size());
  for (const auto& cls : items) classes.push_back(McKpClass{cls});
  auto picked = mckp_decide(classes, capacity, profit_target);
  StepTwoResult result;
  if (!picked) return result;
  result.feasible = true;
  result.selection = std::move(*picked);
  return result;
}

}  // namespace

Solution ef1_dg_by_ell_plus(const Instance& inst) {
  static const char* kName = "ef1_dg_by_ell_plus";
  require_identical(inst, kName);
  if (inst.notion != Notion::EF1) throw std::invalid_argument("ef1_dg_by_ell_plus handles EF1 only");
  const Utility total = inst.initial_welfare();
  if (inst.ell_plus > total) return infeasible_solution(kName);
  const IdenticalView view = build_identical_view(inst);
  WorkMeter meter;

  // Least-happy agents own nothing of value: every agent can keep at most
  // one positive resource, and keeping the most valuable one dominates.
  if (view.u0 == 0) {
    std::vector<int> deleted;
    Utility kept_value = 0;
    int kept_count = 0;
    for (int a = 0; a < inst.n; ++a) {
      if (view.bundles[a].empty()) continue;
      int best = view.bundles[a][0];
      for (int r : view.bundles[a])
        if (view.values[r] > view.values[best]) best = r;
      for (int r : view.bundles[a])
        if (r != best) deleted.push_back(r);
      kept_value += view.values[best];
      ++kept_count;
    }
    const int k_plus_view = view.m - view.k_minus;
    if (kept_count < k_plus_view || kept_value < inst.ell_plus)
      return infeasible_solution(kName);
    return make_feasible_solution(inst, to_original(view, deleted), kName);
  }

  // Greedy gives the minimum deletion count over all EF1 sub-allocations;
  // if even that exceeds the budget the instance is hopeless.
  std::vector<std::vector<int>> greedy(inst.n);
  int greedy_total = 0;
  Utility greedy_welfare = total;
  for (int a : view.a_star) {
    greedy[a] = greedy_agent_deletions(view, a);
    greedy_total += static_cast<int>(greedy[a].size());
    for (int r : greedy[a]) greedy_welfare -= view.values[r];
  }
  if (greedy_total > view.k_minus) return infeasible_solution(kName);
  std::vector<int> greedy_deleted;
  for (int a : view.a_star)
    greedy_deleted.insert(greedy_deleted.end(), greedy[a].begin(), greedy[a].end());
  if (greedy_welfare >= inst.ell_plus)
    return make_feasible_solution(inst, to_original(view, greedy_deleted), kName);

  // A single resource already worth the floor: keep it in place of the
  // greedy remainder's most valuable resource. Verified rather than
  // trusted because the swap may tie with u0.
  int r_star = 0;
  for (int r = 1; r < view.m; ++r)
    if (view.values[r] > view.values[r_star]) r_star = r;
  if (view.m > 0 && view.values[r_star] >= inst.ell_plus) {
    const int holder = inst.owner[view.to_original[r_star]];
    std::vector<int> deleted = greedy_deleted;
    auto it = std::find(deleted.begin(), deleted.end(), r_star);
    if (it != deleted.end()) {
      deleted.erase(it);
      int kept_max = -1;
      for (int r : view.bundles[holder]) {
        if (std::find(deleted.begin(), deleted.end(), r) != deleted.end()) continue;
        if (r == r_star) continue;
        if (kept_max == -1 || view.values[r] > view.values[kept_max]) kept_max = r;
      }
      if (kept_max != -1) deleted.push_back(kept_max);
    }
    Solution swapped = make_feasible_solution(inst, to_original(view, deleted), kName);
    if (verify_solution(inst, swapped).ok()) return swapped;
  }

  // Candidate kept-sets per envied agent, one per achievable utility t:
  // guess the top value t1 and the remainder t2 <= u0, then maximize the
  // cardinality of a subset hitting t2. Kept value stays >= u0 so the
  // least-happy agents remain the global minimum.
  StepTwoInput step;
  std::vector<std::map<Utility, Candidate>> families(inst.n);
  for (int a : view.a_star) {
    auto& family = families[a];
    std::vector<Utility> distinct;
    for (int r : view.bundles[a]) distinct.push_back(view.values[r]);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (Utility t1 : distinct) {
      int r0 = -1;
      for (int r : view.bundles[a])
        if (view.values[r] == t1) {
          r0 = r;
          break;
        }
      const Utility t2_cap = std::min(view.u0, view.bundle_values[a] - t1);
      meter.charge(static_cast<long long>(t2_cap + 1), kName);
      for (Utility t2 = 0; t2 <= t2_cap; ++t2) {
        const Utility t = t1 + t2;
        if (t < view.u0) continue;
        const auto support = subset_support(view, view.bundles[a], r0, t2);
        const auto values = support_values(view, support);
        meter.charge(static_cast<long long>(values.size()) * (t2 + 1), kName);
        auto witness = max_size_subset_sum(values, t2);
        if (!witness) continue;
        Candidate cand;
        cand.size = witness->size + 1;
        cand.resources.push_back(r0);
        for (int pos : witness->indices) cand.resources.push_back(support[pos]);
        auto [it, inserted] = family.try_emplace(t, cand);
        if (!inserted && cand.size > it->second.size) it->second = cand;
      }
    }
    if (family.empty()) return infeasible_solution(kName);
  }

  Utility quota_welfare = inst.ell_plus;
  long long quota_count = view.m - view.k_minus;
  for (int a = 0; a < inst.n; ++a) {
    if (std::find(view.a_star.begin(), view.a_star.end(), a) != view.a_star.end()) continue;
    quota_welfare -= view.bundle_values[a];
    quota_count -= static_cast<long long>(view.bundles[a].size());
  }

  Utility best_welfare_sum = 0;
  long long best_count_sum = 0;
  for (int a : view.a_star) {
    best_welfare_sum += families[a].rbegin()->first;
    best_count_sum += families[a].rbegin()->second.size;
  }
  if (best_welfare_sum < quota_welfare) return infeasible_solution(kName);

  std::vector<int> selection(view.a_star.size(), -1);
  if (best_count_sum >= quota_count) {
    for (size_t i = 0; i < view.a_star.size(); ++i)
      selection[i] = static_cast<int>(families[view.a_star[i]].size()) - 1;
  } else {
    std::vector<std::vector<std::pair<Utility, Utility>>> items(view.a_star.size());
    Utility shift_total = 0;
    for (size_t i = 0; i < view.a_star.size(); ++i) {
      const auto& family = families[view.a_star[i]];
      const Utility top_welfare = family.rbegin()->first;
      int min_size = family.begin()->second.size;
      for (const auto& [t, cand] : family) min_size = std::min(min_size, cand.size);
      shift_total -= min_size;
      for (const auto& [t, cand] : family)
        items[i].emplace_back(top_welfare - t, cand.size - min_size);
    }
    const auto step2 = mckp_select(items, best_welfare_sum - quota_welfare,
                                   quota_count + shift_total);
    if (!step2.feasible) return infeasible_solution(kName);
    selection = step2.selection;
  }

  std::vector<int> deleted;
  for (size_t i = 0; i < view.a_star.size(); ++i) {
    const int a = view.a_star[i];
    auto it = families[a].begin();
    std::advance(it, selection[i]);
    std::vector<char> keep(view.m, 0);
    for (int r : it->second.resources) keep[r] = 1;
    for (int r : view.bundles[a])
      if (!keep[r]) deleted.push_back(r);
  }
  return make_feasible_solution(inst, to_original(view, deleted), kName);
}

Solution ef1_dg_by_ell_minus(const Instance& inst) {
  static const char* kName = "ef1_dg_by_ell_minus";
  require_identical(inst, kName);
  if (inst.notion != Notion::EF1) throw std::invalid_argument("ef1_dg_by_ell_minus handles EF1 only");
  const Utility total = inst.initial_welfare();
  const Utility ell_minus = total - inst.ell_plus;
  if (ell_minus < 0) return infeasible_solution(kName);
  const IdenticalView view = build_identical_view(inst);
  WorkMeter meter;

  if (view.a_star.empty()) return make_feasible_solution(inst, {}, kName);
  if (static_cast<Utility>(view.a_star.size()) > ell_minus) return infeasible_solution(kName);

  // Candidate deletion sets per envied agent, one per deleted value t:
  // guess the most valuable kept resource v, then minimize the cardinality
  // of a deleted subset hitting t. Deleting below value u0 is never needed.
  std::vector<std::map<Utility, Candidate>> families(inst.n);
  for (int a : view.a_star) {
    auto& family = families[a];
    Utility top = 0;
    int top_index = -1;
    for (int r : view.bundles[a])
      if (view.values[r] > top) {
        top = view.values[r];
        top_index = r;
      }
    std::vector<std::pair<Utility, int>> guesses;  // (kept max value, pinned resource)
    if (top > ell_minus) {
      guesses.emplace_back(top, top_index);
    } else {
      std::vector<Utility> distinct;
      for (int r : view.bundles[a]) distinct.push_back(view.values[r]);
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (Utility v : distinct) {
        int pinned = -1;
        for (int r : view.bundles[a])
          if (view.values[r] == v) {
            pinned = r;
            break;
          }
        guesses.emplace_back(v, pinned);
      }
    }
    const Utility t_cap = std::min(ell_minus, view.bundle_values[a] - view.u0);
    meter.charge(static_cast<long long>(guesses.size()) * (t_cap + 1), kName);
    for (Utility t = 1; t <= t_cap; ++t) {
      for (const auto& [v, pinned] : guesses) {
        if (view.bundle_values[a] - t - v > view.u0) continue;
        const auto support = subset_support(view, view.bundles[a], pinned, t);
        const auto values = support_values(view, support);
        meter.charge(static_cast<long long>(values.size()) * (t + 1), kName);
        auto witness = min_size_subset_sum(values, t);
        if (!witness) continue;
        Candidate cand;
        cand.size = witness->size;
        for (int pos : witness->indices) cand.resources.push_back(support[pos]);
        auto [it, inserted] = family.try_emplace(t, cand);
        if (!inserted && cand.size < it->second.size) it->second = cand;
      }
    }
    if (family.empty()) return infeasible_solution(kName);
  }

  Utility cheapest_welfare_sum = 0;
  long long cheapest_count_sum = 0;
  for (int a : view.a_star) {
    cheapest_welfare_sum += families[a].begin()->first;
    cheapest_count_sum += families[a].begin()->second.size;
  }
  if (cheapest_welfare_sum > ell_minus) return infeasible_solution(kName);

  std::vector<int> selection(view.a_star.size(), 0);
  if (cheapest_count_sum > view.k_minus) {
    std::vector<std::vector<std::pair<Utility, Utility>>> items(view.a_star.size());
    Utility shift_total = 0;
    for (size_t i = 0; i < view.a_star.size(); ++i) {
      const auto& family = families[view.a_star[i]];
      const Utility base_welfare = families[view.a_star[i]].begin()->first;
      int max_size = 0;
      for (const auto& [t, cand] : family) max_size = std::max(max_size, cand.size);
      shift_total += max_size;
      for (const auto& [t, cand] : family)
        items[i].emplace_back(t - base_welfare, max_size - cand.size);
    }
    const auto step2 = mckp_select(items, ell_minus - cheapest_welfare_sum,
                                   shift_total - view.k_minus);
    if (!step2.feasible) return infeasible_solution(kName);
    selection = step2.selection;
  }

  std::vector<int> deleted;
  for (size_t i = 0; i < view.a_star.size(); ++i) {
    auto it = families[view.a_star[i]].begin();
    std::advance(it, selection[i]);
    deleted.insert(deleted.end(), it->second.resources.begin(), it->second.resources.end());
  }
  return make_feasible_solution(inst, to_original(view, deleted), kName);
}

Solution ef_dg_by_ell_minus(const Instance& inst) {
  static const char* kName = "ef_dg_by_ell_minus";
  require_identical(inst, kName);
  if (inst.notion != Notion::EF) throw std::invalid_argument("ef_dg_by_ell_minus handles EF only");
  const Utility total = inst.initial_welfare();
  const Utility ell_minus = total - inst.ell_plus;
  if (ell_minus < 0) return infeasible_solution(kName);
  const IdenticalView view = build_identical_view(inst);
  WorkMeter meter;

  // Envy-freeness with one shared valuation forces equal bundle values, so
  // each agent above the common target t must shed exactly its surplus.
  const Utility t_top = view.u0;
  Utility t_low = (inst.ell_plus + inst.n - 1) / inst.n;  // ceil(ell_plus / n)
  if (t_low < 0) t_low = 0;
  for (Utility t = t_top; t >= t_low; --t) {
    std::vector<int> deleted;
    long long count = 0;
    bool achievable = true;
    for (int a = 0; a < inst.n && achievable; ++a) {
      const Utility surplus = view.bundle_values[a] - t;
      if (surplus == 0) continue;
      const auto support = subset_support(view, view.bundles[a], -1, surplus);
      const auto values = support_values(view, support);
      meter.charge(static_cast<long long>(values.size()) * (surplus + 1), kName);
      auto witness = min_size_subset_sum(values, surplus);
      if (!witness) {
        achievable = false;
        break;
      }
      count += witness->size;
      for (int pos : witness->indices) deleted.push_back(support[pos]);
    }
    if (achievable && count <= view.k_minus)
      return make_feasible_solution(inst, to_original(view, deleted), kName);
    if (t == 0) break;
  }
  return infeasible_solution(kName);
}

}  // namespace efdg
