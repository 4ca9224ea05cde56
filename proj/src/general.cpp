#include "efdg/general.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "efdg/identical.hpp"
#include "efdg/oracle.hpp"

namespace efdg {

namespace {

struct WorkMeter {
  const char* who;
  long long limit;
  long long used = 0;
  void charge(long long units = 1) {
    used += units;
    if (used > limit) throw CapabilityError(std::string(who) + ": work limit exceeded");
  }
};

Utility value_of(const Instance& inst, int viewer, const std::vector<int>& bundle) {
  Utility sum = 0;
  for (int r : bundle) sum += inst.utilities[viewer][r];
  return sum;
}

bool envies_bundles(const Instance& inst, Notion notion, int a,
                    const std::vector<int>& mine, const std::vector<int>& theirs) {
  Utility own = value_of(inst, a, mine);
  Utility sum = 0, best = 0;
  for (int r : theirs) {
    const Utility u = inst.utilities[a][r];
    sum += u;
    best = std::max(best, u);
  }
  if (notion == Notion::EF) return sum > own;
  return !theirs.empty() && sum - best > own;
}

// Fairness and welfare of the allocation given by deletion flags, one pass
// over the resources.
bool fair_given_deleted(const Instance& inst, const std::vector<char>& deleted,
                        Notion notion, Utility* welfare_out) {
  const int n = inst.n;
  std::vector<Utility> seen(static_cast<size_t>(n) * n, 0);
  std::vector<Utility> seen_max(static_cast<size_t>(n) * n, 0);
  std::vector<int> kept_count(n, 0);
  for (int r = 0; r < inst.m; ++r) {
    if (deleted[r]) continue;
    const int b = inst.owner[r];
    ++kept_count[b];
    for (int a = 0; a < n; ++a) {
      const Utility u = inst.utilities[a][r];
      seen[static_cast<size_t>(a) * n + b] += u;
      auto& mx = seen_max[static_cast<size_t>(a) * n + b];
      if (u > mx) mx = u;
    }
  }
  Utility welfare = 0;
  for (int a = 0; a < n; ++a) welfare += seen[static_cast<size_t>(a) * n + a];
  if (welfare_out) *welfare_out = welfare;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const size_t idx = static_cast<size_t>(a) * n + b;
      const Utility own = seen[static_cast<size_t>(a) * n + a];
      if (notion == Notion::EF) {
        if (seen[idx] > own) return false;
      } else {
        if (kept_count[b] > 0 && seen[idx] - seen_max[idx] > own) return false;
      }
    }
  return true;
}

std::vector<int> flags_to_indices(const std::vector<char>& deleted) {
  std::vector<int> out;
  for (int r = 0; r < static_cast<int>(deleted.size()); ++r)
    if (deleted[r]) out.push_back(r);
  return out;
}

}  // namespace

std::vector<int> inner_best_subset(const Instance& inst, Notion notion, int agent,
                                   std::span<const int> candidate,
                                   const std::vector<std::vector<int>>& current_kept) {
  const int k = static_cast<int>(candidate.size());
  if (k > 24) throw CapabilityError("inner_best_subset: candidate bundle too large");
  std::vector<Utility> others_own(inst.n, 0);
  for (int b = 0; b < inst.n; ++b)
    if (b != agent) others_own[b] = value_of(inst, b, current_kept[b]);

  std::uint32_t best_mask = 0;
  Utility best_value = -1;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    bool envied = false;
    for (int b = 0; b < inst.n && !envied; ++b) {
      if (b == agent) continue;
      Utility sum = 0, top = 0;
      int count = 0;
      for (int i = 0; i < k; ++i) {
        if (!(mask >> i & 1)) continue;
        const Utility u = inst.utilities[b][candidate[i]];
        sum += u;
        top = std::max(top, u);
        ++count;
      }
      if (notion == Notion::EF) {
        envied = sum > others_own[b];
      } else {
        envied = count > 0 && sum - top > others_own[b];
      }
    }
    if (envied) continue;
    Utility mine_value = 0;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) mine_value += inst.utilities[agent][candidate[i]];
    if (mine_value > best_value) {
      best_value = mine_value;
      best_mask = mask;
    }
  }
  std::vector<int> chosen;
  for (int i = 0; i < k; ++i)
    if (best_mask >> i & 1) chosen.push_back(candidate[i]);
  return chosen;
}

Solution welfare_fixed_point(const Instance& inst, Notion notion, FixedPointStats* stats) {
  static const char* kName = "welfare_fixed_point";
  if (inst.k_minus != inst.m)
    throw std::invalid_argument("welfare_fixed_point requires the welfare variant (k_minus = m)");
  std::vector<std::vector<int>> pruned(inst.n);
  for (int a = 0; a < inst.n; ++a)
    for (int r : inst.bundles[a])
      if (inst.utilities[a][r] > 0) pruned[a].push_back(r);
  long long step_budget = 0;
  for (int a = 0; a < inst.n; ++a) {
    if (pruned[a].size() > 24) throw CapabilityError("welfare_fixed_point: bundle too large");
    step_budget += 1LL << pruned[a].size();
  }

  std::vector<std::vector<int>> kept = pruned;
  long long iterations = 0;
  for (;;) {
    int target = -1;
    for (int b = 0; b < inst.n && target < 0; ++b)
      for (int a = 0; a < inst.n; ++a) {
        if (a == b) continue;
        if (envies_bundles(inst, notion, a, kept[a], kept[b])) {
          target = b;
          break;
        }
      }
    if (target < 0) break;
    // The replacement is recomputed from the full pruned bundle, so a
    // resource dropped earlier can come back.
    kept[target] = inner_best_subset(inst, notion, target, pruned[target], kept);
    if (++iterations > step_budget)
      throw std::logic_error("welfare_fixed_point exceeded its termination bound");
  }
  if (stats) stats->iterations = iterations;

  std::vector<char> keep_flag(inst.m, 0);
  Utility total = 0;
  for (int a = 0; a < inst.n; ++a) {
    for (int r : kept[a]) keep_flag[r] = 1;
    total += value_of(inst, a, kept[a]);
  }
  if (total < inst.ell_plus) return infeasible_solution(kName);
  std::vector<int> deleted;
  for (int r = 0; r < inst.m; ++r)
    if (!keep_flag[r]) deleted.push_back(r);
  return make_feasible_solution(inst, std::move(deleted), kName);
}

namespace {

// Inner exact search shared by the EF formulation and each EF1 guess:
// depth-first over keep/delete per resource in owner-grouped order with
// optimistic-bound pruning. y_value[a][b] >= 0 is the guessed surviving
// value for the ordered pair, kNoGuess means a plain no-envy constraint,
// and forced-empty owners have every resource deleted.
constexpr Utility kNoGuess = -1;

class KeepSearch {
 public:
  KeepSearch(const Instance& inst, Notion notion, WorkMeter& meter)
      : inst_(inst), notion_(notion), meter_(meter), n_(inst.n) {
    for (int a = 0; a < n_; ++a)
      for (int r : inst.bundles[a]) order_.push_back(r);
  }

  std::optional<std::vector<int>> run(const std::vector<Utility>& y_value,
                                      const std::vector<char>& forced_empty) {
    y_ = &y_value;
    forced_empty_ = &forced_empty;
    decided_.assign(inst_.m, -1);
    seen_.assign(static_cast<size_t>(n_) * n_, 0);
    potential_.assign(static_cast<size_t>(n_) * n_, 0);
    match_kept_.assign(static_cast<size_t>(n_) * n_, 0);
    match_avail_.assign(static_cast<size_t>(n_) * n_, 0);
    kept_count_ = 0;
    undecided_count_ = inst_.m;
    welfare_kept_ = 0;
    welfare_potential_ = 0;
    for (int b = 0; b < n_; ++b)
      for (int r : inst_.bundles[b]) {
        welfare_potential_ += inst_.utilities[b][r];
        for (int a = 0; a < n_; ++a) {
          potential_[idx(a, b)] += inst_.utilities[a][r];
          if (notion_ == Notion::EF1 && y(a, b) >= 0 && inst_.utilities[a][r] == y(a, b))
            ++match_avail_[idx(a, b)];
        }
      }
    found_.reset();
    descend(0);
    return found_;
  }

 private:
  size_t idx(int a, int b) const { return static_cast<size_t>(a) * n_ + b; }
  Utility y(int a, int b) const { return (*y_)[idx(a, b)]; }

  bool viable() const {
    if (kept_count_ + undecided_count_ < inst_.k_plus()) return false;
    if (welfare_kept_ + welfare_potential_ < inst_.ell_plus) return false;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        if (a == b || (*forced_empty_)[b]) continue;
        const Utility slack = notion_ == Notion::EF ? 0 : std::max<Utility>(y(a, b), 0);
        if (seen_[idx(a, a)] + potential_[idx(a, a)] + slack < seen_[idx(a, b)]) return false;
        if (notion_ == Notion::EF1 && y(a, b) >= 0 && match_kept_[idx(a, b)] == 0 &&
            match_avail_[idx(a, b)] == 0)
          return false;
      }
    return true;
  }

  bool satisfied() const {
    if (kept_count_ < inst_.k_plus()) return false;
    if (welfare_kept_ < inst_.ell_plus) return false;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        if (a == b || (*forced_empty_)[b]) continue;
        const Utility slack = notion_ == Notion::EF ? 0 : std::max<Utility>(y(a, b), 0);
        if (seen_[idx(a, a)] + slack < seen_[idx(a, b)]) return false;
        if (notion_ == Notion::EF1 && y(a, b) >= 0 && match_kept_[idx(a, b)] == 0) return false;
      }
    return true;
  }

  void decide(int r, int state) {
    const int b = inst_.owner[r];
    decided_[r] = state;
    --undecided_count_;
    welfare_potential_ -= inst_.utilities[b][r];
    for (int a = 0; a < n_; ++a) {
      potential_[idx(a, b)] -= inst_.utilities[a][r];
      if (state == 1) seen_[idx(a, b)] += inst_.utilities[a][r];
      if (notion_ == Notion::EF1 && y(a, b) >= 0 && inst_.utilities[a][r] == y(a, b)) {
        --match_avail_[idx(a, b)];
        if (state == 1) ++match_kept_[idx(a, b)];
      }
    }
    if (state == 1) {
      ++kept_count_;
      welfare_kept_ += inst_.utilities[b][r];
    }
  }

  void undo(int r, int state) {
    const int b = inst_.owner[r];
    decided_[r] = -1;
    ++undecided_count_;
    welfare_potential_ += inst_.utilities[b][r];
    for (int a = 0; a < n_; ++a) {
      potential_[idx(a, b)] += inst_.utilities[a][r];
      if (state == 1) seen_[idx(a, b)] -= inst_.utilities[a][r];
      if (notion_ == Notion::EF1 && y(a, b) >= 0 && inst_.utilities[a][r] == y(a, b)) {
        ++match_avail_[idx(a, b)];
        if (state == 1) --match_kept_[idx(a, b)];
      }
    }
    if (state == 1) {
      --kept_count_;
      welfare_kept_ -= inst_.utilities[b][r];
    }
  }

  void descend(size_t pos) {
    if (found_) return;
    meter_.charge();
    if (!viable()) return;
    if (pos == order_.size()) {
      if (!satisfied()) return;
      std::vector<int> deleted;
      for (int r = 0; r < inst_.m; ++r)
        if (decided_[r] == 0) deleted.push_back(r);
      found_ = std::move(deleted);
      return;
    }
    const int r = order_[pos];
    if (!(*forced_empty_)[inst_.owner[r]]) {
      decide(r, 1);
      descend(pos + 1);
      undo(r, 1);
      if (found_) return;
    }
    decide(r, 0);
    descend(pos + 1);
    undo(r, 0);
  }

  const Instance& inst_;
  Notion notion_;
  WorkMeter& meter_;
  int n_;
  std::vector<int> order_;
  const std::vector<Utility>* y_ = nullptr;
  const std::vector<char>* forced_empty_ = nullptr;
  std::vector<int> decided_;
  std::vector<Utility> seen_, potential_;
  std::vector<int> match_kept_, match_avail_;
  int kept_count_ = 0, undecided_count_ = 0;
  Utility welfare_kept_ = 0, welfare_potential_ = 0;
  std::optional<std::vector<int>> found_;
};

}  // namespace

Solution constraint_formulation_decide(const Instance& inst, Notion notion,
                                       long long work_limit) {
  static const char* kName = "constraint_formulation";
  WorkMeter meter{kName, work_limit};
  KeepSearch search(inst, notion, meter);
  const size_t pair_count = static_cast<size_t>(inst.n) * inst.n;

  if (notion == Notion::EF) {
    std::vector<Utility> y(pair_count, kNoGuess);
    std::vector<char> forced_empty(inst.n, 0);
    auto deleted = search.run(y, forced_empty);
    if (!deleted) return infeasible_solution(kName);
    return make_feasible_solution(inst, std::move(*deleted), kName);
  }

  // Candidate guesses per ordered pair: distinct values a sees in b's
  // bundle, descending, then "b's bundle empties out". The empty marker is
  // a property of the envied agent, so later pairs with the same target
  // must agree with it.
  struct PairOptions {
    int a, b;
    std::vector<Utility> values;  // descending; kNoGuess encodes the empty marker
  };
  std::vector<PairOptions> pairs;
  double guess_estimate = 1.0;
  for (int a = 0; a < inst.n; ++a)
    for (int b = 0; b < inst.n; ++b) {
      if (a == b) continue;
      PairOptions po{a, b, {}};
      for (int r : inst.bundles[b]) po.values.push_back(inst.utilities[a][r]);
      std::sort(po.values.begin(), po.values.end(), std::greater<>());
      po.values.erase(std::unique(po.values.begin(), po.values.end()), po.values.end());
      po.values.push_back(kNoGuess);
      guess_estimate *= static_cast<double>(po.values.size());
      pairs.push_back(std::move(po));
    }
  if (guess_estimate > static_cast<double>(work_limit))
    throw CapabilityError("constraint_formulation: guess space exceeds the work limit");

  std::vector<Utility> y(pair_count, kNoGuess);
  std::vector<char> forced_empty(inst.n, 0);
  std::vector<int> empty_state(inst.n, 0);  // 0 unset, 1 empty, 2 non-empty
  std::optional<std::vector<int>> answer;

  auto assign = [&](auto&& self, size_t i) -> void {
    if (answer) return;
    if (i == pairs.size()) {
      for (int b = 0; b < inst.n; ++b) forced_empty[b] = empty_state[b] == 1;
      answer = search.run(y, forced_empty);
      return;
    }
    const auto& po = pairs[i];
    for (const Utility v : po.values) {
      if (v == kNoGuess && empty_state[po.b] == 2) continue;
      if (v != kNoGuess && empty_state[po.b] == 1) continue;
      const int saved = empty_state[po.b];
      empty_state[po.b] = v == kNoGuess ? 1 : 2;
      y[static_cast<size_t>(po.a) * inst.n + po.b] = v;
      self(self, i + 1);
      empty_state[po.b] = saved;
      y[static_cast<size_t>(po.a) * inst.n + po.b] = kNoGuess;
      if (answer) return;
    }
  };
  assign(assign, 0);
  if (!answer) return infeasible_solution(kName);
  return make_feasible_solution(inst, std::move(*answer), kName);
}

namespace {

constexpr long long kBranchNodeLimit = 400'000'000;

class BranchSearch {
 public:
  BranchSearch(const Instance& inst, Notion notion, BudgetKind kind, BranchStats* stats)
      : inst_(inst), notion_(notion), kind_(kind), stats_(stats), n_(inst.n) {
    deleted_.assign(inst.m, 0);
    seen_.assign(static_cast<size_t>(n_) * n_, 0);
    kept_count_.assign(n_, 0);
    for (int b = 0; b < n_; ++b)
      for (int r : inst.bundles[b]) {
        ++kept_count_[b];
        for (int a = 0; a < n_; ++a) seen_[idx(a, b)] += inst.utilities[a][r];
      }
    welfare_ = 0;
    for (int a = 0; a < n_; ++a) welfare_ += seen_[idx(a, a)];
  }

  void predelete_owner_zero() {
    for (int r = 0; r < inst_.m; ++r)
      if (inst_.utilities[inst_.owner[r]][r] == 0) remove(r);
  }

  bool solve(long long budget) {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (pair_bad(a, b)) violating_.emplace(a, b);
    return dfs(budget);
  }

  std::vector<int> accepted_deletions() const { return flags_to_indices(accepted_); }

 private:
  size_t idx(int a, int b) const { return static_cast<size_t>(a) * n_ + b; }

  Utility max_kept(int a, int b) const {
    Utility best = 0;
    for (int r : inst_.bundles[b])
      if (!deleted_[r]) best = std::max(best, inst_.utilities[a][r]);
    return best;
  }

  bool pair_bad(int a, int b) const {
    if (a == b) return false;
    const Utility own = seen_[idx(a, a)];
    if (notion_ == Notion::EF) return seen_[idx(a, b)] > own;
    return kept_count_[b] > 0 && seen_[idx(a, b)] - max_kept(a, b) > own;
  }

  void refresh_pair(int a, int b) {
    if (a == b) return;
    const auto key = std::make_pair(a, b);
    if (pair_bad(a, b)) {
      violating_.insert(key);
    } else {
      violating_.erase(key);
    }
  }

  void remove(int r) {
    const int b = inst_.owner[r];
    deleted_[r] = 1;
    --kept_count_[b];
    for (int a = 0; a < n_; ++a) seen_[idx(a, b)] -= inst_.utilities[a][r];
    welfare_ -= inst_.utilities[b][r];
    for (int a = 0; a < n_; ++a) refresh_pair(a, b);
    if (inst_.utilities[b][r] > 0)
      for (int c = 0; c < n_; ++c) refresh_pair(b, c);
  }

  void restore(int r) {
    const int b = inst_.owner[r];
    deleted_[r] = 0;
    ++kept_count_[b];
    for (int a = 0; a < n_; ++a) seen_[idx(a, b)] += inst_.utilities[a][r];
    welfare_ += inst_.utilities[b][r];
    for (int a = 0; a < n_; ++a) refresh_pair(a, b);
    if (inst_.utilities[b][r] > 0)
      for (int c = 0; c < n_; ++c) refresh_pair(b, c);
  }

  bool dfs(long long budget) {
    if (stats_) ++stats_->nodes;
    if (++nodes_ > kBranchNodeLimit) throw CapabilityError("branch_decide: node limit exceeded");
    if (violating_.empty()) {
      if (stats_) ++stats_->leaves;
      if (welfare_ < inst_.ell_plus) return false;
      accepted_ = deleted_;
      return true;
    }
    const auto [a, b] = *violating_.begin();
    bool branched = false;
    for (int r : inst_.bundles[b]) {
      if (deleted_[r] || inst_.utilities[a][r] == 0) continue;
      const long long cost = kind_ == BudgetKind::Count ? 1 : inst_.utilities[b][r];
      if (cost > budget) continue;
      branched = true;
      remove(r);
      const bool ok = dfs(budget - cost);
      restore(r);
      if (ok) return true;
    }
    if (!branched && stats_) ++stats_->leaves;
    return false;
  }

  const Instance& inst_;
  Notion notion_;
  BudgetKind kind_;
  BranchStats* stats_;
  int n_;
  std::vector<char> deleted_, accepted_;
  std::vector<Utility> seen_;
  std::vector<int> kept_count_;
  Utility welfare_ = 0;
  std::set<std::pair<int, int>> violating_;
  long long nodes_ = 0;
};

}  // namespace

Solution branch_decide(const Instance& inst, Notion notion, BudgetKind kind,
                       BranchStats* stats) {
  static const char* kName = "branch";
  long long budget;
  BranchSearch search(inst, notion, kind, stats);
  if (kind == BudgetKind::Welfare) {
    if (inst.k_minus != inst.m)
      throw std::invalid_argument(
          "branch_decide with a welfare budget requires the welfare variant (k_minus = m)");
    budget = inst.initial_welfare() - inst.ell_plus;
    if (budget < 0) return infeasible_solution(kName);
    search.predelete_owner_zero();
  } else {
    budget = inst.k_minus;
  }
  if (!search.solve(budget)) return infeasible_solution(kName);
  return make_feasible_solution(inst, search.accepted_deletions(), kName);
}

namespace {

double combinations_up_to(int m, long long k) {
  double total = 0.0, term = 1.0;
  for (long long s = 0; s <= std::min<long long>(k, m); ++s) {
    total += term;
    if (total > 1e18) return 1e18;
    term *= static_cast<double>(m - s) / static_cast<double>(s + 1);
  }
  return total;
}

// Enumerate index subsets of {0..m-1} in lexicographic prefix order,
// bounded by a per-subset additive budget. visit returns true to stop.
template <typename Visit, typename Cost>
bool enumerate_budgeted_subsets(int m, long long budget, Cost cost, Visit visit,
                                std::vector<int>& current) {
  if (visit(current)) return true;
  const int start = current.empty() ? 0 : current.back() + 1;
  for (int i = start; i < m; ++i) {
    const long long c = cost(i);
    if (c > budget) continue;
    current.push_back(i);
    if (enumerate_budgeted_subsets(m, budget - c, cost, visit, current)) return true;
    current.pop_back();
  }
  return false;
}

}  // namespace

Solution enumerate_decide(const Instance& inst, Notion notion, EnumerationStrategy strategy,
                          long long work_limit) {
  WorkMeter meter{"enumerate", work_limit};
  const Utility ell_minus = inst.initial_welfare() - inst.ell_plus;

  switch (strategy) {
    case EnumerationStrategy::ByKMinus: {
      static const char* kName = "enumerate_kminus";
      if (combinations_up_to(inst.m, inst.k_minus) * (inst.n * inst.n + inst.m) >
          static_cast<double>(work_limit))
        throw CapabilityError("enumerate_kminus: subset space exceeds the work limit");
      std::vector<char> flags(inst.m, 0);
      std::vector<int> current;
      std::vector<int> answer;
      bool found = false;
      enumerate_budgeted_subsets(
          inst.m, inst.k_minus, [](int) { return 1LL; },
          [&](const std::vector<int>& subset) {
            meter.charge(inst.n * inst.n + inst.m);
            std::fill(flags.begin(), flags.end(), 0);
            for (int r : subset) flags[r] = 1;
            Utility w = 0;
            if (fair_given_deleted(inst, flags, notion, &w) && w >= inst.ell_plus) {
              answer = subset;
              found = true;
              return true;
            }
            return false;
          },
          current);
      if (!found) return infeasible_solution(kName);
      return make_feasible_solution(inst, std::move(answer), kName);
    }

    case EnumerationStrategy::ByLMinus: {
      static const char* kName = "enumerate_lminus";
      if (inst.k_minus != inst.m)
        throw std::invalid_argument(
            "enumerate_lminus requires the welfare variant (k_minus = m)");
      if (ell_minus < 0) return infeasible_solution(kName);
      std::vector<char> flags(inst.m, 0);
      std::vector<int> positive;  // everything left after the free deletions
      for (int r = 0; r < inst.m; ++r) {
        if (inst.utilities[inst.owner[r]][r] == 0) {
          flags[r] = 1;
        } else {
          positive.push_back(r);
        }
      }
      if (combinations_up_to(static_cast<int>(positive.size()),
                             std::min<long long>(ell_minus, positive.size())) *
              (inst.n * inst.n + inst.m) >
          static_cast<double>(work_limit))
        throw CapabilityError("enumerate_lminus: subset space exceeds the work limit");
      std::vector<int> current;
      std::vector<int> answer;
      bool found = false;
      enumerate_budgeted_subsets(
          static_cast<int>(positive.size()), ell_minus,
          [&](int i) { return static_cast<long long>(inst.utilities[inst.owner[positive[i]]][positive[i]]); },
          [&](const std::vector<int>& subset) {
            meter.charge(inst.n * inst.n + inst.m);
            std::vector<char> local = flags;
            for (int i : subset) local[positive[i]] = 1;
            Utility w = 0;
            if (fair_given_deleted(inst, local, notion, &w) && w >= inst.ell_plus) {
              answer = flags_to_indices(local);
              found = true;
              return true;
            }
            return false;
          },
          current);
      if (!found) return infeasible_solution(kName);
      return make_feasible_solution(inst, std::move(answer), kName);
    }

    case EnumerationStrategy::BySupport: {
      static const char* kName = "enumerate_support";
      std::vector<int> support;
      for (int r = 0; r < inst.m; ++r) {
        bool valued = false;
        for (int a = 0; a < inst.n && !valued; ++a) valued = inst.utilities[a][r] > 0;
        if (valued) support.push_back(r);
      }
      if (support.size() > 60 ||
          std::ldexp(1.0, static_cast<int>(support.size())) * (inst.n * inst.n + inst.m) >
              static_cast<double>(work_limit))
        throw CapabilityError("enumerate_support: support space exceeds the work limit");
      std::vector<char> flags(inst.m, 0);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << support.size()); ++mask) {
        meter.charge(inst.n * inst.n + inst.m);
        if (std::popcount(mask) > inst.k_minus) continue;
        std::fill(flags.begin(), flags.end(), 0);
        for (size_t i = 0; i < support.size(); ++i)
          if (mask >> i & 1) flags[support[i]] = 1;
        Utility w = 0;
        if (fair_given_deleted(inst, flags, notion, &w) && w >= inst.ell_plus)
          return make_feasible_solution(inst, flags_to_indices(flags), kName);
      }
      return infeasible_solution(kName);
    }

    case EnumerationStrategy::ByDLMinus: {
      static const char* kName = "enumerate_d_lminus";
      if (ell_minus < 0) return infeasible_solution(kName);
      std::vector<int> positive;
      std::vector<std::vector<int>> zeros(inst.n);
      for (int a = 0; a < inst.n; ++a)
        for (int r : inst.bundles[a]) {
          if (inst.utilities[a][r] > 0) {
            positive.push_back(r);
          } else {
            zeros[a].push_back(r);
          }
        }
      for (int a = 0; a < inst.n; ++a)
        if (zeros[a].size() > 24)
          throw CapabilityError("enumerate_d_lminus: zero-valued bundle too large");
      std::sort(positive.begin(), positive.end());

      std::vector<char> flags(inst.m, 0);
      std::vector<int> current;
      std::vector<int> answer;
      bool found = false;
      enumerate_budgeted_subsets(
          static_cast<int>(positive.size()), ell_minus,
          [&](int i) { return static_cast<long long>(inst.utilities[inst.owner[positive[i]]][positive[i]]); },
          [&](const std::vector<int>& subset) {
            // Positive deletions fixed; the rest must be owner-zero and can
            // be settled per envied agent independently, because an agent's
            // own utility ignores its zero-valued resources.
            std::fill(flags.begin(), flags.end(), 0);
            for (int i : subset) flags[positive[i]] = 1;
            std::vector<std::vector<int>> kept_after(inst.n);
            for (int a = 0; a < inst.n; ++a)
              for (int r : inst.bundles[a])
                if (!flags[r]) kept_after[a].push_back(r);
            long long extra = 0;
            std::vector<int> zero_deletions;
            bool all_fixable = true;
            for (int a = 0; a < inst.n && all_fixable; ++a) {
              const int zk = static_cast<int>(zeros[a].size());
              int best_mask = -1;
              int best_size = zk + 1;
              for (int mask = 0; mask < (1 << zk); ++mask) {
                if (std::popcount(static_cast<unsigned>(mask)) >= best_size) continue;
                meter.charge(inst.n * (zk + 4));
                std::vector<int> mine;
                for (int r : kept_after[a]) {
                  bool dropped = false;
                  for (int i = 0; i < zk; ++i)
                    if ((mask >> i & 1) && zeros[a][i] == r) dropped = true;
                  if (!dropped) mine.push_back(r);
                }
                bool envied = false;
                for (int b = 0; b < inst.n && !envied; ++b) {
                  if (b == a) continue;
                  envied = envies_bundles(inst, notion, b, kept_after[b], mine);
                }
                if (!envied) {
                  best_mask = mask;
                  best_size = std::popcount(static_cast<unsigned>(mask));
                }
              }
              if (best_mask < 0) {
                all_fixable = false;
                break;
              }
              extra += best_size;
              for (int i = 0; i < zk; ++i)
                if (best_mask >> i & 1) zero_deletions.push_back(zeros[a][i]);
            }
            if (!all_fixable) return false;
            if (static_cast<long long>(subset.size()) + extra > inst.k_minus) return false;
            answer = flags_to_indices(flags);
            answer.insert(answer.end(), zero_deletions.begin(), zero_deletions.end());
            found = true;
            return true;
          },
          current);
      if (!found) return infeasible_solution(kName);
      return make_feasible_solution(inst, std::move(answer), kName);
    }
  }
  throw std::invalid_argument("unknown enumeration strategy");
}

namespace {

// Utility-profile search: the only state that matters for agents touched so
// far is the multiset of values they assign to each hypothetical remaining
// bundle, which the guessed profiles determine exactly.
class ProfileSearch {
 public:
  ProfileSearch(const Instance& inst, Notion notion, BudgetKind kind, long long work_limit)
      : inst_(inst),
        notion_(notion),
        kind_(kind),
        meter_{"profile_guess", work_limit},
        n_(inst.n) {
    bundle_.assign(n_, {});
    pre_flags_.assign(inst.m, 0);
    for (int a = 0; a < n_; ++a)
      for (int r : inst.bundles[a]) {
        if (kind == BudgetKind::Welfare && inst.utilities[a][r] == 0) {
          pre_flags_[r] = 1;
          pre_deleted_.push_back(r);
        } else {
          bundle_[a].push_back(r);
        }
      }
    remaining_.assign(static_cast<size_t>(n_) * n_, {});
    rem_sum_.assign(static_cast<size_t>(n_) * n_, 0);
    rem_count_.assign(static_cast<size_t>(n_) * n_, 0);
    in_e_.assign(n_, 0);
  }

  std::optional<std::vector<int>> run(long long budget, int w_r) {
    budget_ = budget;
    touch_cap_ = budget * (static_cast<long long>(w_r) + 1);
    std::vector<int> initially_envious;
    for (int a = 0; a < n_; ++a) {
      bool envious = false;
      for (int b = 0; b < n_ && !envious; ++b) {
        if (a == b) continue;
        envious = envies_bundles(inst_, notion_, a, bundle_[a], bundle_[b]);
      }
      if (envious) initially_envious.push_back(a);
    }
    if (static_cast<long long>(initially_envious.size()) >
        budget * static_cast<long long>(w_r))
      return std::nullopt;
    for (int a : initially_envious) join(a);
    if (!dfs()) return std::nullopt;
    return result_;
  }

 private:
  struct Commitment {
    int target;
    std::vector<Utility> profile;  // aligned with e_order_
  };

  size_t idx(int a, int b) const { return static_cast<size_t>(a) * n_ + b; }

  void join(int a) {
    in_e_[a] = 1;
    e_order_.push_back(a);
    for (int b = 0; b < n_; ++b) {
      auto& bag = remaining_[idx(a, b)];
      bag.clear();
      Utility sum = 0;
      for (int r : bundle_[b]) {
        ++bag[inst_.utilities[a][r]];
        sum += inst_.utilities[a][r];
      }
      rem_sum_[idx(a, b)] = sum;
      rem_count_[idx(a, b)] = static_cast<int>(bundle_[b].size());
    }
  }

  void unjoin(int a) {
    in_e_[a] = 0;
    e_order_.pop_back();
  }

  void take_value(int a, int b, Utility v) {
    auto& bag = remaining_[idx(a, b)];
    auto it = bag.find(v);
    if (--it->second == 0) bag.erase(it);
    rem_sum_[idx(a, b)] -= v;
    --rem_count_[idx(a, b)];
  }

  void put_value(int a, int b, Utility v) {
    ++remaining_[idx(a, b)][v];
    rem_sum_[idx(a, b)] += v;
    ++rem_count_[idx(a, b)];
  }

  bool value_available(int a, int b, Utility v) const {
    const auto& bag = remaining_[idx(a, b)];
    auto it = bag.find(v);
    return it != bag.end() && it->second > 0;
  }

  bool envy_pair(int a, int b) const {
    const Utility own = rem_sum_[idx(a, a)];
    const Utility sum = rem_sum_[idx(a, b)];
    if (notion_ == Notion::EF) return sum > own;
    if (rem_count_[idx(a, b)] == 0) return false;
    const Utility top = remaining_[idx(a, b)].rbegin()->first;
    return sum - top > own;
  }

  bool dfs() {
    meter_.charge();
    int envier = -1, target = -1;
    for (int a = 0; a < n_ && envier < 0; ++a) {
      if (!in_e_[a]) continue;
      for (int b = 0; b < n_; ++b) {
        if (a == b) continue;
        if (envy_pair(a, b)) {
          envier = a;
          target = b;
          break;
        }
      }
    }
    if (envier < 0) return finalize();
    if (!in_e_[target]) {
      if (static_cast<long long>(e_order_.size()) + 1 > touch_cap_) return false;
      join(target);
      const bool ok = extend(0, target);
      unjoin(target);
      return ok;
    }
    return guess_deletion(target);
  }

  // A newly touched agent retroactively guesses its value for every
  // committed deletion, restricted to values of resources that still match
  // the committed profile. Once all commitments are extended the main scan
  // resumes and re-finds the violating pair.
  bool extend(size_t commit_index, int newcomer) {
    if (commit_index == commits_.size()) return dfs();
    meter_.charge();
    // Recursion below grows commits_, so address it by index throughout.
    const int target = commits_[commit_index].target;
    std::vector<Utility> options;
    for (int r : bundle_[target]) {
      bool matches = true;
      for (size_t i = 0; i + 1 < e_order_.size() && matches; ++i)
        matches = inst_.utilities[e_order_[i]][r] == commits_[commit_index].profile[i];
      if (matches) options.push_back(inst_.utilities[newcomer][r]);
    }
    std::sort(options.begin(), options.end());
    options.erase(std::unique(options.begin(), options.end()), options.end());
    for (const Utility v : options) {
      if (!value_available(newcomer, target, v)) continue;
      take_value(newcomer, target, v);
      commits_[commit_index].profile.push_back(v);
      const bool ok = extend(commit_index + 1, newcomer);
      commits_[commit_index].profile.pop_back();
      put_value(newcomer, target, v);
      if (ok) return true;
    }
    return false;
  }

  bool guess_deletion(int target) {
    // Candidate profiles come from concrete resources still unclaimed by
    // earlier commitments on the same bundle.
    std::map<std::vector<Utility>, int> pool;
    for (int r : bundle_[target]) {
      std::vector<Utility> profile;
      profile.reserve(e_order_.size());
      for (int a : e_order_) profile.push_back(inst_.utilities[a][r]);
      ++pool[profile];
    }
    for (const auto& c : commits_)
      if (c.target == target) --pool[c.profile];

    const size_t owner_pos =
        std::find(e_order_.begin(), e_order_.end(), target) - e_order_.begin();
    for (const auto& [profile, avail] : pool) {
      if (avail <= 0) continue;
      const long long cost = kind_ == BudgetKind::Count ? 1 : profile[owner_pos];
      if (cost > budget_) continue;
      budget_ -= cost;
      for (size_t i = 0; i < e_order_.size(); ++i)
        take_value(e_order_[i], target, profile[i]);
      commits_.push_back(Commitment{target, profile});
      const bool ok = dfs();
      commits_.pop_back();
      for (size_t i = 0; i < e_order_.size(); ++i)
        put_value(e_order_[i], target, profile[i]);
      budget_ += cost;
      if (ok) return true;
    }
    return false;
  }

  bool finalize() {
    std::vector<char> used(inst_.m, 0);
    for (const auto& c : commits_) {
      int chosen = -1;
      for (int r : bundle_[c.target]) {
        if (used[r]) continue;
        bool matches = true;
        for (size_t i = 0; i < e_order_.size() && matches; ++i)
          matches = inst_.utilities[e_order_[i]][r] == c.profile[i];
        if (matches) {
          chosen = r;
          break;
        }
      }
      if (chosen < 0) return false;
      used[chosen] = 1;
    }
    std::vector<char> flags = pre_flags_;
    for (int r = 0; r < inst_.m; ++r)
      if (used[r]) flags[r] = 1;
    Utility w = 0;
    if (!fair_given_deleted(inst_, flags, notion_, &w)) return false;
    if (w < inst_.ell_plus) return false;
    result_ = flags_to_indices(flags);
    return true;
  }

  const Instance& inst_;
  Notion notion_;
  BudgetKind kind_;
  WorkMeter meter_;
  int n_;
  std::vector<std::vector<int>> bundle_;
  std::vector<char> pre_flags_;
  std::vector<int> pre_deleted_;
  std::vector<std::map<Utility, int>> remaining_;
  std::vector<Utility> rem_sum_;
  std::vector<int> rem_count_;
  std::vector<char> in_e_;
  std::vector<int> e_order_;
  std::vector<Commitment> commits_;
  long long budget_ = 0;
  long long touch_cap_ = 0;
  std::vector<int> result_;
};

}  // namespace

Solution profile_guess_decide(const Instance& inst, Notion notion, BudgetKind kind,
                              long long work_limit) {
  static const char* kName = "profile_guess";
  long long budget;
  if (kind == BudgetKind::Welfare) {
    if (inst.k_minus != inst.m)
      throw std::invalid_argument(
          "profile_guess_decide with a welfare budget requires the welfare variant");
    budget = inst.initial_welfare() - inst.ell_plus;
    if (budget < 0) return infeasible_solution(kName);
  } else {
    budget = inst.k_minus;
  }
  ProfileSearch search(inst, notion, kind, work_limit);
  auto deleted = search.run(budget, derive_params(inst).w_r);
  if (!deleted) return infeasible_solution(kName);
  return make_feasible_solution(inst, std::move(*deleted), kName);
}

Solution zero_one_kplus_decide(const Instance& inst, Notion notion, BudgetKind kind,
                               long long work_limit) {
  static const char* kName = "zero_one_kplus";
  if (notion != Notion::EF) throw std::invalid_argument("zero_one_kplus_decide handles EF only");
  const DerivedParams params = derive_params(inst);
  if (!params.zero_one) throw std::invalid_argument("zero_one_kplus_decide requires 0/1 valuations");
  if (kind == BudgetKind::Count && inst.ell_plus != 0)
    throw std::invalid_argument("zero_one_kplus_decide (count) requires the number variant");
  if (kind == BudgetKind::Welfare && inst.k_minus != inst.m)
    throw std::invalid_argument("zero_one_kplus_decide (welfare) requires the welfare variant");

  // An agent without a surviving self-valued resource ends at utility zero,
  // so everything it values must go. Iterate until stable.
  std::vector<char> removed_agent(inst.n, 0);
  std::vector<char> dead(inst.m, 0);
  for (;;) {
    int doomed = -1;
    for (int a = 0; a < inst.n && doomed < 0; ++a) {
      if (removed_agent[a]) continue;
      bool happy = false;
      for (int r : inst.bundles[a])
        if (!dead[r] && inst.utilities[a][r] == 1) {
          happy = true;
          break;
        }
      if (!happy) doomed = a;
    }
    if (doomed < 0) break;
    removed_agent[doomed] = 1;
    for (int r = 0; r < inst.m; ++r)
      if (!dead[r] && inst.utilities[doomed][r] == 1) dead[r] = 1;
  }
  std::vector<int> forced = flags_to_indices(dead);
  const int alive = inst.m - static_cast<int>(forced.size());
  int survivors = 0;
  for (int a = 0; a < inst.n; ++a)
    if (!removed_agent[a]) ++survivors;

  long long kept_floor;  // resources or welfare that must remain
  if (kind == BudgetKind::Count) {
    if (static_cast<int>(forced.size()) > inst.k_minus) return infeasible_solution(kName);
    kept_floor = inst.k_plus();
  } else {
    kept_floor = inst.ell_plus;
  }

  if (kept_floor <= survivors) {
    // Keep exactly one self-valued resource per surviving agent.
    std::vector<char> keep(inst.m, 0);
    for (int a = 0; a < inst.n; ++a) {
      if (removed_agent[a]) continue;
      for (int r : inst.bundles[a])
        if (!dead[r] && inst.utilities[a][r] == 1) {
          keep[r] = 1;
          break;
        }
    }
    std::vector<int> deleted;
    for (int r = 0; r < inst.m; ++r)
      if (!keep[r]) deleted.push_back(r);
    if (kind == BudgetKind::Count && static_cast<int>(deleted.size()) > inst.k_minus)
      return infeasible_solution(kName);
    return make_feasible_solution(inst, std::move(deleted), kName);
  }

  // Too much must remain for the one-per-agent construction: hand the
  // reduced instance to the constraint search.
  RawInstance raw;
  raw.notion = Notion::EF;
  raw.utilities.assign(inst.n, {});
  std::vector<int> alive_index;
  for (int r = 0; r < inst.m; ++r) {
    if (dead[r]) continue;
    alive_index.push_back(r);
    raw.owner.push_back(inst.owner[r]);
    for (int a = 0; a < inst.n; ++a) raw.utilities[a].push_back(inst.utilities[a][r]);
  }
  raw.k_minus = kind == BudgetKind::Count
                    ? inst.k_minus - static_cast<int>(forced.size())
                    : alive;
  raw.ell_plus = inst.ell_plus;
  const Instance reduced = validate_instance(raw);
  const Solution sub = constraint_formulation_decide(reduced, Notion::EF, work_limit);
  if (!sub.feasible) return infeasible_solution(kName);
  std::vector<int> deleted = forced;
  for (int r : sub.deleted) deleted.push_back(alive_index[r]);
  return make_feasible_solution(inst, std::move(deleted), kName);
}

Solution ef1_remaining_bound_decide(const Instance& inst, BudgetKind kind,
                                    long long work_limit) {
  static const char* kName = "ef1_remaining_bound";
  if (inst.notion != Notion::EF1)
    throw std::invalid_argument("ef1_remaining_bound_decide handles EF1 only");
  WorkMeter meter{kName, work_limit};

  std::vector<char> pre(inst.m, 0);
  std::vector<int> eligible;  // resources that may stay
  long long bound;
  if (kind == BudgetKind::Count) {
    if (inst.ell_plus != 0)
      throw std::invalid_argument("ef1_remaining_bound_decide (count) requires the number variant");
    bound = inst.k_plus();
    for (int r = 0; r < inst.m; ++r) eligible.push_back(r);
  } else {
    if (inst.k_minus != inst.m)
      throw std::invalid_argument(
          "ef1_remaining_bound_decide (welfare) requires the welfare variant");
    bound = inst.ell_plus;
    for (int r = 0; r < inst.m; ++r) {
      if (inst.utilities[inst.owner[r]][r] > 0) {
        eligible.push_back(r);
      } else {
        pre[r] = 1;
      }
    }
  }
  std::vector<int> first_owned(inst.n, -1);
  int holders = 0;
  for (int r : eligible) {
    if (first_owned[inst.owner[r]] == -1) {
      first_owned[inst.owner[r]] = r;
      ++holders;
    }
  }

  if (bound <= holders) {
    // Singleton bundles are never envied up to one good.
    std::vector<char> keep(inst.m, 0);
    for (int a = 0; a < inst.n; ++a)
      if (first_owned[a] != -1) keep[first_owned[a]] = 1;
    std::vector<int> deleted;
    for (int r = 0; r < inst.m; ++r)
      if (!keep[r]) deleted.push_back(r);
    if (kind == BudgetKind::Count && static_cast<int>(deleted.size()) > inst.k_minus)
      return infeasible_solution(kName);
    return make_feasible_solution(inst, std::move(deleted), kName);
  }

  const int em = static_cast<int>(eligible.size());
  if (em > 60 ||
      std::ldexp(1.0, em) * (inst.n * inst.n + inst.m) > static_cast<double>(work_limit))
    throw CapabilityError("ef1_remaining_bound: enumeration exceeds the work limit");
  std::vector<char> flags(inst.m, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << em); ++mask) {
    meter.charge(inst.n * inst.n + inst.m);
    std::copy(pre.begin(), pre.end(), flags.begin());
    for (int i = 0; i < em; ++i)
      if (mask >> i & 1) flags[eligible[i]] = 1;
    if (kind == BudgetKind::Count &&
        static_cast<int>(std::popcount(mask)) > inst.k_minus)
      continue;
    Utility w = 0;
    if (fair_given_deleted(inst, flags, Notion::EF1, &w) && w >= inst.ell_plus)
      return make_feasible_solution(inst, flags_to_indices(flags), kName);
  }
  return infeasible_solution(kName);
}

namespace {

double pow_capped(double base, double exponent) {
  if (base <= 1.0) return 1.0;
  const double log_value = exponent * std::log2(base);
  if (log_value > 60) return 1e18;
  return std::exp2(log_value);
}

}  // namespace

std::pair<AlgorithmChoice, Solution> dispatch_solve(const Instance& inst,
                                                    const DispatchOptions& opts) {
  const DerivedParams p = derive_params(inst);
  const Utility total = inst.initial_welfare();
  const Utility ell_minus = total - inst.ell_plus;
  const double limit = static_cast<double>(opts.work_limit);
  const bool number_variant = inst.ell_plus == 0;
  const bool welfare_variant = inst.k_minus == inst.m;

  auto choice = [](std::string alg, std::string why, double cost) {
    return AlgorithmChoice{std::move(alg), std::move(why), cost};
  };

  if (inst.ell_plus > total) {
    Solution no = infeasible_solution("welfare_floor_precheck");
    return {choice("welfare_floor_precheck", "welfare floor exceeds the initial welfare",
                   static_cast<double>(inst.n)),
            no};
  }
  if (is_fair(inst, apply_deletion(inst, {}), inst.notion)) {
    return {choice("initial_allocation_fair", "initial allocation already satisfies the notion",
                   static_cast<double>(inst.n) * inst.n * p.d),
            make_feasible_solution(inst, {}, "initial_allocation_fair")};
  }

  if (p.identical) {
    if (inst.notion == Notion::EF1 && number_variant) {
      return {choice("ef1_greedy_number", "identical valuations, number variant",
                     static_cast<double>(inst.m) * 16),
              ef1_greedy_number(inst)};
    }
    if (inst.notion == Notion::EF1) {
      const double c_lp = pow_capped(static_cast<double>(inst.ell_plus) + 2, 4);
      const double c_lm = pow_capped(static_cast<double>(std::max<Utility>(ell_minus, 0)) + 2, 4);
      if (std::min(c_lp, c_lm) <= limit) {
        if (c_lp <= c_lm)
          return {choice("ef1_dg_by_ell_plus", "identical valuations, small welfare floor", c_lp),
                  ef1_dg_by_ell_plus(inst)};
        return {choice("ef1_dg_by_ell_minus", "identical valuations, small deleted welfare", c_lm),
                ef1_dg_by_ell_minus(inst)};
      }
    } else {
      const double c_ef =
          pow_capped(static_cast<double>(std::max<Utility>(ell_minus, 0)) + 2, 3) * inst.n;
      if (c_ef <= limit)
        return {choice("ef_dg_by_ell_minus", "identical valuations, small deleted welfare", c_ef),
                ef_dg_by_ell_minus(inst)};
    }
  }

  const int d_prime = std::min(p.d, p.w_a);
  if (welfare_variant) {
    const double c_fp = pow_capped(2.0, 2.0 * d_prime) * d_prime * inst.n * inst.n + inst.m;
    if (c_fp <= limit)
      return {choice("welfare_fixed_point", "welfare variant with small min(d, w_a)", c_fp),
              welfare_fixed_point(inst, inst.notion)};
  }

  double c_constraint =
      pow_capped(static_cast<double>(inst.n) * inst.n * p.u_star + 2,
                 static_cast<double>(inst.n) * inst.n) *
      inst.m * inst.m;
  if (inst.notion == Notion::EF1)
    c_constraint = std::min(
        1e18, c_constraint * pow_capped(static_cast<double>(p.u_star) + 2,
                                        static_cast<double>(inst.n) * (inst.n - 1)));
  if (c_constraint <= limit)
    return {choice("constraint_formulation", "small n^2 * u_star", c_constraint),
            constraint_formulation_decide(inst, inst.notion, opts.work_limit)};

  const double c_branch_count =
      pow_capped(std::max(1, d_prime), static_cast<double>(inst.k_minus)) * inst.n * p.d;
  if (c_branch_count <= limit)
    return {choice("branch_count", "small k_minus with small min(d, w_a)", c_branch_count),
            branch_decide(inst, inst.notion, BudgetKind::Count)};
  if (welfare_variant) {
    const double c_branch_welfare =
        pow_capped(std::max(1, d_prime), static_cast<double>(std::max<Utility>(ell_minus, 0))) *
        inst.n * p.d;
    if (c_branch_welfare <= limit)
      return {choice("branch_welfare", "welfare variant, small deleted welfare", c_branch_welfare),
              branch_decide(inst, inst.notion, BudgetKind::Welfare)};
  }

  {
    const long long budget = welfare_variant && !number_variant
                                 ? static_cast<long long>(std::max<Utility>(ell_minus, 0))
                                 : inst.k_minus;
    const double exponent =
        static_cast<double>(budget) *
        std::min<double>(static_cast<double>(budget) * (p.w_r + 1), inst.n);
    const double c_profile =
        pow_capped(static_cast<double>(p.u_star) + 1, exponent) * inst.m * inst.n;
    if (c_profile <= limit) {
      const BudgetKind kind =
          welfare_variant && !number_variant ? BudgetKind::Welfare : BudgetKind::Count;
      if (kind == BudgetKind::Count || welfare_variant)
        return {choice("profile_guess", "small budget with small w_r and u_star", c_profile),
                profile_guess_decide(inst, inst.notion, kind, opts.work_limit)};
    }
  }

  if (p.zero_one && inst.notion == Notion::EF && (number_variant || welfare_variant)) {
    const BudgetKind kind = number_variant ? BudgetKind::Count : BudgetKind::Welfare;
    const long long bound = number_variant ? inst.k_plus() : inst.ell_plus;
    const double c_zero_one = bound <= inst.n ? static_cast<double>(inst.m) * inst.n
                                              : c_constraint;
    if (c_zero_one <= limit)
      return {choice("zero_one_kplus", "0/1 valuations with a small remaining bound", c_zero_one),
              zero_one_kplus_decide(inst, Notion::EF, kind, opts.work_limit)};
  }

  if (inst.notion == Notion::EF1 && (number_variant || welfare_variant)) {
    const BudgetKind kind = number_variant ? BudgetKind::Count : BudgetKind::Welfare;
    int holders = 0;
    std::vector<char> seen_holder(inst.n, 0);
    int eligible = 0;
    for (int r = 0; r < inst.m; ++r) {
      if (kind == BudgetKind::Welfare && inst.utilities[inst.owner[r]][r] == 0) continue;
      ++eligible;
      if (!seen_holder[inst.owner[r]]) {
        seen_holder[inst.owner[r]] = 1;
        ++holders;
      }
    }
    const long long bound = number_variant ? inst.k_plus() : inst.ell_plus;
    const double c_bound = bound <= holders
                               ? static_cast<double>(inst.m)
                               : pow_capped(2.0, eligible) * (inst.n * inst.n + inst.m);
    if (c_bound <= limit)
      return {choice("ef1_remaining_bound", "small remaining bound for EF1", c_bound),
              ef1_remaining_bound_decide(inst, kind, opts.work_limit)};
  }

  {
    int support = 0;
    for (int r = 0; r < inst.m; ++r) {
      bool valued = false;
      for (int a = 0; a < inst.n && !valued; ++a) valued = inst.utilities[a][r] > 0;
      if (valued) ++support;
    }
    const double c_support = pow_capped(2.0, support) * (inst.n * inst.n + inst.m);
    if (c_support <= limit)
      return {choice("enumerate_support", "few resources valued non-zero", c_support),
              enumerate_decide(inst, inst.notion, EnumerationStrategy::BySupport,
                               opts.work_limit)};
  }
  {
    const double c_km =
        combinations_up_to(inst.m, inst.k_minus) * (inst.n * inst.n + inst.m);
    if (c_km <= limit)
      return {choice("enumerate_kminus", "few deletion subsets", c_km),
              enumerate_decide(inst, inst.notion, EnumerationStrategy::ByKMinus,
                               opts.work_limit)};
  }
  if (welfare_variant) {
    const double c_lm =
        combinations_up_to(inst.m, std::max<Utility>(ell_minus, 0)) *
        (inst.n * inst.n + inst.m);
    if (c_lm <= limit)
      return {choice("enumerate_lminus", "welfare variant, few positive deletions", c_lm),
              enumerate_decide(inst, inst.notion, EnumerationStrategy::ByLMinus,
                               opts.work_limit)};
  }
  {
    int positives = 0;
    int max_zeros = 0;
    std::vector<int> zero_count(inst.n, 0);
    for (int a = 0; a < inst.n; ++a) {
      for (int r : inst.bundles[a])
        if (inst.utilities[a][r] > 0) {
          ++positives;
        } else {
          ++zero_count[a];
        }
      max_zeros = std::max(max_zeros, zero_count[a]);
    }
    const double c_dlm = combinations_up_to(positives, std::max<Utility>(ell_minus, 0)) *
                         inst.n * pow_capped(2.0, max_zeros) * p.d;
    if (ell_minus >= 0 && c_dlm <= limit)
      return {choice("enumerate_d_lminus", "few positively valued deletions with small bundles",
                     c_dlm),
              enumerate_decide(inst, inst.notion, EnumerationStrategy::ByDLMinus,
                               opts.work_limit)};
  }

  if (inst.m <= opts.oracle_cap) {
    const double c_oracle =
        pow_capped(2.0, inst.m) * (static_cast<double>(inst.n) * inst.m + inst.n * inst.n);
    OracleOptions oracle_opts;
    oracle_opts.cap = opts.oracle_cap;
    return {choice("oracle", "within the exhaustive-search cap", c_oracle),
            oracle_decide(inst, oracle_opts)};
  }

  std::ostringstream os;
  os << "no exact algorithm within the work limit (n=" << inst.n << ", m=" << inst.m
     << ", k_minus=" << inst.k_minus << ", ell_plus=" << inst.ell_plus << ")";
  throw CapabilityError(os.str());
}

}  // namespace efdg
