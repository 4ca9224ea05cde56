#pragma once

#include <span>

#include "efdg/model.hpp"

namespace efdg {

enum class BudgetKind { Count, Welfare };
enum class EnumerationStrategy { ByKMinus, ByLMinus, BySupport, ByDLMinus };

inline constexpr long long kDefaultWorkLimit = 100'000'000;

struct FixedPointStats {
  long long iterations = 0;
};

/// Exact solver for the welfare variant (k_minus = m): drop owner-zero
/// resources, then repeatedly hand the lowest envied agent the highest-value
/// subset of its pruned bundle that nobody envies (up to one good). The
/// result dominates every fair sub-allocation agent by agent, so its
/// welfare is optimal.
Solution welfare_fixed_point(const Instance& inst, Notion notion,
                             FixedPointStats* stats = nullptr);

/// Highest-value subset of `candidate` for `agent` such that no other agent
/// envies `agent` (up to one good) when the others hold `current_kept`.
/// The empty subset always qualifies. Exhaustive over 2^|candidate|.
std::vector<int> inner_best_subset(const Instance& inst, Notion notion, int agent,
                                   std::span<const int> candidate,
                                   const std::vector<std::vector<int>>& current_kept);

/// Exact feasibility search over binary keep-variables with the pairwise
/// no-envy constraints, the welfare floor, and the count floor. For EF1 an
/// outer pass guesses, per ordered pair, the value of one resource that
/// must survive in the envied bundle (or that the bundle empties out).
Solution constraint_formulation_decide(const Instance& inst, Notion notion,
                                       long long work_limit = kDefaultWorkLimit);

struct BranchStats {
  long long nodes = 0;
  long long leaves = 0;
};

/// Search tree: while some envy (up to one good) pair exists, branch over
/// deleting each resource of the envied bundle that the envier values.
/// Count budgets work for the general problem; welfare budgets require the
/// welfare variant because owner-zero resources are dropped up front.
Solution branch_decide(const Instance& inst, Notion notion, BudgetKind kind,
                       BranchStats* stats = nullptr);

Solution enumerate_decide(const Instance& inst, Notion notion, EnumerationStrategy strategy,
                          long long work_limit = kDefaultWorkLimit);

/// Deterministic realization of the utility-profile guessing algorithm:
/// track the touched agents, guess the profile of every deleted resource
/// restricted to them, and only at the end bind profiles to concrete
/// resources.
Solution profile_guess_decide(const Instance& inst, Notion notion, BudgetKind kind,
                              long long work_limit = kDefaultWorkLimit);

/// 0/1-valuation EF solver driven by the remaining count (number variant)
/// or remaining welfare (welfare variant): strip agents that cannot end up
/// happy, then either keep one valued resource per surviving agent or fall
/// back to the constraint search on the reduced instance.
Solution zero_one_kplus_decide(const Instance& inst, Notion notion, BudgetKind kind,
                               long long work_limit = kDefaultWorkLimit);

/// EF1 solver driven by the remaining count/welfare: keeping one resource
/// per holding agent is enough whenever the bound is at most the number of
/// holders; otherwise the instance is small enough to enumerate.
Solution ef1_remaining_bound_decide(const Instance& inst, BudgetKind kind,
                                    long long work_limit = kDefaultWorkLimit);

struct AlgorithmChoice {
  std::string algorithm;
  std::string rationale;
  double cost_estimate = 0.0;
};

struct DispatchOptions {
  long long work_limit = kDefaultWorkLimit;
  int oracle_cap = 22;
};

/// Routes the instance to the cheapest applicable exact algorithm based on
/// the derived parameters. Throws CapabilityError when every guard fails;
/// never returns a wrong answer.
std::pair<AlgorithmChoice, Solution> dispatch_solve(const Instance& inst,
                                                    const DispatchOptions& opts = {});

}  // namespace efdg
