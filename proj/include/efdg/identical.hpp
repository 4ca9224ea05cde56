#pragma once

#include "efdg/model.hpp"

namespace efdg {

/// Preprocessed view of an identical-valuation instance. Resources valued
/// zero by everyone are stripped and always kept: that weakly relaxes the
/// count budget and never changes fairness, so the stripped instance is
/// equivalent with k_minus clamped to the stripped resource count.
struct IdenticalView {
  std::vector<Utility> values;            // per view resource, all positive
  std::vector<int> to_original;           // view index -> original resource
  std::vector<int> zero_resources;        // original indices, always kept
  std::vector<std::vector<int>> bundles;  // per agent, view indices ascending
  std::vector<Utility> bundle_values;
  Utility u0 = 0;                         // minimum initial bundle value
  std::vector<int> a0;                    // agents attaining u0
  std::vector<int> a_star;                // agents envied (per notion) by a0
  int k_minus = 0;                        // clamped count budget
  int m = 0;                              // stripped resource count
};

IdenticalView build_identical_view(const Instance& inst);

/// Greedy exact solver for the number variant under EF1: each envied
/// agent drops its most valuable resources until the least-happy agents
/// no longer envy it up to one good. The produced deletion count is the
/// global minimum.
Solution ef1_greedy_number(const Instance& inst);

/// Restores deleted resources to current-minimum agents until every
/// least-happy agent holds its full initial bundle. Keeps feasibility,
/// never increases the deletion count, never decreases welfare.
Solution normalize_ef1_solution(const Instance& inst, const Solution& sol);

/// Exact EF1 solver parameterized by the welfare floor: per-agent
/// candidate kept-sets via maximum-size subset sums, combined through a
/// multiple-choice knapsack over (cardinality, utility) pairs.
Solution ef1_dg_by_ell_plus(const Instance& inst);

/// Exact EF1 solver parameterized by the deleted welfare: per-agent
/// candidate deletion sets via minimum-size subset sums, combined through
/// a multiple-choice knapsack.
Solution ef1_dg_by_ell_minus(const Instance& inst);

/// Exact EF solver parameterized by the deleted welfare. Under identical
/// valuations an allocation is envy-free exactly when all bundle values
/// are equal, so the solver sweeps the common target value and extracts
/// minimum-cardinality deletions per agent.
Solution ef_dg_by_ell_minus(const Instance& inst);

}  // namespace efdg
