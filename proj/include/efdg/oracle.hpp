#pragma once

#include <optional>

#include "efdg/model.hpp"

namespace efdg {

struct OracleOptions {
  int cap = 22;  // refuse instances with more resources than this
};

/// Exhaustive ground truth: enumerates all 2^m deletion sets. The witness
/// minimizes the deletion count, then maximizes remaining welfare, then is
/// the lexicographically smallest deleted index set. Throws CapabilityError
/// when m exceeds the cap.
Solution oracle_decide(const Instance& inst, const OracleOptions& opts = {});

/// Minimum deletion count over all fair sub-allocations meeting the welfare
/// floor, ignoring k_minus. Absent when no fair sub-allocation meets it.
std::optional<int> oracle_min_deletions(const Instance& inst, Notion notion,
                                        const OracleOptions& opts = {});

struct WelfareWitness {
  Utility welfare = 0;
  std::vector<int> deleted;
};

/// Maximum remaining welfare over all fair sub-allocations (both budgets
/// ignored). Always defined: the empty allocation is fair.
WelfareWitness oracle_max_welfare(const Instance& inst, Notion notion,
                                  const OracleOptions& opts = {});

/// Per-agent maximum own-bundle utility over all fair sub-allocations.
std::vector<Utility> oracle_agent_utility_bounds(const Instance& inst, Notion notion,
                                                 const OracleOptions& opts = {});

}  // namespace efdg
