#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace efdg {

/// Utilities and welfare sums are carried in 64-bit signed integers.
/// validate_instance bounds the total valuation mass so no sum computed
/// anywhere in the library can overflow.
using Utility = std::int64_t;

inline constexpr Utility kWelfareLimit = Utility{1} << 62;

enum class Notion { EF, EF1 };

std::string to_string(Notion notion);
std::optional<Notion> notion_from_string(const std::string& text);

/// Raised when an instance exceeds the size guard of the requested
/// algorithm (exhaustive oracle cap, enumeration work limit, ...).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Untyped instance description as it arrives from a parser or a
/// generator, before invariants have been checked.
struct RawInstance {
  std::vector<std::vector<Utility>> utilities;  // n rows, m columns
  std::vector<int> owner;                       // resource -> owning agent
  std::optional<int> k_minus;                   // absent: m (welfare variant)
  std::optional<Utility> ell_plus;              // absent: 0 (number variant)
  Notion notion = Notion::EF1;
  std::vector<std::string> agent_names;         // optional, default a0..a{n-1}
  std::vector<std::string> resource_names;      // optional, default r0..r{m-1}
};

/// A validated problem instance. Immutable after construction; every
/// operation on it is pure.
struct Instance {
  int n = 0;
  int m = 0;
  std::vector<std::vector<Utility>> utilities;
  std::vector<int> owner;
  std::vector<std::vector<int>> bundles;  // per agent, ascending resource indices
  int k_minus = 0;
  Utility ell_plus = 0;
  Notion notion = Notion::EF1;
  std::vector<std::string> agent_names;
  std::vector<std::string> resource_names;

  Utility value(int agent, int resource) const { return utilities[agent][resource]; }
  Utility initial_welfare() const;
  int k_plus() const { return m - k_minus; }
};

/// Checks every structural invariant (complete ownership, non-negative
/// utilities, budget ranges, welfare bound) and returns the typed
/// instance. Throws std::invalid_argument naming the first violation.
Instance validate_instance(const RawInstance& raw);

struct DerivedParams {
  int k_plus = 0;
  Utility ell_minus = 0;
  int d = 0;        // max initial bundle size
  int w_a = 0;      // max resources one agent values non-zero
  int w_r = 0;      // max agents valuing one resource non-zero
  Utility u_star = 0;
  bool identical = false;
  bool zero_one = false;
};

DerivedParams derive_params(const Instance& inst);

/// A sub-allocation of the initial allocation: kept[a] is a subset of
/// inst.bundles[a], and kept/deleted partition the resource set.
struct Allocation {
  std::vector<std::vector<int>> kept;  // per agent, ascending
  std::vector<int> deleted;            // ascending
};

Allocation apply_deletion(const Instance& inst, std::span<const int> deleted);

Utility bundle_value(const Instance& inst, int viewer, std::span<const int> bundle);

/// Strict envy: a prefers b's current bundle to its own.
bool envies(const Instance& inst, const Allocation& alloc, int a, int b);

/// Envy up to one good: b's bundle is non-empty and remains preferred
/// after removing any single resource from it. An empty bundle is never
/// envied up to one good.
bool envies_up_to_one(const Instance& inst, const Allocation& alloc, int a, int b);

bool is_fair(const Instance& inst, const Allocation& alloc, Notion notion);

Utility welfare(const Instance& inst, const Allocation& alloc);

struct Solution {
  bool feasible = false;
  std::vector<int> deleted;  // ascending, meaningful only when feasible
  int deleted_count = 0;
  Utility remaining_welfare = 0;
  std::string algorithm;
};

Solution infeasible_solution(std::string algorithm);
Solution make_feasible_solution(const Instance& inst, std::vector<int> deleted,
                                std::string algorithm);

struct VerificationReport {
  bool fairness_ok = false;
  bool count_ok = false;
  bool welfare_ok = false;
  std::vector<std::pair<int, int>> envy_pairs;  // ordered (envier, envied)
  bool ok() const { return fairness_ok && count_ok && welfare_ok; }
};

/// Independently rechecks a claimed-feasible solution: count budget,
/// welfare floor, and the fairness notion, listing every violating
/// ordered pair.
VerificationReport verify_solution(const Instance& inst, const Solution& sol);

}  // namespace efdg
