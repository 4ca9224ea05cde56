#include "efdg/model.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace efdg {

std::string to_string(Notion notion) {
  return notion == Notion::EF ? "EF" : "EF1";
}

std::optional<Notion> notion_from_string(const std::string& text) {
  if (text == "EF") return Notion::EF;
  if (text == "EF1") return Notion::EF1;
  return std::nullopt;
}

Utility Instance::initial_welfare() const {
  Utility total = 0;
  for (int a = 0; a < n; ++a)
    for (int r : bundles[a]) total += utilities[a][r];
  return total;
}

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument(message);
}

}  // namespace

Instance validate_instance(const RawInstance& raw) {
  const int n = static_cast<int>(raw.utilities.size());
  if (n == 0) fail("instance has no agents");
  const int m = static_cast<int>(raw.owner.size());
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(raw.utilities[a].size()) != m) {
      std::ostringstream os;
      os << "dimension mismatch: utility row " << a << " has "
         << raw.utilities[a].size() << " entries, expected " << m;
      fail(os.str());
    }
  }
  Utility mass = 0;
  for (int a = 0; a < n; ++a) {
    for (int r = 0; r < m; ++r) {
      const Utility u = raw.utilities[a][r];
      if (u < 0) {
        std::ostringstream os;
        os << "negative utility at agent " << a << ", resource " << r;
        fail(os.str());
      }
      if (mass > kWelfareLimit - u) fail("total valuation mass exceeds 2^62");
      mass += u;
    }
  }
  for (int r = 0; r < m; ++r) {
    if (raw.owner[r] < 0 || raw.owner[r] >= n) {
      std::ostringstream os;
      os << "resource " << r << " owned by out-of-range agent " << raw.owner[r];
      fail(os.str());
    }
  }
  const int k_minus = raw.k_minus.value_or(m);
  if (k_minus < 0) fail("k_minus is negative");
  if (k_minus > m) fail("k_minus exceeds the resource count");
  const Utility ell_plus = raw.ell_plus.value_or(0);
  if (ell_plus < 0) fail("ell_plus is negative");

  Instance inst;
  inst.n = n;
  inst.m = m;
  inst.utilities = raw.utilities;
  inst.owner = raw.owner;
  inst.k_minus = k_minus;
  inst.ell_plus = ell_plus;
  inst.notion = raw.notion;
  inst.bundles.assign(n, {});
  for (int r = 0; r < m; ++r) inst.bundles[raw.owner[r]].push_back(r);

  if (!raw.agent_names.empty()) {
    if (static_cast<int>(raw.agent_names.size()) != n) fail("agent name count mismatch");
    inst.agent_names = raw.agent_names;
  } else {
    for (int a = 0; a < n; ++a) inst.agent_names.push_back("a" + std::to_string(a));
  }
  if (!raw.resource_names.empty()) {
    if (static_cast<int>(raw.resource_names.size()) != m) fail("resource name count mismatch");
    inst.resource_names = raw.resource_names;
  } else {
    for (int r = 0; r < m; ++r) inst.resource_names.push_back("r" + std::to_string(r));
  }
  return inst;
}

DerivedParams derive_params(const Instance& inst) {
  DerivedParams p;
  p.k_plus = inst.m - inst.k_minus;
  p.ell_minus = inst.initial_welfare() - inst.ell_plus;
  p.zero_one = true;
  p.identical = true;
  for (int a = 0; a < inst.n; ++a) {
    p.d = std::max(p.d, static_cast<int>(inst.bundles[a].size()));
    int nonzero = 0;
    for (int r = 0; r < inst.m; ++r) {
      const Utility u = inst.utilities[a][r];
      if (u > 0) ++nonzero;
      if (u > 1) p.zero_one = false;
      p.u_star = std::max(p.u_star, u);
      if (inst.utilities[a][r] != inst.utilities[0][r]) p.identical = false;
    }
    p.w_a = std::max(p.w_a, nonzero);
  }
  for (int r = 0; r < inst.m; ++r) {
    int valuers = 0;
    for (int a = 0; a < inst.n; ++a)
      if (inst.utilities[a][r] > 0) ++valuers;
    p.w_r = std::max(p.w_r, valuers);
  }
  return p;
}

Allocation apply_deletion(const Instance& inst, std::span<const int> deleted) {
  std::vector<char> gone(inst.m, 0);
  for (int r : deleted) {
    if (r < 0 || r >= inst.m) fail("deleted resource index out of range");
    gone[r] = 1;
  }
  Allocation alloc;
  alloc.kept.assign(inst.n, {});
  for (int a = 0; a < inst.n; ++a)
    for (int r : inst.bundles[a])
      if (!gone[r]) alloc.kept[a].push_back(r);
  for (int r = 0; r < inst.m; ++r)
    if (gone[r]) alloc.deleted.push_back(r);
  return alloc;
}

Utility bundle_value(const Instance& inst, int viewer, std::span<const int> bundle) {
  Utility total = 0;
  for (int r : bundle) total += inst.utilities[viewer][r];
  return total;
}

bool envies(const Instance& inst, const Allocation& alloc, int a, int b) {
  return bundle_value(inst, a, alloc.kept[b]) > bundle_value(inst, a, alloc.kept[a]);
}

bool envies_up_to_one(const Instance& inst, const Allocation& alloc, int a, int b) {
  const auto& theirs = alloc.kept[b];
  if (theirs.empty()) return false;
  Utility sum = 0;
  Utility best = 0;
  for (int r : theirs) {
    const Utility u = inst.utilities[a][r];
    sum += u;
    best = std::max(best, u);
  }
  return sum - best > bundle_value(inst, a, alloc.kept[a]);
}

bool is_fair(const Instance& inst, const Allocation& alloc, Notion notion) {
  for (int a = 0; a < inst.n; ++a)
    for (int b = 0; b < inst.n; ++b) {
      if (a == b) continue;
      const bool bad = notion == Notion::EF ? envies(inst, alloc, a, b)
                                            : envies_up_to_one(inst, alloc, a, b);
      if (bad) return false;
    }
  return true;
}

Utility welfare(const Instance& inst, const Allocation& alloc) {
  Utility total = 0;
  for (int a = 0; a < inst.n; ++a) total += bundle_value(inst, a, alloc.kept[a]);
  return total;
}

Solution infeasible_solution(std::string algorithm) {
  Solution sol;
  sol.feasible = false;
  sol.algorithm = std::move(algorithm);
  return sol;
}

Solution make_feasible_solution(const Instance& inst, std::vector<int> deleted,
                                std::string algorithm) {
  std::sort(deleted.begin(), deleted.end());
  deleted.erase(std::unique(deleted.begin(), deleted.end()), deleted.end());
  Solution sol;
  sol.feasible = true;
  sol.deleted = std::move(deleted);
  sol.deleted_count = static_cast<int>(sol.deleted.size());
  sol.remaining_welfare = welfare(inst, apply_deletion(inst, sol.deleted));
  sol.algorithm = std::move(algorithm);
  return sol;
}

VerificationReport verify_solution(const Instance& inst, const Solution& sol) {
  if (!sol.feasible) fail("verify_solution requires a feasible solution");
  const Allocation alloc = apply_deletion(inst, sol.deleted);
  VerificationReport report;
  report.count_ok = static_cast<int>(alloc.deleted.size()) <= inst.k_minus;
  report.welfare_ok = welfare(inst, alloc) >= inst.ell_plus;

  // One pass per kept resource accumulates every viewer's seen value and
  // seen maximum per owner, so verification stays near-linear even on the
  // large benchmark instances.
  std::vector<Utility> own(inst.n, 0);
  std::vector<Utility> seen(static_cast<size_t>(inst.n) * inst.n, 0);
  std::vector<Utility> seen_max(static_cast<size_t>(inst.n) * inst.n, 0);
  std::vector<int> kept_count(inst.n, 0);
  for (int b = 0; b < inst.n; ++b) {
    for (int r : alloc.kept[b]) {
      ++kept_count[b];
      for (int a = 0; a < inst.n; ++a) {
        const Utility u = inst.utilities[a][r];
        seen[static_cast<size_t>(a) * inst.n + b] += u;
        auto& mx = seen_max[static_cast<size_t>(a) * inst.n + b];
        mx = std::max(mx, u);
      }
    }
    own[b] = seen[static_cast<size_t>(b) * inst.n + b];
  }
  for (int a = 0; a < inst.n; ++a)
    for (int b = 0; b < inst.n; ++b) {
      if (a == b) continue;
      const size_t idx = static_cast<size_t>(a) * inst.n + b;
      bool bad;
      if (inst.notion == Notion::EF) {
        bad = seen[idx] > own[a];
      } else {
        bad = kept_count[b] > 0 && seen[idx] - seen_max[idx] > own[a];
      }
      if (bad) report.envy_pairs.emplace_back(a, b);
    }
  report.fairness_ok = report.envy_pairs.empty();
  return report;
}

}  // namespace efdg
