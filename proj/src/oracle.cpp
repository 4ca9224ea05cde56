#include "efdg/oracle.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace efdg {

namespace {

using Mask = std::uint64_t;

void check_cap(const Instance& inst, const OracleOptions& opts) {
  if (opts.cap < 0 || opts.cap > 30)
    throw std::invalid_argument("oracle cap must lie in [0, 30]");
  if (inst.m > opts.cap) {
    std::ostringstream os;
    os << "oracle cap exceeded: " << inst.m << " resources, cap " << opts.cap;
    throw CapabilityError(os.str());
  }
}

// Evaluates one deletion mask (bit r set = resource r deleted) in a single
// sweep over the resources. Buffers are reused across masks.
class MaskEvaluator {
 public:
  explicit MaskEvaluator(const Instance& inst)
      : inst_(inst),
        n_(inst.n),
        own_(inst.n),
        kept_count_(inst.n),
        seen_(static_cast<size_t>(inst.n) * inst.n),
        seen_max_(static_cast<size_t>(inst.n) * inst.n) {}

  void load(Mask deleted) {
    std::fill(own_.begin(), own_.end(), 0);
    std::fill(kept_count_.begin(), kept_count_.end(), 0);
    std::fill(seen_.begin(), seen_.end(), 0);
    std::fill(seen_max_.begin(), seen_max_.end(), 0);
    welfare_ = 0;
    for (int r = 0; r < inst_.m; ++r) {
      if (deleted >> r & 1) continue;
      const int b = inst_.owner[r];
      ++kept_count_[b];
      for (int a = 0; a < n_; ++a) {
        const Utility u = inst_.utilities[a][r];
        seen_[static_cast<size_t>(a) * n_ + b] += u;
        auto& mx = seen_max_[static_cast<size_t>(a) * n_ + b];
        if (u > mx) mx = u;
      }
    }
    for (int a = 0; a < n_; ++a) {
      own_[a] = seen_[static_cast<size_t>(a) * n_ + a];
      welfare_ += own_[a];
    }
  }

  bool fair(Notion notion) const {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        if (a == b) continue;
        const size_t idx = static_cast<size_t>(a) * n_ + b;
        if (notion == Notion::EF) {
          if (seen_[idx] > own_[a]) return false;
        } else {
          if (kept_count_[b] > 0 && seen_[idx] - seen_max_[idx] > own_[a]) return false;
        }
      }
    return true;
  }

  Utility welfare() const { return welfare_; }
  Utility own(int a) const { return own_[a]; }

 private:
  const Instance& inst_;
  int n_;
  Utility welfare_ = 0;
  std::vector<Utility> own_;
  std::vector<int> kept_count_;
  std::vector<Utility> seen_;
  std::vector<Utility> seen_max_;
};

std::vector<int> mask_to_indices(Mask deleted, int m) {
  std::vector<int> out;
  for (int r = 0; r < m; ++r)
    if (deleted >> r & 1) out.push_back(r);
  return out;
}

// Among equal-sized sets, the one owning the lowest differing index is
// lexicographically smaller as a sorted index list.
bool lex_smaller(Mask a, Mask b) {
  if (a == b) return false;
  const Mask diff = a ^ b;
  return a & (diff & -diff);
}

}  // namespace

Solution oracle_decide(const Instance& inst, const OracleOptions& opts) {
  check_cap(inst, opts);
  MaskEvaluator eval(inst);
  bool found = false;
  Mask best_mask = 0;
  int best_count = 0;
  Utility best_welfare = 0;
  const Mask end = Mask{1} << inst.m;
  for (Mask deleted = 0; deleted < end; ++deleted) {
    const int count = std::popcount(deleted);
    if (count > inst.k_minus) continue;
    eval.load(deleted);
    if (eval.welfare() < inst.ell_plus) continue;
    if (!eval.fair(inst.notion)) continue;
    bool better = false;
    if (!found) {
      better = true;
    } else if (count != best_count) {
      better = count < best_count;
    } else if (eval.welfare() != best_welfare) {
      better = eval.welfare() > best_welfare;
    } else {
      better = lex_smaller(deleted, best_mask);
    }
    if (better) {
      found = true;
      best_mask = deleted;
      best_count = count;
      best_welfare = eval.welfare();
    }
  }
  if (!found) return infeasible_solution("oracle");
  return make_feasible_solution(inst, mask_to_indices(best_mask, inst.m), "oracle");
}

std::optional<int> oracle_min_deletions(const Instance& inst, Notion notion,
                                        const OracleOptions& opts) {
  check_cap(inst, opts);
  MaskEvaluator eval(inst);
  std::optional<int> best;
  const Mask end = Mask{1} << inst.m;
  for (Mask deleted = 0; deleted < end; ++deleted) {
    const int count = std::popcount(deleted);
    if (best && count >= *best) continue;
    eval.load(deleted);
    if (eval.welfare() < inst.ell_plus) continue;
    if (eval.fair(notion)) best = count;
  }
  return best;
}

WelfareWitness oracle_max_welfare(const Instance& inst, Notion notion,
                                  const OracleOptions& opts) {
  check_cap(inst, opts);
  MaskEvaluator eval(inst);
  bool found = false;
  WelfareWitness best;
  Mask best_mask = 0;
  int best_count = 0;
  const Mask end = Mask{1} << inst.m;
  for (Mask deleted = 0; deleted < end; ++deleted) {
    eval.load(deleted);
    if (!eval.fair(notion)) continue;
    const int count = std::popcount(deleted);
    bool better = false;
    if (!found) {
      better = true;
    } else if (eval.welfare() != best.welfare) {
      better = eval.welfare() > best.welfare;
    } else if (count != best_count) {
      better = count < best_count;
    } else {
      better = lex_smaller(deleted, best_mask);
    }
    if (better) {
      found = true;
      best.welfare = eval.welfare();
      best_mask = deleted;
      best_count = count;
    }
  }
  best.deleted = mask_to_indices(best_mask, inst.m);
  return best;
}

std::vector<Utility> oracle_agent_utility_bounds(const Instance& inst, Notion notion,
                                                 const OracleOptions& opts) {
  check_cap(inst, opts);
  MaskEvaluator eval(inst);
  std::vector<Utility> bounds(inst.n, 0);
  const Mask end = Mask{1} << inst.m;
  for (Mask deleted = 0; deleted < end; ++deleted) {
    eval.load(deleted);
    if (!eval.fair(notion)) continue;
    for (int a = 0; a < inst.n; ++a) bounds[a] = std::max(bounds[a], eval.own(a));
  }
  return bounds;
}

}  // namespace efdg
