#include <doctest.h>

#include <cmath>
#include <random>

#include "efdg/general.hpp"
#include "efdg/model.hpp"
#include "efdg/oracle.hpp"
#include "support/random_instances.hpp"

using namespace efdg;
using efdg::testing::identical_from_bundles;
using efdg::testing::random_instance;
using efdg::testing::random_sparse_instance;
using efdg::testing::random_zero_one_instance;
using efdg::testing::with_budgets;

namespace {

Instance asymmetric_pair() {
  RawInstance raw;
  raw.utilities = {{1, 0}, {2, 1}};
  raw.owner = {0, 1};
  raw.notion = Notion::EF;
  return validate_instance(raw);
}

void check_against_oracle(const Instance& inst, const Solution& sol) {
  CHECK(sol.feasible == oracle_decide(inst).feasible);
  if (sol.feasible) CHECK(verify_solution(inst, sol).ok());
}

}  // namespace

TEST_CASE("welfare fixed point on the worked examples") {
  SUBCASE("fair start keeps its welfare") {
    const Instance inst = identical_from_bundles({{2}, {2}}, Notion::EF, -1, 0);
    const Solution sol = welfare_fixed_point(inst, Notion::EF);
    REQUIRE(sol.feasible);
    CHECK(sol.remaining_welfare == 4);
    CHECK(sol.deleted.empty());
  }
  SUBCASE("the asymmetric pair must drop the contested resource") {
    const Instance inst = asymmetric_pair();
    const Solution sol = welfare_fixed_point(inst, Notion::EF);
    REQUIRE(sol.feasible);
    CHECK(sol.remaining_welfare == 1);
    CHECK(sol.deleted == std::vector<int>{0});
  }
  SUBCASE("requires the welfare variant") {
    const Instance inst = with_budgets(asymmetric_pair(), 1, 0);
    CHECK_THROWS_AS(welfare_fixed_point(inst, Notion::EF), std::invalid_argument);
  }
}

TEST_CASE("fixed point reaches every agent's utility bound") {
  std::mt19937 rng(79);
  for (int trial = 0; trial < 150; ++trial) {
    const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
    const Instance inst = random_instance(rng, 2 + trial % 3, 4 + trial % 6, 4, notion, -1, 0);
    FixedPointStats stats;
    const Solution sol = welfare_fixed_point(inst, notion, &stats);
    REQUIRE(sol.feasible);
    CHECK(verify_solution(inst, sol).ok());
    CHECK(sol.remaining_welfare == oracle_max_welfare(inst, notion).welfare);

    const auto bounds = oracle_agent_utility_bounds(inst, notion);
    const Allocation alloc = apply_deletion(inst, sol.deleted);
    long long step_budget = 0;
    for (int a = 0; a < inst.n; ++a) {
      CHECK(bundle_value(inst, a, alloc.kept[a]) == bounds[a]);
      int positive = 0;
      for (int r : inst.bundles[a])
        if (inst.utilities[a][r] > 0) ++positive;
      step_budget += 1LL << positive;
    }
    CHECK(stats.iterations <= step_budget);
  }
}

TEST_CASE("inner_best_subset equals direct enumeration") {
  std::mt19937 rng(83);
  for (int trial = 0; trial < 150; ++trial) {
    const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
    const Instance inst = random_instance(rng, 2 + trial % 3, 5, 4, notion, -1, -1);
    std::vector<std::vector<int>> current = inst.bundles;
    const int agent = trial % inst.n;
    const auto chosen = inner_best_subset(inst, notion, agent, inst.bundles[agent], current);

    // Re-evaluate the winner and every competitor with the public
    // predicates.
    auto envied_with = [&](const std::vector<int>& mine) {
      auto kept = current;
      kept[agent] = mine;
      Allocation alloc;
      alloc.kept = kept;
      for (int b = 0; b < inst.n; ++b) {
        if (b == agent) continue;
        const bool bad = notion == Notion::EF ? envies(inst, alloc, b, agent)
                                              : envies_up_to_one(inst, alloc, b, agent);
        if (bad) return true;
      }
      return false;
    };
    CHECK_FALSE(envied_with(chosen));
    const Utility got = bundle_value(inst, agent, chosen);
    const auto& candidate = inst.bundles[agent];
    Utility best = -1;
    for (std::uint32_t mask = 0; mask < (1u << candidate.size()); ++mask) {
      std::vector<int> subset;
      for (size_t i = 0; i < candidate.size(); ++i)
        if (mask >> i & 1) subset.push_back(candidate[i]);
      if (!envied_with(subset)) best = std::max(best, bundle_value(inst, agent, subset));
    }
    CHECK(got == best);
  }
}

TEST_CASE("constraint search accepts an all-keep solution immediately") {
  const Instance inst = identical_from_bundles({{2}, {2}}, Notion::EF, 2, 0);
  const Solution sol = constraint_formulation_decide(inst, Notion::EF);
  REQUIRE(sol.feasible);
  CHECK(sol.deleted.empty());
}

TEST_CASE("constraint search matches the oracle") {
  std::mt19937 rng(89);
  for (int trial = 0; trial < 250; ++trial) {
    const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
    const int n = 2 + trial % 2;
    const int m = 3 + trial % 6;
    Instance inst = random_instance(rng, n, m, 3, notion, -1, -1);
    inst = with_budgets(inst, trial % (m + 1),
                        (trial * 5) % (inst.initial_welfare() + 2));
    check_against_oracle(inst, constraint_formulation_decide(inst, notion));
  }
}

TEST_CASE("branch search basics") {
  SUBCASE("fair input needs no branching") {
    const Instance inst = identical_from_bundles({{2}, {2}}, Notion::EF, 0, 0);
    BranchStats stats;
    const Solution sol = branch_decide(inst, Notion::EF, BudgetKind::Count, &stats);
    REQUIRE(sol.feasible);
    CHECK(sol.deleted.empty());
    CHECK(stats.nodes == 1);
  }
  SUBCASE("zero budget with envy is infeasible") {
    const Instance inst = identical_from_bundles({{1}, {1, 1, 1}}, Notion::EF, 0, 0);
    CHECK_FALSE(branch_decide(inst, Notion::EF, BudgetKind::Count).feasible);
  }
  SUBCASE("welfare budgets need the welfare variant") {
    const Instance inst = identical_from_bundles({{1}, {1, 1, 1}}, Notion::EF, 1, 0);
    CHECK_THROWS_AS(branch_decide(inst, Notion::EF, BudgetKind::Welfare),
                    std::invalid_argument);
  }
}

TEST_CASE("branch search matches the oracle and honors its leaf bound") {
  std::mt19937 rng(97);
  for (int trial = 0; trial < 200; ++trial) {
    const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
    const int n = 2 + trial % 3;
    const int m = 4 + trial % 5;
    Instance inst = random_instance(rng, n, m, 3, notion, -1, -1);
    const int k = trial % (m + 1);
    inst = with_budgets(inst, k, (trial * 3) % (inst.initial_welfare() + 2));
    BranchStats stats;
    const Solution sol = branch_decide(inst, notion, BudgetKind::Count, &stats);
    check_against_oracle(inst, sol);
    const auto params = derive_params(inst);
    const double bound = std::pow(std::max(1, std::min(params.d, params.w_a)),
                                  static_cast<double>(k));
    CHECK(static_cast<double>(stats.leaves) <= bound + 1);

    if (inst.k_minus == inst.m) {
      check_against_oracle(inst, branch_decide(inst, notion, BudgetKind::Welfare));
    }
  }
}

TEST_CASE("branch search on the welfare variant") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 120; ++trial) {
    const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
    Instance inst = random_instance(rng, 2 + trial % 3, 4 + trial % 4, 3, notion, -1, -1);
    inst = with_budgets(inst, inst.m, (trial * 7) % (inst.initial_welfare() + 2));
    check_against_oracle(inst, branch_decide(inst, notion, BudgetKind::Welfare));
  }
}

TEST_CASE("enumeration strategies: guards and edge behavior") {
  SUBCASE("a zero budget only tries the empty deletion") {
    const Instance fair = identical_from_bundles({{2}, {2}}, Notion::EF, 0, 0);
    CHECK(enumerate_decide(fair, Notion::EF, EnumerationStrategy::ByKMinus).feasible);
    const Instance unfair = identical_from_bundles({{1}, {1, 1, 1}}, Notion::EF, 0, 0);
    CHECK_FALSE(enumerate_decide(unfair, Notion::EF, EnumerationStrategy::ByKMinus).feasible);
  }
  SUBCASE("support enumeration never deletes a worthless resource") {
    RawInstance raw;
    raw.utilities = {{1, 0, 0}, {1, 0, 1}};
    raw.owner = {0, 1, 1};
    raw.notion = Notion::EF;
    raw.k_minus = 3;
    const Instance inst = validate_instance(raw);
    const Solution sol = enumerate_decide(inst, Notion::EF, EnumerationStrategy::BySupport);
    REQUIRE(sol.feasible);
    CHECK(std::find(sol.deleted.begin(), sol.deleted.end(), 1) == sol.deleted.end());
  }
  SUBCASE("the deleted-welfare strategy needs the welfare variant") {
    const Instance inst = identical_from_bundles({{1}, {1, 1}}, Notion::EF, 1, 0);
    CHECK_THROWS_AS(enumerate_decide(inst, Notion::EF, EnumerationStrategy::ByLMinus),
                    std::invalid_argument);
  }
}

TEST_CASE("enumeration strategies match the oracle and each other") {
  std::mt19937 rng(103);
  for (int trial = 0; trial < 150; ++trial) {
    const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
    const int n = 2 + trial % 3;
    const int m = 3 + trial % 5;
    Instance inst = random_instance(rng, n, m, 3, notion, -1, -1);
    const bool welfare_variant = trial % 3 == 0;
    inst = with_budgets(inst, welfare_variant ? m : trial % (m + 1),
                        (trial * 7) % (inst.initial_welfare() + 2));
    const bool expected = oracle_decide(inst).feasible;

    const Solution by_k = enumerate_decide(inst, notion, EnumerationStrategy::ByKMinus);
    const Solution by_support = enumerate_decide(inst, notion, EnumerationStrategy::BySupport);
    const Solution by_dlm = enumerate_decide(inst, notion, EnumerationStrategy::ByDLMinus);
    CHECK(by_k.feasible == expected);
    CHECK(by_support.feasible == expected);
    CHECK(by_dlm.feasible == expected);
    for (const Solution* sol : {&by_k, &by_support, &by_dlm})
      if (sol->feasible) CHECK(verify_solution(inst, *sol).ok());

    if (welfare_variant) {
      const Solution by_lm = enumerate_decide(inst, notion, EnumerationStrategy::ByLMinus);
      CHECK(by_lm.feasible == expected);
      if (by_lm.feasible) CHECK(verify_solution(inst, by_lm).ok());
    }
  }
}

TEST_CASE("profile guessing basics") {
  SUBCASE("no initial envy accepts the empty deletion") {
    const Instance inst = identical_from_bundles({{2}, {2}}, Notion::EF, 2, 0);
    const Solution sol = profile_guess_decide(inst, Notion::EF, BudgetKind::Count);
    REQUIRE(sol.feasible);
    CHECK(sol.deleted.empty());
  }
  SUBCASE("too many envious agents reject before guessing") {
    // Four envious agents but budget * w_r = 1 * 2 = 2.
    RawInstance raw;
    raw.utilities = {{0, 1, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 0, 1, 1},
                     {0, 0, 0, 1, 1}, {1, 0, 1, 0, 0}};
    raw.owner = {4, 4, 4, 4, 4};
    raw.notion = Notion::EF;
    raw.k_minus = 1;
    const Instance inst = validate_instance(raw);
    CHECK_FALSE(profile_guess_decide(inst, Notion::EF, BudgetKind::Count).feasible);
  }
}

TEST_CASE("profile guessing matches the oracle on sparse instances") {
  std::mt19937 rng(107);
  for (int trial = 0; trial < 200; ++trial) {
    const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
    const int n = 2 + trial % 4;
    const int m = 3 + trial % 5;
    Instance inst = random_sparse_instance(rng, n, m, 2, 2, notion, -1, -1);
    const bool welfare_kind = trial % 3 == 0;
    if (welfare_kind) {
      const Utility w = inst.initial_welfare();
      inst = with_budgets(inst, m, w - std::min<Utility>(w, 3));
      check_against_oracle(inst, profile_guess_decide(inst, notion, BudgetKind::Welfare));
    } else {
      inst = with_budgets(inst, trial % 4, (trial * 3) % (inst.initial_welfare() + 2));
      check_against_oracle(inst, profile_guess_decide(inst, notion, BudgetKind::Count));
    }
  }
}

TEST_CASE("0/1 remaining-bound solver for plain envy") {
  SUBCASE("keep one valued resource per agent") {
    RawInstance raw;
    raw.utilities = {{1, 1, 0}, {0, 1, 1}};
    raw.owner = {0, 0, 1};
    raw.notion = Notion::EF;
    raw.k_minus = 1;  // k_plus = 2 = surviving agents
    raw.ell_plus = 0;
    const Instance inst = validate_instance(raw);
    const Solution sol = zero_one_kplus_decide(inst, Notion::EF, BudgetKind::Count);
    REQUIRE(sol.feasible);
    CHECK(verify_solution(inst, sol).ok());
  }
  SUBCASE("an empty allocation satisfies k_plus = 0") {
    const Instance inst = identical_from_bundles({{1}, {1, 1}}, Notion::EF, 3, 0);
    CHECK(zero_one_kplus_decide(inst, Notion::EF, BudgetKind::Count).feasible);
  }
  SUBCASE("preconditions") {
    const Instance inst = identical_from_bundles({{1}, {1, 1}}, Notion::EF1, 3, 0);
    CHECK_THROWS_AS(zero_one_kplus_decide(inst, Notion::EF1, BudgetKind::Count),
                    std::invalid_argument);
    const Instance not_binary = identical_from_bundles({{2}}, Notion::EF, 1, 0);
    CHECK_THROWS_AS(zero_one_kplus_decide(not_binary, Notion::EF, BudgetKind::Count),
                    std::invalid_argument);
  }
}

TEST_CASE("0/1 remaining-bound solver matches the oracle") {
  std::mt19937 rng(109);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3;
    const int m = 3 + trial % 6;
    Instance inst = random_zero_one_instance(rng, n, m, Notion::EF, -1, -1);
    if (trial % 2 == 0) {
      inst = with_budgets(inst, trial % (m + 1), 0);
      check_against_oracle(inst, zero_one_kplus_decide(inst, Notion::EF, BudgetKind::Count));
    } else {
      inst = with_budgets(inst, m, (trial * 3) % (inst.initial_welfare() + 2));
      check_against_oracle(inst, zero_one_kplus_decide(inst, Notion::EF, BudgetKind::Welfare));
    }
  }
}

TEST_CASE("EF1 remaining-bound solver") {
  SUBCASE("singleton bundles are never envied up to one good") {
    std::mt19937 rng(113);
    const Instance base = random_instance(rng, 3, 9, 4, Notion::EF1, -1, -1);
    const Instance inst = with_budgets(base, base.m - 3, 0);  // k_plus = 3 = holders
    const Solution sol = ef1_remaining_bound_decide(inst, BudgetKind::Count);
    REQUIRE(sol.feasible);
    CHECK(verify_solution(inst, sol).ok());
  }
  SUBCASE("matches the oracle on both kinds") {
    std::mt19937 rng(127);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + trial % 3;
      const int m = 3 + trial % 6;
      Instance inst = random_instance(rng, n, m, 4, Notion::EF1, -1, -1);
      if (trial % 2 == 0) {
        inst = with_budgets(inst, trial % (m + 1), 0);
        check_against_oracle(inst, ef1_remaining_bound_decide(inst, BudgetKind::Count));
      } else {
        inst = with_budgets(inst, m, (trial * 5) % (inst.initial_welfare() + 2));
        check_against_oracle(inst, ef1_remaining_bound_decide(inst, BudgetKind::Welfare));
      }
    }
  }
}

TEST_CASE("dispatch picks the expected algorithms") {
  SUBCASE("identical number-variant EF1 goes to the greedy") {
    const Instance inst = identical_from_bundles({{1}, {1, 1, 1}}, Notion::EF1, 1, 0);
    const auto [choice, sol] = dispatch_solve(inst);
    CHECK(choice.algorithm == "ef1_greedy_number");
    CHECK(sol.feasible);
  }
  SUBCASE("two agents with unit values go to the constraint search") {
    RawInstance raw;
    raw.utilities = {{1, 0, 1}, {1, 1, 0}};
    raw.owner = {0, 0, 0};
    raw.notion = Notion::EF;
    raw.k_minus = 1;
    raw.ell_plus = 1;
    const Instance inst = validate_instance(raw);
    const auto [choice, sol] = dispatch_solve(inst);
    CHECK(choice.algorithm == "constraint_formulation");
  }
  SUBCASE("a large instance with no applicable guard raises a capability error") {
    std::mt19937 rng(131);
    Instance inst = random_instance(rng, 10, 30, 1000000, Notion::EF, -1, -1);
    inst = with_budgets(inst, 15, 1);
    CHECK_THROWS_AS(dispatch_solve(inst), CapabilityError);
  }
  SUBCASE("a trivially unreachable welfare floor is declined up front") {
    const Instance inst = identical_from_bundles({{1}, {1}}, Notion::EF, 1, 100);
    const auto [choice, sol] = dispatch_solve(inst);
    CHECK(choice.algorithm == "welfare_floor_precheck");
    CHECK_FALSE(sol.feasible);
  }
}

TEST_CASE("dispatch never routes the general variant through free pre-deletion") {
  // Pre-deleting owner-zero resources is only sound when the count budget
  // is slack, so these algorithm names must not appear for mixed budgets.
  std::mt19937 rng(139);
  for (int trial = 0; trial < 80; ++trial) {
    const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
    Instance inst = random_instance(rng, 2 + trial % 3, 4 + trial % 5, 3, notion, -1, -1);
    inst = with_budgets(inst, 1 + trial % (inst.m - 1),
                        1 + (trial * 3) % inst.initial_welfare());
    if (inst.k_minus == inst.m || inst.ell_plus == 0) continue;
    const auto [choice, sol] = dispatch_solve(inst);
    CHECK(choice.algorithm != "branch_welfare");
    CHECK(choice.algorithm != "enumerate_lminus");
    CHECK(choice.algorithm != "profile_guess_welfare");
  }
}

TEST_CASE("dispatch answers match the oracle on mixed instances") {
  std::mt19937 rng(137);
  for (int trial = 0; trial < 150; ++trial) {
    const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
    const int n = 2 + trial % 3;
    const int m = 3 + trial % 6;
    Instance inst = trial % 3 == 0
                        ? efdg::testing::random_identical_instance(rng, n, m, 4, notion, -1, -1)
                        : random_instance(rng, n, m, 3, notion, -1, -1);
    inst = with_budgets(inst, trial % (m + 1), (trial * 3) % (inst.initial_welfare() + 2));
    const auto [choice, sol] = dispatch_solve(inst);
    CAPTURE(choice.algorithm);
    check_against_oracle(inst, sol);
  }
}
