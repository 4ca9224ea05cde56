#include <doctest.h>

#include <numeric>
#include <random>

#include "efdg/general.hpp"
#include "efdg/model.hpp"
#include "efdg/oracle.hpp"
#include "efdg/reductions.hpp"

using namespace efdg;

namespace {

SourceInstance set_cover_source(int universe, std::vector<std::vector<int>> sets, int z) {
  SourceInstance src;
  src.kind = SourceKind::SetCover;
  src.universe_size = universe;
  src.sets = std::move(sets);
  src.z = z;
  return src;
}

SourceInstance values_source(SourceKind kind, std::vector<Utility> values, Utility target = 0,
                             int k = 0) {
  SourceInstance src;
  src.kind = kind;
  src.values = std::move(values);
  src.target = target;
  src.k = k;
  return src;
}

SourceInstance graph_source(SourceKind kind, int vertices,
                            std::vector<std::pair<int, int>> edges, int t) {
  SourceInstance src;
  src.kind = kind;
  src.num_vertices = vertices;
  src.edges = std::move(edges);
  src.t = t;
  return src;
}

SourceInstance x3c_t1() {
  SourceInstance src;
  src.kind = SourceKind::RestrictedX3C;
  src.universe_size = 3;
  src.sets = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
  return src;
}

SourceInstance x3c_t2_yes() {
  SourceInstance src;
  src.kind = SourceKind::RestrictedX3C;
  src.universe_size = 6;
  src.sets = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {3, 4, 5}, {3, 4, 5}, {3, 4, 5}};
  return src;
}

void expect_round_trip(const SourceInstance& src, const Instance& generated) {
  CHECK(decide_source(src) == oracle_decide(generated).feasible);
}

int find_resource(const Instance& inst, const std::string& name) {
  const auto it = std::find(inst.resource_names.begin(), inst.resource_names.end(), name);
  REQUIRE(it != inst.resource_names.end());
  return static_cast<int>(it - inst.resource_names.begin());
}

}  // namespace

TEST_CASE("decide_source on classic examples") {
  CHECK(decide_source(values_source(SourceKind::Partition, {1, 2, 3})));
  CHECK_FALSE(decide_source(values_source(SourceKind::Partition, {1, 1, 3})));
  CHECK_FALSE(decide_source(
      graph_source(SourceKind::Clique, 3, {{0, 1}, {1, 2}}, 3)));  // a path has no triangle
  CHECK_FALSE(decide_source(set_cover_source(2, {{0}, {1}}, 1)));
  CHECK(decide_source(set_cover_source(2, {{0}, {1}}, 2)));
  CHECK(decide_source(values_source(SourceKind::KSum, {1, 2, 3}, 3, 2)));
  CHECK_FALSE(decide_source(values_source(SourceKind::KSum, {1, 2, 4}, 4, 2)));
  CHECK(decide_source(values_source(SourceKind::LeqKSum, {3, 4, 5}, 9, 2)));
  CHECK(decide_source(x3c_t1()));
  CHECK(decide_source(x3c_t2_yes()));
}

TEST_CASE("set-cover generator") {
  SUBCASE("the one-set example is a yes-instance with the budget carried") {
    const SourceInstance src = set_cover_source(2, {{0, 1}}, 1);
    const Instance inst = from_set_cover(src, Notion::EF, BudgetVariant::Number);
    CHECK(inst.k_minus == 1);
    CHECK(inst.ell_plus == 0);
    expect_round_trip(src, inst);
  }
  SUBCASE("a budget covering every set is always a yes") {
    const SourceInstance src = set_cover_source(3, {{0, 1}, {1, 2}, {0, 2}}, 3);
    for (Notion notion : {Notion::EF, Notion::EF1})
      for (BudgetVariant variant : {BudgetVariant::Number, BudgetVariant::Welfare})
        CHECK(oracle_decide(from_set_cover(src, notion, variant)).feasible);
  }
  SUBCASE("welfare variant prices deletions through the special agent") {
    const SourceInstance src = set_cover_source(2, {{0, 1}, {0}}, 1);
    const Instance inst = from_set_cover(src, Notion::EF, BudgetVariant::Welfare);
    CHECK(inst.k_minus == inst.m);
    CHECK(inst.ell_plus == inst.initial_welfare() - 1);
    expect_round_trip(src, inst);
  }
  SUBCASE("random small covers round-trip for all four shapes") {
    std::mt19937 rng(139);
    std::uniform_int_distribution<int> universe_dist(1, 4);
    std::uniform_int_distribution<int> sets_dist(1, 4);
    std::uniform_int_distribution<int> z_dist(0, 3);
    std::bernoulli_distribution member(0.55);
    for (int trial = 0; trial < 60; ++trial) {
      const int universe = universe_dist(rng);
      std::vector<std::vector<int>> sets(sets_dist(rng));
      for (auto& set : sets)
        for (int s = 0; s < universe; ++s)
          if (member(rng)) set.push_back(s);
      const SourceInstance src = set_cover_source(universe, sets, z_dist(rng));
      const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
      const BudgetVariant variant =
          trial % 4 < 2 ? BudgetVariant::Number : BudgetVariant::Welfare;
      expect_round_trip(src, from_set_cover(src, notion, variant));
    }
  }
}

TEST_CASE("exact-cover generator carries the stated budget and parameters") {
  const Instance ef = from_x3c(x3c_t1(), Notion::EF);
  CHECK(ef.k_minus == 8);
  const auto p_ef = derive_params(ef);
  CHECK(p_ef.d == 3);
  CHECK(p_ef.w_r == 3);
  // The valuation table fixes w_a = 5 through the element watcher agents;
  // see the element watcher row: three covering resources plus two own.
  CHECK(p_ef.w_a == 5);
  CHECK(p_ef.zero_one);

  const Instance ef1 = from_x3c(x3c_t1(), Notion::EF1);
  CHECK(ef1.k_minus == 8);
  const auto p_ef1 = derive_params(ef1);
  CHECK(p_ef1.d == 7);
  CHECK(p_ef1.w_a == 7);
  CHECK(p_ef1.w_r == 3);
}

TEST_CASE("exact-cover generator round-trips through the branching solver") {
  for (Notion notion : {Notion::EF, Notion::EF1}) {
    const Instance inst = from_x3c(x3c_t1(), notion);
    const Solution sol = branch_decide(inst, notion, BudgetKind::Count);
    CHECK(sol.feasible == decide_source(x3c_t1()));
    if (sol.feasible) CHECK(verify_solution(inst, sol).ok());
  }
}

TEST_CASE("exact-cover generator accepts the intended witness at t=2") {
  const SourceInstance src = x3c_t2_yes();
  // Exact cover: sets 0 and 3.
  for (Notion notion : {Notion::EF, Notion::EF1}) {
    const Instance inst = from_x3c(src, notion);
    std::vector<int> deleted;
    deleted.push_back(find_resource(inst, "c0_plus"));
    deleted.push_back(find_resource(inst, "c3_plus"));
    for (int s = 0; s < 3; ++s) deleted.push_back(find_resource(inst, "e" + std::to_string(s) + "_c0"));
    for (int s = 3; s < 6; ++s) deleted.push_back(find_resource(inst, "e" + std::to_string(s) + "_c3"));
    for (int c : {1, 2, 4, 5}) {
      deleted.push_back(find_resource(inst, "c" + std::to_string(c) + "_minus1"));
      deleted.push_back(find_resource(inst, "c" + std::to_string(c) + "_minus2"));
    }
    CHECK(static_cast<int>(deleted.size()) == inst.k_minus);
    const Solution sol = make_feasible_solution(inst, deleted, "witness");
    CHECK(verify_solution(inst, sol).ok());
  }
}

TEST_CASE("partition generator") {
  SUBCASE("the worked example is a yes-instance with the floor carried") {
    const SourceInstance src = values_source(SourceKind::Partition, {1, 2, 3});
    const Instance inst = from_partition_ef1(src);
    CHECK(inst.n == 2);
    CHECK(derive_params(inst).identical);
    CHECK(inst.k_minus == inst.m);
    CHECK(inst.initial_welfare() - inst.ell_plus == 3);  // deleted welfare at most S
    expect_round_trip(src, inst);
  }
  SUBCASE("odd totals are rejected") {
    CHECK_THROWS_WITH_AS(from_partition_ef1(values_source(SourceKind::Partition, {1, 1, 3})),
                         doctest::Contains("odd"), std::invalid_argument);
  }
  SUBCASE("random partitions round-trip") {
    std::mt19937 rng(149);
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_int_distribution<Utility> value(1, 6);
    for (int trial = 0; trial < 80; ++trial) {
      std::vector<Utility> values(count(rng));
      for (auto& v : values) v = value(rng);
      if (std::accumulate(values.begin(), values.end(), Utility{0}) % 2 != 0)
        values.push_back(1);
      if (std::accumulate(values.begin(), values.end(), Utility{0}) % 2 != 0) continue;
      const SourceInstance src = values_source(SourceKind::Partition, values);
      expect_round_trip(src, from_partition_ef1(src));
    }
  }
}

TEST_CASE("bounded-count subset-sum generator for EF1") {
  SUBCASE("worked example: {3,4,5}, target 9, two deletions") {
    const SourceInstance src = values_source(SourceKind::LeqKSum, {3, 4, 5}, 9, 2);
    const Instance inst = from_leq_k_sum_ef1(src);
    CHECK(inst.k_minus == 2);
    CHECK(inst.initial_welfare() - inst.ell_plus == 9);
    expect_round_trip(src, inst);
  }
  SUBCASE("no deletions allowed leaves the over-endowed agent envied") {
    const SourceInstance src = values_source(SourceKind::LeqKSum, {3, 4, 5}, 9, 0);
    CHECK_FALSE(oracle_decide(from_leq_k_sum_ef1(src)).feasible);
  }
  SUBCASE("random sweeps round-trip") {
    std::mt19937 rng(151);
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_int_distribution<Utility> value(1, 5);
    std::uniform_int_distribution<int> k_dist(0, 4);
    for (int trial = 0; trial < 120; ++trial) {
      std::vector<Utility> values(count(rng));
      for (auto& v : values) v = value(rng);
      const Utility total = std::accumulate(values.begin(), values.end(), Utility{0});
      std::uniform_int_distribution<Utility> target(1, total + 2);
      const SourceInstance src =
          values_source(SourceKind::LeqKSum, values, target(rng), k_dist(rng));
      expect_round_trip(src, from_leq_k_sum_ef1(src));
    }
  }
}

TEST_CASE("fixed-count subset-sum generator for EF1") {
  SUBCASE("worked example: {1,2,3}, target 3, exactly two picks") {
    const SourceInstance src = values_source(SourceKind::KSum, {1, 2, 3}, 3, 2);
    for (KSumBound bound : {KSumBound::KMinus, KSumBound::KPlus}) {
      const Instance inst = from_k_sum_ef1_number(src, bound);
      CHECK(inst.ell_plus == 0);
      expect_round_trip(src, inst);
    }
  }
  SUBCASE("the remaining-count form pins k_plus to k + 3") {
    const SourceInstance src = values_source(SourceKind::KSum, {1, 2, 3}, 3, 2);
    const Instance inst = from_k_sum_ef1_number(src, KSumBound::KPlus);
    CHECK(inst.k_plus() == src.k + 3);
  }
  SUBCASE("a single-item source can still be a yes") {
    const SourceInstance src = values_source(SourceKind::KSum, {5}, 5, 1);
    expect_round_trip(src, from_k_sum_ef1_number(src, KSumBound::KMinus));
    expect_round_trip(src, from_k_sum_ef1_number(src, KSumBound::KPlus));
  }
  SUBCASE("exhaustive sweep over small sources") {
    for (int nu = 2; nu <= 4; ++nu) {
      std::mt19937 rng(157 + nu);
      std::uniform_int_distribution<Utility> value(1, 6);
      for (int trial = 0; trial < 40; ++trial) {
        std::vector<Utility> values(nu);
        for (auto& v : values) v = value(rng);
        const Utility total = std::accumulate(values.begin(), values.end(), Utility{0});
        for (int k = 0; k <= nu; ++k)
          for (Utility target = 1; target <= total + 1; target += 2) {
            const SourceInstance src = values_source(SourceKind::KSum, values, target, k);
            expect_round_trip(src, from_k_sum_ef1_number(src, KSumBound::KMinus));
            expect_round_trip(src, from_k_sum_ef1_number(src, KSumBound::KPlus));
          }
      }
    }
  }
}

TEST_CASE("subset-sum generators for plain envy") {
  SUBCASE("a reachable anchor keeps everything") {
    const SourceInstance src = values_source(SourceKind::SubsetSum, {4, 5}, 9);
    const Instance inst = from_subset_sum_ef(src, SubsetSumVariant::KPlus1);
    CHECK(inst.k_minus == inst.m - 1);  // at least one resource stays
    expect_round_trip(src, inst);
  }
  SUBCASE("an unreachable anchor forces the empty allocation") {
    const SourceInstance src = values_source(SourceKind::SubsetSum, {4, 5}, 7);
    CHECK_FALSE(oracle_decide(from_subset_sum_ef(src, SubsetSumVariant::KPlus1)).feasible);
    CHECK_FALSE(oracle_decide(from_subset_sum_ef(src, SubsetSumVariant::EllPlus1)).feasible);
  }
  SUBCASE("random sweeps for all three budget forms") {
    std::mt19937 rng(163);
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_int_distribution<Utility> value(1, 5);
    std::uniform_int_distribution<int> k_dist(0, 4);
    for (int trial = 0; trial < 120; ++trial) {
      std::vector<Utility> values(count(rng));
      for (auto& v : values) v = value(rng);
      const Utility total = std::accumulate(values.begin(), values.end(), Utility{0});
      std::uniform_int_distribution<Utility> target(1, total + 2);
      const Utility goal = target(rng);
      const SourceInstance subset = values_source(SourceKind::SubsetSum, values, goal);
      expect_round_trip(subset, from_subset_sum_ef(subset, SubsetSumVariant::KPlus1));
      expect_round_trip(subset, from_subset_sum_ef(subset, SubsetSumVariant::EllPlus1));
      const SourceInstance bounded =
          values_source(SourceKind::LeqKSum, values, goal, k_dist(rng));
      expect_round_trip(bounded, from_subset_sum_ef(bounded, SubsetSumVariant::KMinusLeqK));
    }
  }
}

TEST_CASE("multidimensional relaxed subset-sum generator") {
  SUBCASE("worked example with one dimension") {
    SourceInstance src;
    src.kind = SourceKind::Mrss;
    src.vectors = {{2}, {3}};
    src.target_vector = {3};
    src.k_prime = 1;
    const Instance inst = from_mrss(src, Notion::EF, BudgetVariant::Number);
    CHECK(inst.k_minus == 1);  // k_prime carried
    expect_round_trip(src, inst);
  }
  SUBCASE("a full budget is a yes exactly when the columns reach the target") {
    SourceInstance src;
    src.kind = SourceKind::Mrss;
    src.vectors = {{1, 0}, {0, 1}};
    src.target_vector = {1, 1};
    src.k_prime = 2;
    CHECK(oracle_decide(from_mrss(src, Notion::EF, BudgetVariant::Number)).feasible);
  }
  SUBCASE("negative own-resource values are rejected") {
    SourceInstance src;
    src.kind = SourceKind::Mrss;
    src.vectors = {{1}};
    src.target_vector = {2};
    src.k_prime = 1;
    CHECK_THROWS_AS(from_mrss(src, Notion::EF, BudgetVariant::Number), std::invalid_argument);
  }
  SUBCASE("random sweeps for all four shapes") {
    std::mt19937 rng(167);
    std::uniform_int_distribution<int> nu_dist(1, 4);
    std::uniform_int_distribution<int> dim_dist(1, 2);
    std::uniform_int_distribution<Utility> entry(0, 3);
    std::uniform_int_distribution<int> kp_dist(0, 3);
    for (int trial = 0; trial < 80; ++trial) {
      SourceInstance src;
      src.kind = SourceKind::Mrss;
      const int nu = nu_dist(rng);
      const int dim = dim_dist(rng);
      src.vectors.assign(nu, std::vector<Utility>(dim));
      std::vector<Utility> columns(dim, 0);
      for (auto& vec : src.vectors)
        for (int j = 0; j < dim; ++j) {
          vec[j] = entry(rng);
          columns[j] += vec[j];
        }
      src.target_vector.resize(dim);
      for (int j = 0; j < dim; ++j)
        src.target_vector[j] = std::uniform_int_distribution<Utility>(0, columns[j])(rng);
      src.k_prime = kp_dist(rng);
      const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
      const BudgetVariant variant =
          trial % 4 < 2 ? BudgetVariant::Number : BudgetVariant::Welfare;
      expect_round_trip(src, from_mrss(src, notion, variant));
    }
  }
}

TEST_CASE("clique generator") {
  SUBCASE("a triangle at t=3 is a yes-instance with the floor carried") {
    const SourceInstance src =
        graph_source(SourceKind::Clique, 3, {{0, 1}, {1, 2}, {0, 2}}, 3);
    const Instance inst = from_clique(src, Notion::EF);
    CHECK(inst.initial_welfare() - inst.ell_plus == 3);  // C(3,2)
    CHECK(inst.k_minus == 3 * 3 - 2 * 3 + 3);
    expect_round_trip(src, inst);
  }
  SUBCASE("a path at t=3 is a no-instance") {
    const SourceInstance src = graph_source(SourceKind::Clique, 3, {{0, 1}, {1, 2}}, 3);
    expect_round_trip(src, from_clique(src, Notion::EF));
  }
  SUBCASE("an edge at t=2 under EF1") {
    const SourceInstance src = graph_source(SourceKind::Clique, 2, {{0, 1}}, 2);
    const Instance inst = from_clique(src, Notion::EF1);
    CHECK(inst.initial_welfare() - inst.ell_plus == 1);
    expect_round_trip(src, inst);
  }
  SUBCASE("t below 2 is rejected") {
    CHECK_THROWS_AS(from_clique(graph_source(SourceKind::Clique, 2, {{0, 1}}, 1), Notion::EF),
                    std::invalid_argument);
  }
  SUBCASE("random small graphs round-trip") {
    std::mt19937 rng(173);
    for (int trial = 0; trial < 40; ++trial) {
      const int vertices = 2 + trial % 3;
      std::vector<std::pair<int, int>> edges;
      std::bernoulli_distribution keep(0.6);
      for (int u = 0; u < vertices; ++u)
        for (int v = u + 1; v < vertices; ++v)
          if (keep(rng)) edges.emplace_back(u, v);
      const int t = 2 + trial % 2;
      const SourceInstance src = graph_source(SourceKind::Clique, vertices, edges, t);
      const Notion notion = trial % 2 == 0 ? Notion::EF : Notion::EF1;
      const Instance inst = from_clique(src, notion);
      if (inst.m <= 22) expect_round_trip(src, inst);
    }
  }
}

TEST_CASE("cubic independent-set generator") {
  const std::vector<std::pair<int, int>> k4 = {{0, 1}, {0, 2}, {0, 3},
                                               {1, 2}, {1, 3}, {2, 3}};
  SUBCASE("K4 has a single-vertex independent set but no pair") {
    const SourceInstance yes = graph_source(SourceKind::CubicIndependentSet, 4, k4, 1);
    const SourceInstance no = graph_source(SourceKind::CubicIndependentSet, 4, k4, 2);
    for (CubicIsVariant variant : {CubicIsVariant::KPlus1, CubicIsVariant::EllPlus1}) {
      expect_round_trip(yes, from_cubic_is(yes, variant));
      expect_round_trip(no, from_cubic_is(no, variant));
    }
  }
  SUBCASE("derived parameters") {
    const SourceInstance src = graph_source(SourceKind::CubicIndependentSet, 4, k4, 1);
    const Instance count_form = from_cubic_is(src, CubicIsVariant::KPlus1);
    CHECK(derive_params(count_form).w_r == 4);
    CHECK(count_form.k_plus() == 1);
    const Instance welfare_form = from_cubic_is(src, CubicIsVariant::EllPlus1);
    CHECK(welfare_form.ell_plus == 1);
    CHECK(welfare_form.k_minus == welfare_form.m);
  }
  SUBCASE("non-cubic graphs are rejected") {
    CHECK_THROWS_WITH_AS(
        from_cubic_is(graph_source(SourceKind::CubicIndependentSet, 3, {{0, 1}, {1, 2}}, 1),
                      CubicIsVariant::KPlus1),
        doctest::Contains("3-regular"), std::invalid_argument);
  }
}

TEST_CASE("independent-set generator for EF1") {
  const std::vector<std::pair<int, int>> triangle = {{0, 1}, {1, 2}, {0, 2}};
  SUBCASE("the number form has zero initial welfare and w_a = 2") {
    const SourceInstance src = graph_source(SourceKind::IndependentSet, 3, triangle, 1);
    const Instance inst = from_is_ef1(src, BudgetVariant::Number);
    CHECK(inst.initial_welfare() == 0);
    CHECK(derive_params(inst).w_a == 2);
    expect_round_trip(src, inst);
  }
  SUBCASE("a triangle has no independent pair") {
    const SourceInstance src = graph_source(SourceKind::IndependentSet, 3, triangle, 2);
    expect_round_trip(src, from_is_ef1(src, BudgetVariant::Number));
    expect_round_trip(src, from_is_ef1(src, BudgetVariant::Welfare));
  }
  SUBCASE("random graphs round-trip under both budget forms") {
    std::mt19937 rng(179);
    for (int trial = 0; trial < 60; ++trial) {
      const int vertices = 2 + trial % 4;
      std::vector<std::pair<int, int>> edges;
      std::bernoulli_distribution keep(0.5);
      for (int u = 0; u < vertices; ++u)
        for (int v = u + 1; v < vertices; ++v)
          if (keep(rng)) edges.emplace_back(u, v);
      const SourceInstance src =
          graph_source(SourceKind::IndependentSet, vertices, edges, trial % (vertices + 2));
      expect_round_trip(src, from_is_ef1(src, BudgetVariant::Number));
      expect_round_trip(src, from_is_ef1(src, BudgetVariant::Welfare));
    }
  }
}

TEST_CASE("dispatching generated instances agrees with the oracle") {
  std::mt19937 rng(181);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<Utility> value(1, 4);
    std::vector<Utility> values(2 + trial % 4);
    for (auto& v : values) v = value(rng);
    const Utility total = std::accumulate(values.begin(), values.end(), Utility{0});
    const SourceInstance src = values_source(SourceKind::LeqKSum, values,
                                             1 + (trial * 3) % (total + 1), trial % 4);
    const Instance inst = from_leq_k_sum_ef1(src);
    const auto [choice, sol] = dispatch_solve(inst);
    CAPTURE(choice.algorithm);
    CHECK(sol.feasible == oracle_decide(inst).feasible);
    if (sol.feasible) CHECK(verify_solution(inst, sol).ok());
  }
}
