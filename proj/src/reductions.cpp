#include "efdg/reductions.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace efdg {

std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::SetCover: return "set_cover";
    case SourceKind::RestrictedX3C: return "restricted_x3c";
    case SourceKind::SubsetSum: return "subset_sum";
    case SourceKind::Partition: return "partition";
    case SourceKind::KSum: return "k_sum";
    case SourceKind::LeqKSum: return "leq_k_sum";
    case SourceKind::Mrss: return "mrss";
    case SourceKind::Clique: return "clique";
    case SourceKind::CubicIndependentSet: return "cubic_independent_set";
    case SourceKind::IndependentSet: return "independent_set";
  }
  return "unknown";
}

std::optional<SourceKind> source_kind_from_string(const std::string& text) {
  static const std::pair<const char*, SourceKind> table[] = {
      {"set_cover", SourceKind::SetCover},
      {"restricted_x3c", SourceKind::RestrictedX3C},
      {"subset_sum", SourceKind::SubsetSum},
      {"partition", SourceKind::Partition},
      {"k_sum", SourceKind::KSum},
      {"leq_k_sum", SourceKind::LeqKSum},
      {"mrss", SourceKind::Mrss},
      {"clique", SourceKind::Clique},
      {"cubic_independent_set", SourceKind::CubicIndependentSet},
      {"independent_set", SourceKind::IndependentSet},
  };
  for (const auto& [name, kind] : table)
    if (text == name) return kind;
  return std::nullopt;
}

namespace {

[[noreturn]] void reject(const std::string& message) {
  throw std::invalid_argument(message);
}

// Accumulates agents and sparse-valued resources, then assembles the dense
// instance. Emission order is fixed by insertion order so generated
// documents are byte-stable.
class InstanceBuilder {
 public:
  int add_agent(std::string name) {
    agent_names_.push_back(std::move(name));
    return static_cast<int>(agent_names_.size()) - 1;
  }

  int add_resource(std::string name, int owner,
                   std::vector<std::pair<int, Utility>> values) {
    resource_names_.push_back(std::move(name));
    owners_.push_back(owner);
    values_.push_back(std::move(values));
    return static_cast<int>(resource_names_.size()) - 1;
  }

  Instance build(Notion notion, std::optional<int> k_minus,
                 std::optional<Utility> ell_plus) const {
    RawInstance raw;
    raw.notion = notion;
    raw.agent_names = agent_names_;
    raw.resource_names = resource_names_;
    raw.owner = owners_;
    // Count budgets beyond m are pure slack.
    if (k_minus)
      k_minus = std::min(*k_minus, static_cast<int>(resource_names_.size()));
    raw.k_minus = k_minus;
    raw.ell_plus = ell_plus;
    raw.utilities.assign(agent_names_.size(),
                         std::vector<Utility>(resource_names_.size(), 0));
    for (size_t r = 0; r < values_.size(); ++r)
      for (const auto& [agent, value] : values_[r]) raw.utilities[agent][r] = value;
    return validate_instance(raw);
  }

  Utility welfare() const {
    Utility total = 0;
    for (size_t r = 0; r < values_.size(); ++r)
      for (const auto& [agent, value] : values_[r])
        if (agent == owners_[r]) total += value;
    return total;
  }

 private:
  std::vector<std::string> agent_names_;
  std::vector<std::string> resource_names_;
  std::vector<int> owners_;
  std::vector<std::vector<std::pair<int, Utility>>> values_;
};

// Degenerate sources map to canonical instances with the matching verdict;
// see the generators for when each arises.
Instance trivial_yes_instance(Notion notion, BudgetVariant variant) {
  InstanceBuilder b;
  const int a = b.add_agent("solo");
  b.add_resource("token", a, {{a, 1}});
  if (variant == BudgetVariant::Welfare) return b.build(notion, std::nullopt, 1);
  return b.build(notion, 0, std::nullopt);
}

Instance trivial_no_instance(Notion notion, BudgetVariant variant) {
  InstanceBuilder b;
  const int have_not = b.add_agent("have_not");
  const int hoarder = b.add_agent("hoarder");
  b.add_resource("prize1", hoarder, {{have_not, 1}, {hoarder, 1}});
  b.add_resource("prize2", hoarder, {{have_not, 1}, {hoarder, 1}});
  if (variant == BudgetVariant::Welfare) return b.build(notion, std::nullopt, 2);
  return b.build(notion, 0, std::nullopt);
}

void check_positive_values(const SourceInstance& src) {
  if (src.values.empty()) reject("source needs at least one value");
  for (Utility v : src.values)
    if (v <= 0) reject("source values must be positive");
}

void check_graph(const SourceInstance& src) {
  if (src.num_vertices < 0) reject("negative vertex count");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : src.edges) {
    if (u < 0 || v < 0 || u >= src.num_vertices || v >= src.num_vertices)
      reject("edge endpoint out of range");
    if (u == v) reject("self-loop");
    if (!seen.insert(std::minmax(u, v)).second) reject("duplicate edge");
  }
}

std::vector<int> element_frequencies(int universe_size,
                                     const std::vector<std::vector<int>>& sets) {
  std::vector<int> freq(universe_size, 0);
  for (const auto& set : sets)
    for (int s : set) ++freq[s];
  return freq;
}

}  // namespace

void validate_source(const SourceInstance& src) {
  switch (src.kind) {
    case SourceKind::SetCover: {
      if (src.universe_size < 0) reject("negative universe");
      if (src.z < 0) reject("negative cover budget");
      for (const auto& set : src.sets) {
        std::set<int> dedup;
        for (int s : set) {
          if (s < 0 || s >= src.universe_size) reject("set element out of range");
          if (!dedup.insert(s).second) reject("duplicate element within a set");
        }
      }
      return;
    }
    case SourceKind::RestrictedX3C: {
      if (src.universe_size % 3 != 0) reject("universe size not divisible by 3");
      for (const auto& set : src.sets) {
        if (set.size() != 3) reject("every set must have exactly three elements");
        std::set<int> dedup(set.begin(), set.end());
        if (dedup.size() != 3) reject("duplicate element within a set");
        for (int s : set)
          if (s < 0 || s >= src.universe_size) reject("set element out of range");
      }
      for (int f : element_frequencies(src.universe_size, src.sets))
        if (f != 3) reject("every element must appear in exactly three sets");
      return;
    }
    case SourceKind::SubsetSum:
    case SourceKind::Partition:
      check_positive_values(src);
      if (src.kind == SourceKind::SubsetSum && src.target <= 0) reject("target must be positive");
      return;
    case SourceKind::KSum:
    case SourceKind::LeqKSum:
      check_positive_values(src);
      if (src.target <= 0) reject("target must be positive");
      if (src.k < 0) reject("negative subset size bound");
      return;
    case SourceKind::Mrss: {
      if (src.vectors.empty()) reject("mrss needs at least one vector");
      const size_t dim = src.target_vector.size();
      if (dim == 0) reject("mrss needs a target vector");
      for (const auto& vec : src.vectors) {
        if (vec.size() != dim) reject("vector dimension mismatch");
        for (Utility v : vec)
          if (v < 0) reject("negative vector entry");
      }
      for (Utility v : src.target_vector)
        if (v < 0) reject("negative target entry");
      if (src.k_prime < 0) reject("negative k_prime");
      return;
    }
    case SourceKind::Clique:
    case SourceKind::IndependentSet:
      check_graph(src);
      if (src.t < 0) reject("negative solution size");
      return;
    case SourceKind::CubicIndependentSet: {
      check_graph(src);
      if (src.t < 0) reject("negative solution size");
      std::vector<int> degree(src.num_vertices, 0);
      for (auto [u, v] : src.edges) {
        ++degree[u];
        ++degree[v];
      }
      for (int d : degree)
        if (d != 3) reject("graph is not 3-regular");
      return;
    }
  }
  reject("unknown source kind");
}

Instance from_set_cover(const SourceInstance& src, Notion notion, BudgetVariant variant) {
  if (src.kind != SourceKind::SetCover) reject("from_set_cover needs a set_cover source");
  validate_source(src);

  int universe = src.universe_size;
  std::vector<std::vector<int>> sets = src.sets;
  std::vector<char> element_alive(universe, 1);
  long long budget = src.z;

  if (notion == Notion::EF1) {
    // Elements covered by a single set force that set into every cover;
    // repeat until every surviving element sits in at least two sets.
    for (;;) {
      std::vector<int> freq(universe, 0);
      for (const auto& set : sets)
        for (int s : set)
          if (element_alive[s]) ++freq[s];
      int forced_element = -1;
      for (int s = 0; s < universe && forced_element < 0; ++s) {
        if (!element_alive[s]) continue;
        if (freq[s] == 0) return trivial_no_instance(notion, variant);
        if (freq[s] == 1) forced_element = s;
      }
      if (forced_element < 0) break;
      int forced_set = -1;
      for (size_t c = 0; c < sets.size() && forced_set < 0; ++c)
        for (int s : sets[c])
          if (s == forced_element) forced_set = static_cast<int>(c);
      for (int s : sets[forced_set]) element_alive[s] = 0;
      sets.erase(sets.begin() + forced_set);
      if (--budget < 0) return trivial_no_instance(notion, variant);
    }
  } else {
    // An element no set covers makes the source a no-instance outright.
    for (int f : element_frequencies(universe, sets))
      if (f == 0) return trivial_no_instance(notion, variant);
  }

  std::vector<int> live_elements;
  for (int s = 0; s < universe; ++s)
    if (element_alive[s]) live_elements.push_back(s);
  if (live_elements.empty())
    return budget >= 0 ? trivial_yes_instance(notion, variant)
                       : trivial_no_instance(notion, variant);

  InstanceBuilder b;
  std::vector<int> element_agent(universe, -1);
  for (int s : live_elements)
    element_agent[s] = b.add_agent("elem" + std::to_string(s));
  const int special = b.add_agent("special");

  const int private_count = notion == Notion::EF ? 0 : 1;  // f_s - 1 vs f_s - 2
  std::vector<int> freq(universe, 0);
  for (const auto& set : sets)
    for (int s : set)
      if (element_alive[s]) ++freq[s];
  for (int s : live_elements) {
    const int privates = freq[s] - 1 - private_count;
    for (int j = 0; j < privates; ++j)
      b.add_resource("priv" + std::to_string(s) + "_" + std::to_string(j), element_agent[s],
                     {{element_agent[s], 1}});
  }
  for (size_t c = 0; c < sets.size(); ++c) {
    std::vector<std::pair<int, Utility>> values;
    for (int s : sets[c])
      if (element_alive[s]) values.emplace_back(element_agent[s], 1);
    if (variant == BudgetVariant::Welfare) values.emplace_back(special, 1);
    std::sort(values.begin(), values.end());
    b.add_resource("set" + std::to_string(c), special, std::move(values));
  }

  if (variant == BudgetVariant::Number)
    return b.build(notion, static_cast<int>(budget), std::nullopt);
  const Utility floor = std::max<Utility>(b.welfare() - budget, 0);
  return b.build(notion, std::nullopt, floor);
}

Instance from_x3c(const SourceInstance& src, Notion notion) {
  if (src.kind != SourceKind::RestrictedX3C) reject("from_x3c needs a restricted_x3c source");
  validate_source(src);
  const int t = src.universe_size / 3;
  const bool ef1 = notion == Notion::EF1;

  InstanceBuilder b;
  std::vector<int> a_elem(src.universe_size), a_elem_star(src.universe_size);
  for (int s = 0; s < src.universe_size; ++s) {
    a_elem[s] = b.add_agent("e" + std::to_string(s));
    a_elem_star[s] = b.add_agent("e" + std::to_string(s) + "_star");
  }
  const int num_sets = static_cast<int>(src.sets.size());
  std::vector<int> a_set(num_sets), a_set_star1(num_sets), a_set_star2(num_sets);
  for (int c = 0; c < num_sets; ++c) {
    a_set[c] = b.add_agent("c" + std::to_string(c));
    a_set_star1[c] = b.add_agent("c" + std::to_string(c) + "_star1");
    a_set_star2[c] = b.add_agent("c" + std::to_string(c) + "_star2");
  }

  std::vector<std::vector<int>> covering(src.universe_size);
  for (int c = 0; c < num_sets; ++c)
    for (int s : src.sets[c]) covering[s].push_back(c);

  for (int s = 0; s < src.universe_size; ++s) {
    for (int c : covering[s])
      b.add_resource("e" + std::to_string(s) + "_c" + std::to_string(c), a_elem[s],
                     {{a_elem[s], 1}, {a_elem_star[s], 1}, {a_set[c], 1}});
    if (ef1) {
      b.add_resource("e" + std::to_string(s) + "_x1", a_elem[s], {{a_elem_star[s], 1}});
      for (int c : covering[s])
        b.add_resource("e" + std::to_string(s) + "_c" + std::to_string(c) + "_x1", a_elem[s],
                       {{a_set[c], 1}});
    }
    b.add_resource("e" + std::to_string(s) + "_star1", a_elem_star[s], {{a_elem_star[s], 1}});
    b.add_resource("e" + std::to_string(s) + "_star2", a_elem_star[s], {{a_elem_star[s], 1}});
  }
  for (int c = 0; c < num_sets; ++c) {
    b.add_resource("c" + std::to_string(c) + "_plus", a_set[c],
                   {{a_set[c], 1}, {a_set_star1[c], 1}, {a_set_star2[c], 1}});
    b.add_resource("c" + std::to_string(c) + "_minus1", a_set[c], {{a_set_star1[c], 1}});
    b.add_resource("c" + std::to_string(c) + "_minus2", a_set[c], {{a_set_star2[c], 1}});
    if (ef1) {
      b.add_resource("c" + std::to_string(c) + "_x1", a_set[c], {{a_set_star1[c], 1}});
      b.add_resource("c" + std::to_string(c) + "_x2", a_set[c], {{a_set_star2[c], 1}});
    }
    b.add_resource("c" + std::to_string(c) + "_star1", a_set_star1[c], {{a_set_star1[c], 1}});
    b.add_resource("c" + std::to_string(c) + "_star2", a_set_star2[c], {{a_set_star2[c], 1}});
  }
  return b.build(notion, 8 * t, std::nullopt);
}

Instance from_partition_ef1(const SourceInstance& src) {
  if (src.kind != SourceKind::Partition) reject("from_partition_ef1 needs a partition source");
  validate_source(src);
  const Utility total = std::accumulate(src.values.begin(), src.values.end(), Utility{0});
  if (total % 2 != 0) reject("partition total is odd");
  const Utility half = total / 2;
  // A value above the half-sum admits cheap alternative deletions in the
  // construction, so those trivially-no sources are emitted directly.
  for (Utility v : src.values)
    if (v > half) return trivial_no_instance(Notion::EF1, BudgetVariant::Welfare);

  InstanceBuilder b;
  const int one = b.add_agent("one");
  const int two = b.add_agent("two");
  for (size_t i = 0; i < src.values.size(); ++i)
    b.add_resource("x" + std::to_string(i), one, {{one, src.values[i]}, {two, src.values[i]}});
  b.add_resource("s1", one, {{one, half}, {two, half}});
  b.add_resource("s2", two, {{one, half}, {two, half}});
  return b.build(Notion::EF1, std::nullopt, b.welfare() - half);
}

Instance from_leq_k_sum_ef1(const SourceInstance& src) {
  if (src.kind != SourceKind::LeqKSum) reject("from_leq_k_sum_ef1 needs a leq_k_sum source");
  validate_source(src);
  const Utility total = std::accumulate(src.values.begin(), src.values.end(), Utility{0});
  if (src.target > total) return trivial_no_instance(Notion::EF1, BudgetVariant::Number);

  InstanceBuilder b;
  const int a = b.add_agent("a");
  const int bb = b.add_agent("b");
  for (size_t i = 0; i < src.values.size(); ++i)
    b.add_resource("x" + std::to_string(i), a, {{a, src.values[i]}, {bb, src.values[i]}});
  b.add_resource("r1star", a, {{a, total}, {bb, total}});
  b.add_resource("r2star", bb, {{a, total - src.target}, {bb, total - src.target}});
  const int m = static_cast<int>(src.values.size()) + 2;
  return b.build(Notion::EF1, std::min(src.k, m), b.welfare() - src.target);
}

Instance from_k_sum_ef1_number(const SourceInstance& src, KSumBound bound) {
  if (src.kind != SourceKind::KSum) reject("from_k_sum_ef1_number needs a k_sum source");
  validate_source(src);
  const int nu = static_cast<int>(src.values.size());
  const Utility total = std::accumulate(src.values.begin(), src.values.end(), Utility{0});
  if (src.k > nu || src.target > total)
    return trivial_no_instance(Notion::EF1, BudgetVariant::Number);
  // The construction's removal argument needs the anchor resource to carry
  // the largest value on agent a's side, which fails below two items; a
  // single-item source is decided outright instead.
  if (nu < 2)
    return decide_source(src) ? trivial_yes_instance(Notion::EF1, BudgetVariant::Number)
                              : trivial_no_instance(Notion::EF1, BudgetVariant::Number);

  const Utility big = total;  // T
  const Utility pair_half_numerator =
      bound == KSumBound::KMinus
          ? (static_cast<Utility>(nu - src.k)) * big + (big - src.target)
          : static_cast<Utility>(src.k) * big + src.target;
  // Agent b's whole row is doubled when the half-value would be fractional;
  // scaling one agent's valuation preserves the decision.
  const Utility b_scale = pair_half_numerator % 2 == 0 ? 1 : 2;
  const Utility pair_value_b = pair_half_numerator * b_scale / 2;
  const Utility pair_value_a = bound == KSumBound::KMinus
                                   ? static_cast<Utility>(nu) * big +
                                         static_cast<Utility>(nu - src.k) * big +
                                         (big - src.target)
                                   : static_cast<Utility>(nu) * big +
                                         static_cast<Utility>(src.k) * big + src.target;

  InstanceBuilder b;
  const int a = b.add_agent("a");
  const int bb = b.add_agent("b");
  for (int i = 0; i < nu; ++i)
    b.add_resource("x" + std::to_string(i), a,
                   {{a, big + src.values[i]}, {bb, (big + src.values[i]) * b_scale}});
  b.add_resource("r1star", a, {{a, static_cast<Utility>(nu) * big},
                               {bb, static_cast<Utility>(nu) * big * b_scale}});
  b.add_resource("r2star", bb, {{a, pair_value_a}, {bb, pair_value_b}});
  b.add_resource("r3star", bb, {{a, pair_value_a}, {bb, pair_value_b}});
  const int k_minus = bound == KSumBound::KMinus ? src.k : nu - src.k;
  return b.build(Notion::EF1, k_minus, std::nullopt);
}

Instance from_subset_sum_ef(const SourceInstance& src, SubsetSumVariant variant) {
  if (variant == SubsetSumVariant::KMinusLeqK) {
    if (src.kind != SourceKind::LeqKSum)
      reject("from_subset_sum_ef(kminus_leqk) needs a leq_k_sum source");
  } else if (src.kind != SourceKind::SubsetSum) {
    reject("from_subset_sum_ef needs a subset_sum source");
  }
  validate_source(src);
  const int nu = static_cast<int>(src.values.size());
  const Utility total = std::accumulate(src.values.begin(), src.values.end(), Utility{0});

  InstanceBuilder b;
  const int a = b.add_agent("a");
  const int bb = b.add_agent("b");
  if (variant == SubsetSumVariant::KMinusLeqK) {
    // Bounded-count form: agent a must shed exactly `target` worth of
    // resources, so b anchors the complement value.
    if (src.target > total) return trivial_no_instance(Notion::EF, BudgetVariant::Number);
    for (int i = 0; i < nu; ++i)
      b.add_resource("x" + std::to_string(i), a, {{a, src.values[i]}, {bb, src.values[i]}});
    b.add_resource("anchor", bb, {{a, total - src.target}, {bb, total - src.target}});
    return b.build(Notion::EF, std::min(src.k, nu), std::nullopt);
  }
  for (int i = 0; i < nu; ++i)
    b.add_resource("x" + std::to_string(i), a, {{a, src.values[i]}, {bb, src.values[i]}});
  b.add_resource("anchor", bb, {{a, src.target}, {bb, src.target}});
  const int m = nu + 1;
  if (variant == SubsetSumVariant::KPlus1) return b.build(Notion::EF, m - 1, std::nullopt);
  return b.build(Notion::EF, std::nullopt, 1);
}

Instance from_mrss(const SourceInstance& src, Notion notion, BudgetVariant variant) {
  if (src.kind != SourceKind::Mrss) reject("from_mrss needs an mrss source");
  validate_source(src);
  const int dim = static_cast<int>(src.target_vector.size());
  const int nu = static_cast<int>(src.vectors.size());
  std::vector<Utility> column_sum(dim, 0);
  for (const auto& vec : src.vectors)
    for (int j = 0; j < dim; ++j) column_sum[j] += vec[j];
  for (int j = 0; j < dim; ++j)
    if (src.target_vector[j] > column_sum[j])
      reject("target entry exceeds its column sum");
  const int k_prime = std::min(src.k_prime, nu);

  InstanceBuilder b;
  std::vector<int> dims(dim);
  for (int j = 0; j < dim; ++j) dims[j] = b.add_agent("a" + std::to_string(j));
  const int special = b.add_agent("special");
  for (int j = 0; j < dim; ++j)
    b.add_resource("own" + std::to_string(j), dims[j],
                   {{dims[j], column_sum[j] - src.target_vector[j]}});
  for (int i = 0; i < nu; ++i) {
    std::vector<std::pair<int, Utility>> values;
    for (int j = 0; j < dim; ++j)
      if (src.vectors[i][j] > 0) values.emplace_back(dims[j], src.vectors[i][j]);
    values.emplace_back(special, 1);
    b.add_resource("item" + std::to_string(i), special, std::move(values));
  }
  if (notion == Notion::EF1)
    for (int j = 0; j < dim; ++j)
      b.add_resource("hat" + std::to_string(j), special,
                     {{dims[j], column_sum[j]}, {special, 1}});

  if (variant == BudgetVariant::Number) return b.build(notion, k_prime, std::nullopt);
  const Utility floor = std::max<Utility>(b.welfare() - k_prime, 0);
  return b.build(notion, std::nullopt, floor);
}

Instance from_clique(const SourceInstance& src, Notion notion) {
  if (src.kind != SourceKind::Clique) reject("from_clique needs a clique source");
  validate_source(src);
  if (src.t < 2) reject("clique size must be at least 2");
  const long long edges = static_cast<long long>(src.edges.size());
  const long long want = static_cast<long long>(src.t) * (src.t - 1) / 2;
  if (edges < want)
    return trivial_no_instance(notion, BudgetVariant::Number);
  const bool ef1 = notion == Notion::EF1;

  InstanceBuilder b;
  std::vector<int> vertex_agent(src.num_vertices);
  for (int v = 0; v < src.num_vertices; ++v)
    vertex_agent[v] = b.add_agent("v" + std::to_string(v));
  std::vector<int> edge_agent(src.edges.size());
  for (size_t e = 0; e < src.edges.size(); ++e)
    edge_agent[e] = b.add_agent("e" + std::to_string(e));

  std::vector<std::vector<int>> incident(src.num_vertices);
  for (size_t e = 0; e < src.edges.size(); ++e) {
    incident[src.edges[e].first].push_back(static_cast<int>(e));
    incident[src.edges[e].second].push_back(static_cast<int>(e));
  }

  for (int v = 0; v < src.num_vertices; ++v) {
    b.add_resource("v" + std::to_string(v) + "_own", vertex_agent[v], {{vertex_agent[v], 3}});
    const int baits = ef1 ? 2 : 1;
    for (int j = 1; j <= baits; ++j) {
      std::vector<std::pair<int, Utility>> values;
      for (int e : incident[v]) values.emplace_back(edge_agent[e], ef1 ? 2 : 1);
      std::sort(values.begin(), values.end());
      b.add_resource("v" + std::to_string(v) + "_bait" + std::to_string(j), vertex_agent[v],
                     std::move(values));
    }
  }
  for (size_t e = 0; e < src.edges.size(); ++e) {
    const auto [u, v] = src.edges[e];
    for (int j = 1; j <= 3; ++j)
      b.add_resource("e" + std::to_string(e) + "_give" + std::to_string(j), edge_agent[e],
                     {{vertex_agent[u], 1}, {vertex_agent[v], 1}});
    const int keeps = ef1 ? 2 : 1;
    for (int j = 1; j <= keeps; ++j)
      b.add_resource("e" + std::to_string(e) + "_keep" + std::to_string(j), edge_agent[e],
                     {{vertex_agent[u], 3}, {vertex_agent[v], 3}, {edge_agent[e], 1}});
  }
  const long long k_minus = 3 * edges - 2 * want + src.t;
  return b.build(notion, static_cast<int>(k_minus), b.welfare() - want);
}

Instance from_cubic_is(const SourceInstance& src, CubicIsVariant variant) {
  if (src.kind != SourceKind::CubicIndependentSet)
    reject("from_cubic_is needs a cubic_independent_set source");
  validate_source(src);
  const int q = static_cast<int>(src.edges.size());
  if (q == 0) reject("cubic graph must have edges");

  InstanceBuilder b;
  const int special = b.add_agent("special");
  std::vector<int> edge_agent(q);
  for (int e = 0; e < q; ++e) edge_agent[e] = b.add_agent("e" + std::to_string(e));

  std::vector<std::vector<int>> incident(src.num_vertices);
  for (int e = 0; e < q; ++e) {
    incident[src.edges[e].first].push_back(e);
    incident[src.edges[e].second].push_back(e);
  }
  for (int v = 0; v < src.num_vertices; ++v) {
    std::vector<std::pair<int, Utility>> values{{special, 1}};
    for (int e : incident[v]) values.emplace_back(edge_agent[e], 1);
    std::sort(values.begin(), values.end());
    b.add_resource("v" + std::to_string(v), special, std::move(values));
  }
  for (int e = 0; e < q; ++e) {
    std::vector<std::pair<int, Utility>> values;
    values.emplace_back(edge_agent[e], 1);
    const int prev = (e - 1 + q) % q;
    if (prev != e) values.emplace_back(edge_agent[prev], 1);
    if (src.t > 0) values.emplace_back(special, src.t);
    std::sort(values.begin(), values.end());
    b.add_resource("e" + std::to_string(e), edge_agent[e], std::move(values));
  }
  const int m = src.num_vertices + q;
  if (variant == CubicIsVariant::KPlus1) return b.build(Notion::EF, m - 1, std::nullopt);
  return b.build(Notion::EF, std::nullopt, 1);
}

Instance from_is_ef1(const SourceInstance& src, BudgetVariant variant) {
  if (src.kind != SourceKind::IndependentSet)
    reject("from_is_ef1 needs an independent_set source");
  validate_source(src);
  if (variant == BudgetVariant::Number && src.t > src.num_vertices)
    return trivial_no_instance(Notion::EF1, BudgetVariant::Number);

  InstanceBuilder b;
  const int special = b.add_agent("special");
  std::vector<int> edge_agent(src.edges.size());
  for (size_t e = 0; e < src.edges.size(); ++e)
    edge_agent[e] = b.add_agent("e" + std::to_string(e));

  std::vector<std::vector<int>> incident(src.num_vertices);
  for (size_t e = 0; e < src.edges.size(); ++e) {
    incident[src.edges[e].first].push_back(static_cast<int>(e));
    incident[src.edges[e].second].push_back(static_cast<int>(e));
  }
  for (int v = 0; v < src.num_vertices; ++v) {
    std::vector<std::pair<int, Utility>> values;
    if (variant == BudgetVariant::Welfare) values.emplace_back(special, 1);
    for (int e : incident[v]) values.emplace_back(edge_agent[e], 1);
    std::sort(values.begin(), values.end());
    b.add_resource("v" + std::to_string(v), special, std::move(values));
  }
  if (variant == BudgetVariant::Number)
    return b.build(Notion::EF1, src.num_vertices - src.t, std::nullopt);
  return b.build(Notion::EF1, std::nullopt, src.t);
}

namespace {

constexpr std::uint64_t kSourceEnumerationCap = std::uint64_t{1} << 20;

void check_enumeration(std::uint64_t candidates) {
  if (candidates > kSourceEnumerationCap)
    throw CapabilityError("decide_source: payload too large for exhaustive search");
}

bool subsets_with(const std::vector<Utility>& values, Utility target,
                  const std::function<bool(int)>& size_ok) {
  check_enumeration(std::uint64_t{1} << values.size());
  const std::uint64_t end = std::uint64_t{1} << values.size();
  for (std::uint64_t mask = 0; mask < end; ++mask) {
    Utility sum = 0;
    for (size_t i = 0; i < values.size(); ++i)
      if (mask >> i & 1) sum += values[i];
    if (sum == target && size_ok(std::popcount(mask))) return true;
  }
  return false;
}

bool graph_subset_exists(int num_vertices, const std::vector<std::pair<int, int>>& edges,
                         int t, bool want_clique) {
  if (t <= 0) return true;
  if (t > num_vertices) return false;
  check_enumeration(std::uint64_t{1} << num_vertices);
  std::vector<std::vector<char>> adj(num_vertices, std::vector<char>(num_vertices, 0));
  for (auto [u, v] : edges) adj[u][v] = adj[v][u] = 1;
  const std::uint64_t end = std::uint64_t{1} << num_vertices;
  for (std::uint64_t mask = 0; mask < end; ++mask) {
    if (std::popcount(mask) != t) continue;
    bool good = true;
    for (int u = 0; u < num_vertices && good; ++u) {
      if (!(mask >> u & 1)) continue;
      for (int v = u + 1; v < num_vertices && good; ++v) {
        if (!(mask >> v & 1)) continue;
        if (want_clique ? !adj[u][v] : adj[u][v]) good = false;
      }
    }
    if (good) return true;
  }
  return false;
}

}  // namespace

bool decide_source(const SourceInstance& src) {
  validate_source(src);
  switch (src.kind) {
    case SourceKind::SetCover: {
      check_enumeration(std::uint64_t{1} << src.sets.size());
      const std::uint64_t end = std::uint64_t{1} << src.sets.size();
      for (std::uint64_t mask = 0; mask < end; ++mask) {
        if (std::popcount(mask) > src.z) continue;
        std::vector<char> covered(src.universe_size, 0);
        for (size_t c = 0; c < src.sets.size(); ++c)
          if (mask >> c & 1)
            for (int s : src.sets[c]) covered[s] = 1;
        if (std::all_of(covered.begin(), covered.end(), [](char x) { return x != 0; }))
          return true;
      }
      return false;
    }
    case SourceKind::RestrictedX3C: {
      check_enumeration(std::uint64_t{1} << src.sets.size());
      const std::uint64_t end = std::uint64_t{1} << src.sets.size();
      for (std::uint64_t mask = 0; mask < end; ++mask) {
        std::vector<int> covered(src.universe_size, 0);
        for (size_t c = 0; c < src.sets.size(); ++c)
          if (mask >> c & 1)
            for (int s : src.sets[c]) ++covered[s];
        if (std::all_of(covered.begin(), covered.end(), [](int x) { return x == 1; }))
          return true;
      }
      return false;
    }
    case SourceKind::SubsetSum:
      return subsets_with(src.values, src.target, [](int) { return true; });
    case SourceKind::Partition: {
      const Utility total = std::accumulate(src.values.begin(), src.values.end(), Utility{0});
      if (total % 2 != 0) return false;
      return subsets_with(src.values, total / 2, [](int) { return true; });
    }
    case SourceKind::KSum:
      return subsets_with(src.values, src.target, [&](int size) { return size == src.k; });
    case SourceKind::LeqKSum:
      return subsets_with(src.values, src.target, [&](int size) { return size <= src.k; });
    case SourceKind::Mrss: {
      check_enumeration(std::uint64_t{1} << src.vectors.size());
      const int dim = static_cast<int>(src.target_vector.size());
      const std::uint64_t end = std::uint64_t{1} << src.vectors.size();
      for (std::uint64_t mask = 0; mask < end; ++mask) {
        if (std::popcount(mask) > src.k_prime) continue;
        std::vector<Utility> sum(dim, 0);
        for (size_t i = 0; i < src.vectors.size(); ++i)
          if (mask >> i & 1)
            for (int j = 0; j < dim; ++j) sum[j] += src.vectors[i][j];
        bool good = true;
        for (int j = 0; j < dim && good; ++j) good = sum[j] >= src.target_vector[j];
        if (good) return true;
      }
      return false;
    }
    case SourceKind::Clique:
      return graph_subset_exists(src.num_vertices, src.edges, src.t, true);
    case SourceKind::CubicIndependentSet:
    case SourceKind::IndependentSet:
      return graph_subset_exists(src.num_vertices, src.edges, src.t, false);
  }
  reject("unknown source kind");
}

}  // namespace efdg
