#pragma once

#include "efdg/model.hpp"

namespace efdg {

enum class SourceKind {
  SetCover,
  RestrictedX3C,
  SubsetSum,
  Partition,
  KSum,
  LeqKSum,
  Mrss,
  Clique,
  CubicIndependentSet,
  IndependentSet,
};

std::string to_string(SourceKind kind);
std::optional<SourceKind> source_kind_from_string(const std::string& text);

/// Instance of a classical problem feeding a reduction generator. Only the
/// fields of the active kind are meaningful.
struct SourceInstance {
  SourceKind kind = SourceKind::SubsetSum;
  // set systems
  int universe_size = 0;
  std::vector<std::vector<int>> sets;
  int z = 0;
  // numeric problems
  std::vector<Utility> values;
  Utility target = 0;
  int k = 0;
  // multidimensional relaxed subset sum
  std::vector<std::vector<Utility>> vectors;  // one row per item, k entries
  std::vector<Utility> target_vector;
  int k_prime = 0;
  // graph problems
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  int t = 0;
};

/// Kind-specific well-formedness; throws std::invalid_argument.
void validate_source(const SourceInstance& src);

enum class BudgetVariant { Number, Welfare };
enum class SubsetSumVariant { KPlus1, EllPlus1, KMinusLeqK };
enum class KSumBound { KMinus, KPlus };
enum class CubicIsVariant { KPlus1, EllPlus1 };

Instance from_set_cover(const SourceInstance& src, Notion notion, BudgetVariant variant);
Instance from_x3c(const SourceInstance& src, Notion notion);
Instance from_partition_ef1(const SourceInstance& src);
Instance from_leq_k_sum_ef1(const SourceInstance& src);
Instance from_k_sum_ef1_number(const SourceInstance& src, KSumBound bound);
Instance from_subset_sum_ef(const SourceInstance& src, SubsetSumVariant variant);
Instance from_mrss(const SourceInstance& src, Notion notion, BudgetVariant variant);
Instance from_clique(const SourceInstance& src, Notion notion);
Instance from_cubic_is(const SourceInstance& src, CubicIsVariant variant);
Instance from_is_ef1(const SourceInstance& src, BudgetVariant variant);

/// Exact reference decision for the source problem by enumeration.
/// Throws CapabilityError when the payload exceeds roughly 2^20 candidates.
bool decide_source(const SourceInstance& src);

}  // namespace efdg
