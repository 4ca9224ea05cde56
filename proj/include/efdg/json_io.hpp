#pragma once

#include <map>

#include <json.hpp>

#include "efdg/model.hpp"
#include "efdg/reductions.hpp"

namespace efdg {

/// On-disk instance format. Allocation lists are keyed by agent name; every
/// resource appears in exactly one list. Absent k_minus means m (welfare
/// variant), absent ell_plus means 0 (number variant).
struct InstanceDocument {
  std::vector<std::string> agents;
  std::vector<std::string> resources;
  std::vector<std::vector<Utility>> valuations;
  std::map<std::string, std::vector<std::string>> allocation;
  Notion notion = Notion::EF1;
  std::optional<int> k_minus;
  std::optional<Utility> ell_plus;
};

/// Strict parser: unknown fields, wrong types, and inconsistent shapes are
/// rejected with a diagnostic naming the offending field.
InstanceDocument instance_document_from_json(const nlohmann::json& j);
nlohmann::json instance_document_to_json(const InstanceDocument& doc);

Instance to_instance(const InstanceDocument& doc);
InstanceDocument to_document(const Instance& inst);

struct ResultDocument {
  std::string status;  // "yes" | "no" | "capability_exceeded"
  std::vector<std::string> deleted;
  int deleted_count = 0;
  Utility remaining_welfare = 0;
  std::string algorithm;
  bool verified = false;
  double elapsed_ms = 0.0;
};

nlohmann::json result_document_to_json(const ResultDocument& doc);
ResultDocument result_document_from_json(const nlohmann::json& j);

nlohmann::json verification_report_to_json(const Instance& inst,
                                           const VerificationReport& report);

/// Source instances arrive in the same envelope with a "source" object.
SourceInstance source_from_json(const nlohmann::json& j);

}  // namespace efdg
