#include "efdg/json_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace efdg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end())
      fail(path + "." + key, "unknown field");
  }
}

const json& get_field(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(path + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

Utility integer_value(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<Utility>();
}

std::vector<Utility> integer_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<Utility> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(integer_value(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> index_list(const json& j, const std::string& path) {
  std::vector<int> out;
  for (Utility v : integer_list(j, path)) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace

InstanceDocument instance_document_from_json(const json& j) {
  const std::string root = "instance";
  check_keys(j, root,
             {"agents", "resources", "valuations", "allocation", "notion", "k_minus",
              "ell_plus"});
  InstanceDocument doc;
  doc.agents = string_list(get_field(j, root, "agents"), root + ".agents");
  doc.resources = string_list(get_field(j, root, "resources"), root + ".resources");
  {
    std::set<std::string> unique(doc.agents.begin(), doc.agents.end());
    if (unique.size() != doc.agents.size()) fail(root + ".agents", "duplicate agent name");
  }
  {
    std::set<std::string> unique(doc.resources.begin(), doc.resources.end());
    if (unique.size() != doc.resources.size())
      fail(root + ".resources", "duplicate resource name");
  }

  const json& vals = get_field(j, root, "valuations");
  if (!vals.is_array() || vals.size() != doc.agents.size())
    fail(root + ".valuations", "expected one row per agent");
  for (size_t a = 0; a < vals.size(); ++a) {
    const std::string row_path = root + ".valuations[" + std::to_string(a) + "]";
    const auto row = integer_list(vals[a], row_path);
    if (row.size() != doc.resources.size()) fail(row_path, "expected one entry per resource");
    doc.valuations.push_back(row);
  }

  const json& alloc = get_field(j, root, "allocation");
  if (!alloc.is_object()) fail(root + ".allocation", "expected an object keyed by agent");
  for (const auto& [agent, bundle] : alloc.items()) {
    if (std::find(doc.agents.begin(), doc.agents.end(), agent) == doc.agents.end())
      fail(root + ".allocation." + agent, "unknown agent");
    doc.allocation[agent] = string_list(bundle, root + ".allocation." + agent);
  }

  const json& notion = get_field(j, root, "notion");
  if (!notion.is_string()) fail(root + ".notion", "expected \"EF\" or \"EF1\"");
  const auto parsed = notion_from_string(notion.get<std::string>());
  if (!parsed) fail(root + ".notion", "expected \"EF\" or \"EF1\"");
  doc.notion = *parsed;

  if (j.contains("k_minus"))
    doc.k_minus = static_cast<int>(integer_value(j["k_minus"], root + ".k_minus"));
  if (j.contains("ell_plus"))
    doc.ell_plus = integer_value(j["ell_plus"], root + ".ell_plus");
  return doc;
}

json instance_document_to_json(const InstanceDocument& doc) {
  json j;
  j["agents"] = doc.agents;
  j["resources"] = doc.resources;
  j["valuations"] = doc.valuations;
  json alloc = json::object();
  for (const auto& [agent, bundle] : doc.allocation) alloc[agent] = bundle;
  j["allocation"] = alloc;
  j["notion"] = to_string(doc.notion);
  if (doc.k_minus) j["k_minus"] = *doc.k_minus;
  if (doc.ell_plus) j["ell_plus"] = *doc.ell_plus;
  return j;
}

Instance to_instance(const InstanceDocument& doc) {
  RawInstance raw;
  raw.agent_names = doc.agents;
  raw.resource_names = doc.resources;
  raw.utilities = doc.valuations;
  raw.notion = doc.notion;
  raw.k_minus = doc.k_minus;
  raw.ell_plus = doc.ell_plus;
  raw.owner.assign(doc.resources.size(), -1);

  std::map<std::string, int> agent_index, resource_index;
  for (size_t a = 0; a < doc.agents.size(); ++a) agent_index[doc.agents[a]] = static_cast<int>(a);
  for (size_t r = 0; r < doc.resources.size(); ++r)
    resource_index[doc.resources[r]] = static_cast<int>(r);

  for (const auto& [agent, bundle] : doc.allocation) {
    const int a = agent_index.at(agent);
    for (const auto& name : bundle) {
      auto it = resource_index.find(name);
      if (it == resource_index.end())
        throw std::invalid_argument("allocation: unknown resource \"" + name + "\"");
      if (raw.owner[it->second] != -1)
        throw std::invalid_argument("duplicate ownership of resource \"" + name + "\"");
      raw.owner[it->second] = a;
    }
  }
  for (size_t r = 0; r < raw.owner.size(); ++r)
    if (raw.owner[r] == -1)
      throw std::invalid_argument("resource \"" + doc.resources[r] + "\" is unallocated");
  return validate_instance(raw);
}

InstanceDocument to_document(const Instance& inst) {
  InstanceDocument doc;
  doc.agents = inst.agent_names;
  doc.resources = inst.resource_names;
  doc.valuations = inst.utilities;
  for (int a = 0; a < inst.n; ++a) {
    std::vector<std::string> bundle;
    for (int r : inst.bundles[a]) bundle.push_back(inst.resource_names[r]);
    doc.allocation[inst.agent_names[a]] = std::move(bundle);
  }
  doc.notion = inst.notion;
  doc.k_minus = inst.k_minus;
  doc.ell_plus = inst.ell_plus;
  return doc;
}

json result_document_to_json(const ResultDocument& doc) {
  json j;
  j["status"] = doc.status;
  j["algorithm"] = doc.algorithm;
  j["elapsed_ms"] = doc.elapsed_ms;
  if (doc.status == "yes") {
    j["deleted"] = doc.deleted;
    j["deleted_count"] = doc.deleted_count;
    j["remaining_welfare"] = doc.remaining_welfare;
    j["verified"] = doc.verified;
  }
  return j;
}

ResultDocument result_document_from_json(const json& j) {
  const std::string root = "result";
  check_keys(j, root,
             {"status", "algorithm", "elapsed_ms", "deleted", "deleted_count",
              "remaining_welfare", "verified"});
  ResultDocument doc;
  const json& status = get_field(j, root, "status");
  if (!status.is_string()) fail(root + ".status", "expected a string");
  doc.status = status.get<std::string>();
  if (j.contains("algorithm")) doc.algorithm = j["algorithm"].get<std::string>();
  if (j.contains("elapsed_ms")) doc.elapsed_ms = j["elapsed_ms"].get<double>();
  if (doc.status == "yes") {
    doc.deleted = string_list(get_field(j, root, "deleted"), root + ".deleted");
    doc.deleted_count =
        static_cast<int>(integer_value(get_field(j, root, "deleted_count"), root + ".deleted_count"));
    doc.remaining_welfare =
        integer_value(get_field(j, root, "remaining_welfare"), root + ".remaining_welfare");
    if (j.contains("verified")) doc.verified = j["verified"].get<bool>();
  }
  return doc;
}

json verification_report_to_json(const Instance& inst, const VerificationReport& report) {
  json j;
  j["fairness_ok"] = report.fairness_ok;
  j["count_ok"] = report.count_ok;
  j["welfare_ok"] = report.welfare_ok;
  json pairs = json::array();
  for (const auto& [a, b] : report.envy_pairs)
    pairs.push_back(json::array({inst.agent_names[a], inst.agent_names[b]}));
  j["envy_pairs"] = pairs;
  j["ok"] = report.ok();
  return j;
}

SourceInstance source_from_json(const json& j) {
  const std::string root = "source";
  check_keys(j, "document", {"source"});
  const json& s = get_field(j, "document", "source");
  if (!s.is_object()) fail(root, "expected an object");
  const json& kind_field = get_field(s, root, "kind");
  if (!kind_field.is_string()) fail(root + ".kind", "expected a string");
  const auto kind = source_kind_from_string(kind_field.get<std::string>());
  if (!kind) fail(root + ".kind", "unknown source kind \"" + kind_field.get<std::string>() + "\"");

  SourceInstance src;
  src.kind = *kind;
  switch (src.kind) {
    case SourceKind::SetCover: {
      check_keys(s, root, {"kind", "universe_size", "sets", "z"});
      src.universe_size =
          static_cast<int>(integer_value(get_field(s, root, "universe_size"), root + ".universe_size"));
      const json& sets = get_field(s, root, "sets");
      if (!sets.is_array()) fail(root + ".sets", "expected an array of arrays");
      for (size_t c = 0; c < sets.size(); ++c)
        src.sets.push_back(index_list(sets[c], root + ".sets[" + std::to_string(c) + "]"));
      src.z = static_cast<int>(integer_value(get_field(s, root, "z"), root + ".z"));
      break;
    }
    case SourceKind::RestrictedX3C: {
      check_keys(s, root, {"kind", "universe_size", "sets"});
      src.universe_size =
          static_cast<int>(integer_value(get_field(s, root, "universe_size"), root + ".universe_size"));
      const json& sets = get_field(s, root, "sets");
      if (!sets.is_array()) fail(root + ".sets", "expected an array of arrays");
      for (size_t c = 0; c < sets.size(); ++c)
        src.sets.push_back(index_list(sets[c], root + ".sets[" + std::to_string(c) + "]"));
      break;
    }
    case SourceKind::SubsetSum: {
      check_keys(s, root, {"kind", "values", "target"});
      src.values = integer_list(get_field(s, root, "values"), root + ".values");
      src.target = integer_value(get_field(s, root, "target"), root + ".target");
      break;
    }
    case SourceKind::Partition: {
      check_keys(s, root, {"kind", "values"});
      src.values = integer_list(get_field(s, root, "values"), root + ".values");
      break;
    }
    case SourceKind::KSum:
    case SourceKind::LeqKSum: {
      check_keys(s, root, {"kind", "values", "target", "k"});
      src.values = integer_list(get_field(s, root, "values"), root + ".values");
      src.target = integer_value(get_field(s, root, "target"), root + ".target");
      src.k = static_cast<int>(integer_value(get_field(s, root, "k"), root + ".k"));
      break;
    }
    case SourceKind::Mrss: {
      check_keys(s, root, {"kind", "vectors", "target", "k_prime"});
      const json& vectors = get_field(s, root, "vectors");
      if (!vectors.is_array()) fail(root + ".vectors", "expected an array of arrays");
      for (size_t i = 0; i < vectors.size(); ++i)
        src.vectors.push_back(
            integer_list(vectors[i], root + ".vectors[" + std::to_string(i) + "]"));
      src.target_vector = integer_list(get_field(s, root, "target"), root + ".target");
      src.k_prime = static_cast<int>(integer_value(get_field(s, root, "k_prime"), root + ".k_prime"));
      break;
    }
    case SourceKind::Clique:
    case SourceKind::CubicIndependentSet:
    case SourceKind::IndependentSet: {
      check_keys(s, root, {"kind", "num_vertices", "edges", "t"});
      src.num_vertices =
          static_cast<int>(integer_value(get_field(s, root, "num_vertices"), root + ".num_vertices"));
      const json& edges = get_field(s, root, "edges");
      if (!edges.is_array()) fail(root + ".edges", "expected an array of [u, v] pairs");
      for (size_t e = 0; e < edges.size(); ++e) {
        const auto pair = index_list(edges[e], root + ".edges[" + std::to_string(e) + "]");
        if (pair.size() != 2) fail(root + ".edges[" + std::to_string(e) + "]", "expected two endpoints");
        src.edges.emplace_back(pair[0], pair[1]);
      }
      src.t = static_cast<int>(integer_value(get_field(s, root, "t"), root + ".t"));
      break;
    }
  }
  return src;
}

}  // namespace efdg
