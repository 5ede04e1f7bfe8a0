#include "chrono_rdf/output.hpp"

#include "chrono_rdf/rdf_io.hpp"

namespace chrono_rdf {

namespace {

nlohmann::json optional_string(const std::optional<std::string>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

nlohmann::json document(std::string_view mode, std::optional<Timestamp> generated_at) {
  nlohmann::json doc;
  doc["mode"] = mode;
  doc["generated_at"] =
      generated_at ? nlohmann::json(generated_at->to_string()) : nlohmann::json(nullptr);
  return doc;
}

}  // namespace

nlohmann::json materialization_document(const std::string& entity,
                                        const std::vector<VersionedGraph>& versions,
                                        const std::vector<Snapshot>& other_snapshots,
                                        std::optional<Timestamp> generated_at) {
  nlohmann::json doc = document("materialization", generated_at);
  doc["entity"] = entity;
  nlohmann::json results = nlohmann::json::object();
  for (const auto& v : versions) {
    const Snapshot& s = v.snapshot;
    results[s.generated_at.to_string()] = {
        {"snapshot", s.id},
        {"graph", serialize(v.graphs)},
        {"reconstructed", v.reconstructed},
        {"attributed_to", optional_string(s.attributed_to)},
        {"primary_source", optional_string(s.primary_source)},
        {"description", optional_string(s.description)},
        {"invalidated_at",
         s.invalidated_at ? nlohmann::json(s.invalidated_at->to_string()) : nlohmann::json(nullptr)},
    };
  }
  doc["results"] = std::move(results);
  nlohmann::json others = nlohmann::json::array();
  for (const auto& s : other_snapshots) {
    others.push_back({{"snapshot", s.id}, {"time", s.generated_at.to_string()}});
  }
  doc["other_snapshots"] = std::move(others);
  return doc;
}

nlohmann::json version_query_document(const version_query::Result& result,
                                      std::optional<Timestamp> generated_at) {
  nlohmann::json doc = document("version_query", generated_at);
  doc["variables"] = result.projected;
  doc["relevant_entities"] = result.relevant_entities;
  nlohmann::json results = nlohmann::json::object();
  for (const auto& [time, solutions] : result.results) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : solutions.rows()) {
      nlohmann::json r = nlohmann::json::object();
      for (const auto& [name, term] : row) r[name] = term.to_ntriples();
      rows.push_back(std::move(r));
    }
    results[time.to_string()] = std::move(rows);
  }
  doc["results"] = std::move(results);
  return doc;
}

nlohmann::json delta_query_document(const ChangeReport& report,
                                    std::optional<Timestamp> generated_at) {
  nlohmann::json doc = document("delta_query", generated_at);
  doc["relevant_entities"] = report.relevant_entities;
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) {
    records.push_back({
        {"entity", r.entity},
        {"snapshot", r.snapshot},
        {"time", r.time.to_string()},
        {"kind", change_kind_name(r.kind)},
        {"description", optional_string(r.description)},
        {"attributed_to", optional_string(r.attributed_to)},
        {"added", serialize(r.delta.added)},
        {"removed", serialize(r.delta.removed)},
    });
  }
  doc["results"] = {{"records", std::move(records)}};
  return doc;
}

nlohmann::json error_document(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

std::optional<Timestamp> newest_snapshot(const std::set<std::string>& entities,
                                         const Context& ctx) {
  std::optional<Timestamp> newest;
  for (const auto& e : entities) {
    auto h = ctx.provenance().history(e);
    if (!h || h->snapshots.empty()) continue;
    Timestamp t = h->snapshots.back().generated_at;
    if (!newest || *newest < t) newest = t;
  }
  return newest;
}

std::string dump_document(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace chrono_rdf
