#pragma once

#include <memory>
#include <mutex>
#include <condition_variable>
#include <string>
#include <vector>

#include "chrono_rdf/sources.hpp"
#include "chrono_rdf/sparql.hpp"

namespace chrono_rdf {

// Minimal SPARQL 1.1 protocol client: queries are POSTed as
// application/x-www-form-urlencoded and results read as SPARQL-JSON.
class SparqlClient {
 public:
  SparqlClient(std::string endpoint_url, double timeout_seconds,
               std::size_t max_concurrent = 4);

  // Throws NetworkError on transport failure or non-2xx status; a timed-out
  // request is retried once.
  std::vector<Binding> select(const std::string& query) const;

  const std::string& url() const { return url_; }

 private:
  std::string url_;
  std::string origin_;
  std::string path_;
  double timeout_;
  std::size_t max_concurrent_;
  mutable std::mutex mutex_;
  mutable std::condition_variable slot_free_;
  mutable std::size_t in_flight_ = 0;
};

// Decodes a SPARQL-JSON results document. Throws NetworkError (status 0) on
// malformed documents.
std::vector<Binding> parse_sparql_json(const std::string& body, const std::string& url);

// Encodes bindings as a SPARQL-JSON results document.
std::string to_sparql_json(const std::vector<std::string>& variables,
                           const std::vector<Binding>& rows);

class EndpointDataSource : public DataSource {
 public:
  explicit EndpointDataSource(std::shared_ptr<SparqlClient> client)
      : client_(std::move(client)) {}
  GraphSet entity_graph(const std::string& entity) const override;
  std::set<std::string> subjects_matching(const TriplePattern& pattern) const override;

 private:
  std::shared_ptr<SparqlClient> client_;
};

class EndpointProvenanceSource : public ProvenanceSource {
 public:
  explicit EndpointProvenanceSource(std::shared_ptr<SparqlClient> client)
      : client_(std::move(client)) {}
  std::shared_ptr<const EntityHistory> history(const std::string& entity) const override;
  std::vector<DeltaHit> scan(const std::vector<std::string>& needles) const override;
  void for_each_delta(
      const std::function<void(const DeltaHit&, const std::string&)>& visit) const override;

 private:
  std::shared_ptr<SparqlClient> client_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<const EntityHistory>> histories_;
};

// Query texts sent for an entity's present-state quads in named graphs and
// in the default graph.
std::string entity_graph_query(const std::string& entity);
std::string entity_default_graph_query(const std::string& entity);

}  // namespace chrono_rdf
