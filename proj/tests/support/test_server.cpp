#include "test_server.hpp"

#include <regex>

#include "chrono_rdf/sparql.hpp"
#include "chrono_rdf/sparql_client.hpp"

namespace chrono_rdf::tests {

namespace {

// Named-graph quads of one subject; the query parser has no GRAPH support.
std::string graph_query_result(const std::string& entity, const GraphSet& data) {
  std::vector<Binding> rows;
  for (const Quad& q : data) {
    if (!q.graph || !q.subject().is_iri() || q.subject().value() != entity) continue;
    rows.push_back({{"p", q.predicate()}, {"o", q.object()}, {"g", *q.graph}});
  }
  return to_sparql_json({"p", "o", "g"}, rows);
}

std::string select_result(const std::string& query, const GraphSet& data) {
  static const std::regex graph_form(R"(^SELECT \?p \?o \?g WHERE \{ GRAPH \?g \{ <([^>]*)> \?p \?o \} \}$)");
  std::smatch m;
  if (std::regex_match(query, m, graph_form)) return graph_query_result(m[1], data);
  ParsedQuery q = parse_select(query);
  return to_sparql_json(q.projected, evaluate(q, data).rows());
}

}  // namespace

TestEndpoint::TestEndpoint(std::map<std::string, GraphSet> graphs) : graphs_(std::move(graphs)) {
  server_.Post("/fail", [](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
    res.set_content("failure", "text/plain");
  });
  for (const auto& [path, data] : graphs_) {
    const GraphSet* graph = &data;
    server_.Post(path, [this, graph](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      if (!req.has_param("query")) {
        res.status = 400;
        return;
      }
      try {
        res.set_content(select_result(req.get_param_value("query"), *graph),
                        "application/sparql-results+json");
      } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(e.what(), "text/plain");
      }
    });
  }
  port_ = server_.bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_.listen_after_bind(); });
  server_.wait_until_ready();
}

TestEndpoint::~TestEndpoint() {
  server_.stop();
  if (thread_.joinable()) thread_.join();
}

std::string TestEndpoint::url(const std::string& path) const {
  return "http://127.0.0.1:" + std::to_string(port_) + path;
}

}  // namespace chrono_rdf::tests
