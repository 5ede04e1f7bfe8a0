#include "chrono_rdf/sparql_client.hpp"

#include <nlohmann/json.hpp>
#include <httplib.h>

#include "chrono_rdf/error.hpp"
#include "chrono_rdf/rdf_io.hpp"

namespace chrono_rdf {

namespace {

constexpr std::string_view kSparqlJson = "application/sparql-results+json";

Term term_from_json(const nlohmann::json& node, const std::string& url) {
  const std::string type = node.value("type", "");
  const std::string value = node.value("value", "");
  if (type == "uri") return Term::iri(value);
  if (type == "bnode") return Term::blank(value);
  if (type == "literal" || type == "typed-literal") {
    if (node.contains("xml:lang")) return Term::lang_literal(value, node["xml:lang"]);
    if (node.contains("datatype")) return Term::typed_literal(value, node["datatype"]);
    return Term::literal(value);
  }
  throw NetworkError(url, 0, "unexpected SPARQL-JSON term type '" + type + "'");
}

nlohmann::json term_to_json(const Term& t) {
  nlohmann::json node;
  switch (t.kind()) {
    case Term::Kind::kIri:
      node["type"] = "uri";
      break;
    case Term::Kind::kBlank:
      node["type"] = "bnode";
      break;
    case Term::Kind::kLiteral:
      node["type"] = "literal";
      if (!t.language().empty()) {
        node["xml:lang"] = t.language();
      } else if (!t.datatype().empty()) {
        node["datatype"] = t.datatype();
      }
      break;
  }
  node["value"] = t.value();
  return node;
}

// Term from its N-Triples form.
std::optional<Term> parse_term(const std::string& form) {
  try {
    GraphSet g = parse_document("<urn:x:s> <urn:x:p> " + form + " .\n", DocumentFormat::kNQuads);
    if (g.size() == 1) return g.begin()->object();
  } catch (const Error&) {
  }
  return std::nullopt;
}

// Lexical text that every raw update string mentioning `form` must contain,
// when it can be written safely inside a SPARQL string literal.
std::optional<std::string> prefilter_text(const std::string& form) {
  auto term = parse_term(form);
  if (!term || term->is_blank()) return std::nullopt;
  const std::string& v = term->value();
  if (v.empty() || v.find_first_of("\"'\\\n\r") != std::string::npos) return std::nullopt;
  // Non-ASCII text may be written with \u escapes in the raw update string.
  for (unsigned char c : v) {
    if (c >= 0x80) return std::nullopt;
  }
  return v;
}

std::string iri(std::string_view value) { return "<" + std::string(value) + ">"; }

}  // namespace

SparqlClient::SparqlClient(std::string endpoint_url, double timeout_seconds,
                           std::size_t max_concurrent)
    : url_(std::move(endpoint_url)), timeout_(timeout_seconds), max_concurrent_(max_concurrent) {
  auto scheme_end = url_.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfigError, "invalid endpoint URL '" + url_ + "'");
  }
  auto path_start = url_.find('/', scheme_end + 3);
  origin_ = url_.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url_.substr(path_start);
  if (max_concurrent_ == 0) max_concurrent_ = 1;
}

std::vector<Binding> SparqlClient::select(const std::string& query) const {
  {
    std::unique_lock lock(mutex_);
    slot_free_.wait(lock, [&] { return in_flight_ < max_concurrent_; });
    ++in_flight_;
  }
  struct Release {
    const SparqlClient* self;
    ~Release() {
      std::lock_guard lock(self->mutex_);
      --self->in_flight_;
      self->slot_free_.notify_one();
    }
  } release{this};

  httplib::Client client(origin_);
  auto sec = static_cast<time_t>(timeout_);
  auto usec = static_cast<time_t>((timeout_ - static_cast<double>(sec)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  httplib::Headers headers{{"Accept", std::string(kSparqlJson)}};
  httplib::Params params{{"query", query}};

  httplib::Result result = client.Post(path_, headers, params);
  if (!result && (result.error() == httplib::Error::Read ||
                  result.error() == httplib::Error::ConnectionTimeout)) {
    result = client.Post(path_, headers, params);
  }
  if (!result) {
    throw NetworkError(url_, 0, "request failed: " + httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw NetworkError(url_, result->status,
                       "endpoint answered HTTP " + std::to_string(result->status));
  }
  return parse_sparql_json(result->body, url_);
}

std::vector<Binding> parse_sparql_json(const std::string& body, const std::string& url) {
  std::vector<Binding> rows;
  try {
    auto doc = nlohmann::json::parse(body);
    for (const auto& row : doc.at("results").at("bindings")) {
      Binding b;
      for (const auto& [name, node] : row.items()) b.emplace(name, term_from_json(node, url));
      rows.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw NetworkError(url, 0, std::string("malformed SPARQL-JSON results: ") + e.what());
  }
  return rows;
}

std::string to_sparql_json(const std::vector<std::string>& variables,
                           const std::vector<Binding>& rows) {
  nlohmann::json doc;
  doc["head"]["vars"] = variables;
  auto& bindings = doc["results"]["bindings"];
  bindings = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json node = nlohmann::json::object();
    for (const auto& [name, term] : row) node[name] = term_to_json(term);
    bindings.push_back(std::move(node));
  }
  return doc.dump();
}

std::string entity_graph_query(const std::string& entity) {
  return "SELECT ?p ?o ?g WHERE { GRAPH ?g { " + iri(entity) + " ?p ?o } }";
}

std::string entity_default_graph_query(const std::string& entity) {
  return "SELECT ?p ?o WHERE { " + iri(entity) + " ?p ?o }";
}

GraphSet EndpointDataSource::entity_graph(const std::string& entity) const {
  Term subject = Term::iri(entity);
  GraphSet out;
  for (const auto& row : client_->select(entity_graph_query(entity))) {
    out.insert(make_quad(subject, row.at("p"), row.at("o"), row.at("g")));
  }
  // Stores that expose the default graph as the union of named graphs repeat
  // named-graph triples here; only the remaining ones are default-graph quads.
  for (const auto& row : client_->select(entity_default_graph_query(entity))) {
    Triple t{subject, row.at("p"), row.at("o")};
    if (!out.contains_triple(t)) out.insert(make_quad(t.subject, t.predicate, t.object));
  }
  return out;
}

std::set<std::string> EndpointDataSource::subjects_matching(const TriplePattern& pattern) const {
  ParsedQuery q;
  q.distinct = true;
  const Variable* subject = as_variable(pattern.subject);
  std::string name = subject ? subject->name : "s";
  TriplePattern p = pattern;
  if (!subject) p.subject = Variable{name};
  p.optional_group = TriplePattern::kRequired;
  q.projected = {name};
  q.patterns = {p};
  std::set<std::string> out;
  for (const auto& row : client_->select(to_sparql(q))) {
    auto it = row.find(name);
    if (it == row.end() || !it->second.is_iri()) continue;
    if (!subject && it->second != std::get<Term>(pattern.subject)) continue;
    out.insert(it->second.value());
  }
  return out;
}

std::shared_ptr<const EntityHistory> EndpointProvenanceSource::history(
    const std::string& entity) const {
  {
    std::lock_guard lock(mutex_);
    auto it = histories_.find(entity);
    if (it != histories_.end()) return it->second;
  }
  std::string query = "SELECT ?se ?p ?o WHERE { ?se " + iri(vocab::kSpecializationOf) + " " +
                      iri(entity) + " . ?se ?p ?o }";
  GraphSet prov;
  for (const auto& row : client_->select(query)) {
    prov.insert(make_quad(row.at("se"), row.at("p"), row.at("o")));
  }
  std::shared_ptr<const EntityHistory> h;
  if (!prov.empty()) h = std::make_shared<const EntityHistory>(load_history(entity, prov));
  std::lock_guard lock(mutex_);
  return histories_.emplace(entity, h).first->second;
}

std::vector<DeltaHit> EndpointProvenanceSource::scan(
    const std::vector<std::string>& needles) const {
  ParsedQuery q;
  q.distinct = true;
  q.projected = {"e"};
  q.patterns = {
      TriplePattern{Variable{"se"}, Term::iri(std::string(vocab::kSpecializationOf)),
                    Variable{"e"}},
      TriplePattern{Variable{"se"}, Term::iri(std::string(vocab::kHasUpdateQuery)),
                    Variable{"u"}},
  };
  for (const auto& n : needles) {
    if (auto text = prefilter_text(n)) {
      q.filters.push_back(Filter{Filter::Kind::kContains, "u", *text, "", false});
    }
  }
  std::set<std::string> entities;
  for (const auto& row : client_->select(to_sparql(q))) {
    if (row.at("e").is_iri()) entities.insert(row.at("e").value());
  }
  std::vector<DeltaHit> out;
  for (const auto& entity : entities) {
    auto h = history(entity);
    if (!h) continue;
    for (const Snapshot& s : h->snapshots) {
      if (!s.update) continue;
      std::string text = delta_search_text(*s.update);
      bool all = std::all_of(needles.begin(), needles.end(), [&](const std::string& n) {
        return text.find(n) != std::string::npos;
      });
      if (all) out.push_back(DeltaHit{entity, s.id});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void EndpointProvenanceSource::for_each_delta(
    const std::function<void(const DeltaHit&, const std::string&)>& visit) const {
  std::string query = "SELECT DISTINCT ?e WHERE { ?se " + iri(vocab::kSpecializationOf) +
                      " ?e . ?se " + iri(vocab::kHasUpdateQuery) + " ?u }";
  std::set<std::string> entities;
  for (const auto& row : client_->select(query)) {
    if (row.at("e").is_iri()) entities.insert(row.at("e").value());
  }
  for (const auto& entity : entities) {
    auto h = history(entity);
    if (!h) continue;
    for (const Snapshot& s : h->snapshots) {
      if (s.update) visit(DeltaHit{entity, s.id}, delta_search_text(*s.update));
    }
  }
}

}  // namespace chrono_rdf
