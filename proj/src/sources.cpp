#include "chrono_rdf/sources.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chrono_rdf/cache.hpp"
#include "chrono_rdf/error.hpp"
#include "chrono_rdf/rdf_io.hpp"
#include "chrono_rdf/sparql_client.hpp"

namespace chrono_rdf {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::kConfigError, message);
}

std::vector<std::string> string_list(const nlohmann::json& value, const char* key) {
  if (value.is_string()) return {value.get<std::string>()};
  if (!value.is_array()) config_error(std::string("'") + key + "' must be a string or a list");
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) config_error(std::string("'") + key + "' entries must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string resolve_location(const std::string& location, const fs::path& base) {
  if (is_endpoint_url(location)) return location;
  fs::path p(location);
  if (p.is_relative()) p = base / p;
  return p.lexically_normal().string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

bool is_endpoint_url(std::string_view location) {
  return location.starts_with("http://") || location.starts_with("https://");
}

void SourceConfig::validate() const {
  if (data.empty()) config_error("at least one data source is required");
  if (provenance.empty()) config_error("at least one provenance source is required");
  if (!(http_timeout > 0)) config_error("http_timeout must be positive");
  if (explosion_limit == 0) config_error("explosion_limit must be positive");
  if (http_concurrency == 0) config_error("http_concurrency must be positive");
}

SourceConfig load_config_file(const std::string& path) {
  std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    config_error("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) config_error("config '" + path + "' must be a JSON object");
  fs::path base = fs::path(path).parent_path();
  SourceConfig config;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "data") {
        for (auto& s : string_list(value, "data")) config.data.push_back(resolve_location(s, base));
      } else if (key == "provenance") {
        for (auto& s : string_list(value, "provenance")) {
          config.provenance.push_back(resolve_location(s, base));
        }
      } else if (key == "cache_dir") {
        if (!value.is_null()) config.cache_dir = resolve_location(value.get<std::string>(), base);
      } else if (key == "text_index") {
        config.text_index = value.get<bool>();
      } else if (key == "explosion_limit") {
        config.explosion_limit = value.get<std::size_t>();
      } else if (key == "http_timeout") {
        config.http_timeout = value.get<double>();
      } else if (key == "http_concurrency") {
        config.http_concurrency = value.get<std::size_t>();
      } else {
        config_error("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    config_error("config '" + path + "': " + e.what());
  }
  return config;
}

GraphSet LocalDataSource::entity_graph(const std::string& entity) const {
  return data_.subject_graph(Term::iri(entity));
}

std::set<std::string> LocalDataSource::subjects_matching(const TriplePattern& pattern) const {
  std::set<std::string> out;
  match_pattern(pattern, data_, {}, [&](const Binding& b) {
    const Term* subject = as_term(pattern.subject);
    if (!subject) subject = &b.at(std::get<Variable>(pattern.subject).name);
    if (subject->is_iri()) out.insert(subject->value());
  });
  return out;
}

LocalProvenanceSource::LocalProvenanceSource(GraphSet provenance)
    : provenance_(std::move(provenance)) {
  for (const Quad& q : provenance_) {
    if (q.predicate().value() == vocab::kSpecializationOf && q.object().is_iri() &&
        q.subject().is_iri()) {
      auto& ids = snapshots_by_entity_[q.object().value()];
      if (ids.empty() || ids.back() != q.subject().value()) ids.push_back(q.subject().value());
    }
  }
  for (auto& [_, ids] : snapshots_by_entity_) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
}

std::vector<std::string> LocalProvenanceSource::entities() const {
  std::vector<std::string> out;
  for (const auto& [entity, _] : snapshots_by_entity_) out.push_back(entity);
  return out;
}

std::shared_ptr<const EntityHistory> LocalProvenanceSource::history(
    const std::string& entity) const {
  auto ids = snapshots_by_entity_.find(entity);
  if (ids == snapshots_by_entity_.end()) return nullptr;
  std::lock_guard lock(mutex_);
  auto& slot = histories_[entity];
  if (!slot) {
    slot = std::make_shared<const EntityHistory>(load_history(entity, ids->second, provenance_));
  }
  return slot;
}

const std::map<DeltaHit, std::string>& LocalProvenanceSource::search_texts() const {
  std::lock_guard lock(texts_mutex_);
  if (!search_texts_) {
    std::map<DeltaHit, std::string> texts;
    for (const auto& [entity, _] : snapshots_by_entity_) {
      auto h = history(entity);
      for (const Snapshot& s : h->snapshots) {
        if (s.update) texts.emplace(DeltaHit{entity, s.id}, delta_search_text(*s.update));
      }
    }
    search_texts_ = std::move(texts);
  }
  return *search_texts_;
}

std::vector<DeltaHit> LocalProvenanceSource::scan(const std::vector<std::string>& needles) const {
  std::vector<DeltaHit> out;
  for (const auto& [hit, text] : search_texts()) {
    bool all = std::all_of(needles.begin(), needles.end(), [&](const std::string& n) {
      return text.find(n) != std::string::npos;
    });
    if (all) out.push_back(hit);
  }
  return out;
}

void LocalProvenanceSource::for_each_delta(
    const std::function<void(const DeltaHit&, const std::string&)>& visit) const {
  for (const auto& [hit, text] : search_texts()) visit(hit, text);
}

Context::Context(std::unique_ptr<DataSource> data, std::unique_ptr<ProvenanceSource> provenance,
                 ContextOptions options, std::unique_ptr<Cache> cache)
    : data_(std::move(data)),
      provenance_(std::move(provenance)),
      options_(options),
      cache_(std::move(cache)),
      index_mutex_(std::make_unique<std::mutex>()) {}

Context::~Context() = default;
Context::Context(Context&&) noexcept = default;

std::set<DeltaHit> Context::search_deltas(const std::vector<std::string>& forms) const {
  if (options_.text_index && !forms.empty()) {
    std::lock_guard lock(*index_mutex_);
    if (!index_) index_ = std::make_unique<TextIndex>(TextIndex::build(*provenance_));
    return index_->search(forms);
  }
  auto hits = provenance_->scan(forms);
  return {hits.begin(), hits.end()};
}

bool Context::index_built() const {
  std::lock_guard lock(*index_mutex_);
  return index_ != nullptr;
}

Context make_context(GraphSet data, GraphSet provenance, ContextOptions options,
                     std::unique_ptr<Cache> cache) {
  return Context(std::make_unique<LocalDataSource>(std::move(data)),
                 std::make_unique<LocalProvenanceSource>(std::move(provenance)), options,
                 std::move(cache));
}

GraphSet load_graph_files(const std::vector<std::string>& paths) {
  GraphSet out;
  for (const auto& path : paths) {
    auto format = format_for_path(path);
    if (!format) config_error("unrecognized RDF file extension: '" + path + "'");
    GraphSet part = parse_document(read_file(path), *format);
    if (out.empty()) {
      out = std::move(part);
    } else {
      out.insert_all(part);
    }
  }
  return out;
}

namespace {

template <typename Local, typename Remote>
auto open_source(const std::vector<std::string>& locations, const char* what,
                 const SourceConfig& config) {
  using Base = std::conditional_t<std::is_same_v<Local, LocalDataSource>, DataSource,
                                  ProvenanceSource>;
  std::size_t remote = std::count_if(locations.begin(), locations.end(),
                                     [](const std::string& l) { return is_endpoint_url(l); });
  if (remote > 0) {
    if (locations.size() > 1) {
      config_error(std::string("an endpoint ") + what +
                   " source cannot be combined with other sources");
    }
    auto client = std::make_shared<SparqlClient>(locations.front(), config.http_timeout,
                                                 config.http_concurrency);
    return std::unique_ptr<Base>(std::make_unique<Remote>(std::move(client)));
  }
  for (const auto& l : locations) {
    if (!fs::exists(l)) config_error(std::string(what) + " file '" + l + "' does not exist");
  }
  return std::unique_ptr<Base>(std::make_unique<Local>(load_graph_files(locations)));
}

}  // namespace

Context load_sources(const SourceConfig& config) {
  config.validate();
  auto data = open_source<LocalDataSource, EndpointDataSource>(config.data, "data", config);
  auto prov = open_source<LocalProvenanceSource, EndpointProvenanceSource>(config.provenance,
                                                                           "provenance", config);
  std::unique_ptr<Cache> cache;
  if (config.cache_dir) cache = std::make_unique<Cache>(*config.cache_dir);
  return Context(std::move(data), std::move(prov),
                 ContextOptions{config.text_index, config.explosion_limit}, std::move(cache));
}

}  // namespace chrono_rdf
