#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chrono_rdf/provenance.hpp"
#include "chrono_rdf/rdf.hpp"
#include "chrono_rdf/sparql.hpp"

namespace chrono_rdf {

class Cache;

inline constexpr std::size_t kDefaultExplosionLimit = 10000;
inline constexpr const char* kConfigEnvVar = "CHRONO_RDF_CONFIG";

// Each data/provenance entry is a file path or an http(s) endpoint URL.
struct SourceConfig {
  std::vector<std::string> data;
  std::vector<std::string> provenance;
  std::optional<std::string> cache_dir;
  bool text_index = false;
  std::size_t explosion_limit = kDefaultExplosionLimit;
  double http_timeout = 30.0;
  std::size_t http_concurrency = 4;

  // Throws ConfigError.
  void validate() const;
};

// Reads the JSON config file. Relative file paths are resolved against the
// config file's directory. Throws ConfigError.
SourceConfig load_config_file(const std::string& path);
bool is_endpoint_url(std::string_view location);

// A snapshot whose update string matched a textual search.
struct DeltaHit {
  std::string entity;
  std::string snapshot;

  friend auto operator<=>(const DeltaHit&, const DeltaHit&) = default;
};

// Present-state data.
class DataSource {
 public:
  virtual ~DataSource() = default;
  // Quads whose subject is `entity` (not yet blank-scoped).
  virtual GraphSet entity_graph(const std::string& entity) const = 0;
  // IRI subjects of current triples matching `pattern`.
  virtual std::set<std::string> subjects_matching(const TriplePattern& pattern) const = 0;
  // Whole dataset when held locally, nullptr otherwise.
  virtual const GraphSet* full_graph() const { return nullptr; }
};

// Provenance snapshots and their update strings.
class ProvenanceSource {
 public:
  virtual ~ProvenanceSource() = default;
  // nullptr when the entity has no snapshots. Throws BrokenChain / BadDelta.
  virtual std::shared_ptr<const EntityHistory> history(const std::string& entity) const = 0;
  // Linear scan: snapshots whose delta search text contains every needle.
  virtual std::vector<DeltaHit> scan(const std::vector<std::string>& needles) const = 0;
  // Visits every snapshot that carries an update, with its search text.
  virtual void for_each_delta(
      const std::function<void(const DeltaHit&, const std::string&)>& visit) const = 0;
};

class LocalDataSource : public DataSource {
 public:
  explicit LocalDataSource(GraphSet data) : data_(std::move(data)) {}
  GraphSet entity_graph(const std::string& entity) const override;
  std::set<std::string> subjects_matching(const TriplePattern& pattern) const override;
  const GraphSet* full_graph() const override { return &data_; }

 private:
  GraphSet data_;
};

class LocalProvenanceSource : public ProvenanceSource {
 public:
  explicit LocalProvenanceSource(GraphSet provenance);
  std::shared_ptr<const EntityHistory> history(const std::string& entity) const override;
  std::vector<DeltaHit> scan(const std::vector<std::string>& needles) const override;
  void for_each_delta(
      const std::function<void(const DeltaHit&, const std::string&)>& visit) const override;

  const GraphSet& graph() const { return provenance_; }
  std::vector<std::string> entities() const;

 private:
  const std::map<DeltaHit, std::string>& search_texts() const;

  GraphSet provenance_;
  std::map<std::string, std::vector<std::string>> snapshots_by_entity_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<const EntityHistory>> histories_;
  mutable std::mutex texts_mutex_;
  mutable std::optional<std::map<DeltaHit, std::string>> search_texts_;
};

// Inverted index from N-Triples term forms to the snapshots whose delta
// mentions them.
class TextIndex {
 public:
  static TextIndex build(const ProvenanceSource& provenance);

  // Snapshots whose search text contains `form`; identical to a linear scan.
  std::set<DeltaHit> lookup(std::string_view form) const;
  // Conjunctive lookup.
  std::set<DeltaHit> search(const std::vector<std::string>& forms) const;
  std::size_t term_count() const { return postings_.size(); }

 private:
  std::map<std::string, std::set<DeltaHit>, std::less<>> postings_;
};

struct ContextOptions {
  bool text_index = false;
  std::size_t explosion_limit = kDefaultExplosionLimit;
};

// Everything a query needs: data, provenance, optional cache and text index.
class Context {
 public:
  Context(std::unique_ptr<DataSource> data, std::unique_ptr<ProvenanceSource> provenance,
          ContextOptions options = {}, std::unique_ptr<Cache> cache = nullptr);
  ~Context();
  Context(Context&&) noexcept;

  const DataSource& data() const { return *data_; }
  const ProvenanceSource& provenance() const { return *provenance_; }
  Cache* cache() const { return cache_.get(); }
  const ContextOptions& options() const { return options_; }
  void set_text_index(bool enabled) { options_.text_index = enabled; }

  // Conjunctive textual search over delta strings, through the text index
  // when enabled (built on first use) and by linear scan otherwise.
  std::set<DeltaHit> search_deltas(const std::vector<std::string>& forms) const;
  bool index_built() const;

 private:
  std::unique_ptr<DataSource> data_;
  std::unique_ptr<ProvenanceSource> provenance_;
  ContextOptions options_;
  std::unique_ptr<Cache> cache_;
  mutable std::unique_ptr<std::mutex> index_mutex_;
  mutable std::unique_ptr<TextIndex> index_;
};

// In-memory context over already parsed graphs.
Context make_context(GraphSet data, GraphSet provenance, ContextOptions options = {},
                     std::unique_ptr<Cache> cache = nullptr);

// Parses file sources and wraps endpoint sources. Throws ConfigError,
// NetworkError or SyntaxError.
Context load_sources(const SourceConfig& config);

// Parses one or more RDF files (format from extension) into one set.
GraphSet load_graph_files(const std::vector<std::string>& paths);

}  // namespace chrono_rdf
