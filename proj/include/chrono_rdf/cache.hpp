#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chrono_rdf/materializer.hpp"
#include "chrono_rdf/provenance.hpp"
#include "chrono_rdf/rdf.hpp"
#include "chrono_rdf/timestamp.hpp"

namespace chrono_rdf {

class Context;

// Reconstructed entity versions on disk: one N-Quads file per entry plus an
// append-only JSON-lines index (entity, time, fingerprint, file) guarded by
// an advisory lock.
class Cache {
 public:
  // Creates the directory if needed. Throws Error(kCacheIO).
  explicit Cache(std::filesystem::path dir);

  // Stored graphs for (entity, time) when the fingerprint matches.
  std::optional<GraphSet> lookup(const std::string& entity, Timestamp time,
                                 const std::string& fingerprint) const;
  // Throws Error(kCacheIO).
  void store(const std::string& entity, Timestamp time, const std::string& fingerprint,
             const GraphSet& graphs);
  // Removes every entry. Throws Error(kCacheIO).
  void clear();

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path index_path() const { return dir_ / "index.jsonl"; }
  std::size_t entry_count() const;

 private:
  struct Entry {
    std::string fingerprint;
    std::string file;
  };
  using Key = std::pair<std::string, long long>;

  void refresh() const;

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  mutable std::map<Key, Entry> entries_;
  mutable std::uintmax_t index_offset_ = 0;
};

struct MaterializeCounters {
  // (entity, time) versions reconstructed rather than served from the cache.
  std::size_t rebuilds = 0;
  std::size_t cache_hits = 0;
  std::size_t delta_applications = 0;
  // Set when the cache failed and materialization was used instead.
  bool cache_warning = false;
};

// Same versions as materialize_span, served from ctx's cache when every one
// of them is stored under the live fingerprint, and stored after
// reconstruction otherwise.
std::vector<VersionedGraph> cached_span(const std::string& entity,
                                        const EntityHistory& history,
                                        const TimeInterval& interval, const Context& ctx,
                                        MaterializeCounters& counters);

// Version of `entity` at `time` through the cache. Throws BeforeCreation or
// NoHistory.
VersionedGraph get_or_materialize(const std::string& entity, Timestamp time,
                                  const Context& ctx, MaterializeCounters& counters);

}  // namespace chrono_rdf
