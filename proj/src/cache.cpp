#include "chrono_rdf/cache.hpp"

#include <sys/file.h>
#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chrono_rdf/error.hpp"
#include "chrono_rdf/rdf_io.hpp"
#include "chrono_rdf/sources.hpp"
#include "hash.hpp"

namespace chrono_rdf {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void io_error(const std::string& message) {
  throw Error(ErrorCode::kCacheIO, message);
}

// flock-held descriptor on the index file.
class IndexLock {
 public:
  IndexLock(const fs::path& path, int operation) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND, 0644);
    if (fd_ < 0) io_error("cannot open cache index '" + path.string() + "'");
    if (::flock(fd_, operation) != 0) {
      ::close(fd_);
      io_error("cannot lock cache index '" + path.string() + "'");
    }
  }
  ~IndexLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  IndexLock(const IndexLock&) = delete;
  IndexLock& operator=(const IndexLock&) = delete;
  int fd() const { return fd_; }

 private:
  int fd_;
};

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot read cache file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Cache::Cache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    io_error("cannot create cache directory '" + dir_.string() + "'");
  }
  IndexLock lock(index_path(), LOCK_SH);
}

void Cache::refresh() const {
  IndexLock lock(index_path(), LOCK_SH);
  std::ifstream in(index_path(), std::ios::binary);
  if (!in) io_error("cannot read cache index '" + index_path().string() + "'");
  in.seekg(static_cast<std::streamoff>(index_offset_));
  std::string line;
  while (std::getline(in, line)) {
    if (in.eof()) break;  // partial trailing line
    index_offset_ += line.size() + 1;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      auto time = Timestamp::parse(j.at("time").get<std::string>());
      entries_[{j.at("entity").get<std::string>(), time.unix_seconds()}] =
          Entry{j.at("fingerprint").get<std::string>(), j.at("file").get<std::string>()};
    } catch (const std::exception&) {
      io_error("corrupt cache index line in '" + index_path().string() + "'");
    }
  }
}

std::optional<GraphSet> Cache::lookup(const std::string& entity, Timestamp time,
                                      const std::string& fingerprint) const {
  std::lock_guard guard(mutex_);
  refresh();
  auto it = entries_.find({entity, time.unix_seconds()});
  if (it == entries_.end() || it->second.fingerprint != fingerprint) return std::nullopt;
  fs::path file = dir_ / it->second.file;
  if (!fs::exists(file)) return std::nullopt;
  try {
    return parse_document(read_all(file), DocumentFormat::kNQuads);
  } catch (const SyntaxError&) {
    io_error("corrupt cache entry '" + file.string() + "'");
  }
}

void Cache::store(const std::string& entity, Timestamp time, const std::string& fingerprint,
                  const GraphSet& graphs) {
  std::lock_guard guard(mutex_);
  std::string key = entity + "\n" + time.to_string() + "\n" + fingerprint;
  std::string name = detail::sha256_hex(key).substr(0, 32) + ".nq";
  fs::path file = dir_ / name;
  static std::atomic<unsigned long> sequence{0};
  fs::path tmp = dir_ / (name + ".tmp" + std::to_string(::getpid()) + "-" +
                         std::to_string(sequence.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) io_error("cannot write cache file '" + tmp.string() + "'");
    out << serialize(graphs);
    if (!out) io_error("cannot write cache file '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) io_error("cannot install cache file '" + file.string() + "'");

  nlohmann::json j{{"entity", entity},
                   {"time", time.to_string()},
                   {"fingerprint", fingerprint},
                   {"file", name}};
  std::string line = j.dump() + "\n";
  IndexLock lock(index_path(), LOCK_EX);
  if (::write(lock.fd(), line.data(), line.size()) != static_cast<ssize_t>(line.size())) {
    io_error("cannot append to cache index '" + index_path().string() + "'");
  }
  entries_[{entity, time.unix_seconds()}] = Entry{fingerprint, name};
}

void Cache::clear() {
  std::lock_guard guard(mutex_);
  IndexLock lock(index_path(), LOCK_EX);
  std::error_code ec;
  for (const auto& item : fs::directory_iterator(dir_, ec)) {
    if (item.path().extension() == ".nq") fs::remove(item.path(), ec);
  }
  if (::ftruncate(lock.fd(), 0) != 0) io_error("cannot truncate cache index");
  entries_.clear();
  index_offset_ = 0;
}

std::size_t Cache::entry_count() const {
  std::lock_guard guard(mutex_);
  refresh();
  return entries_.size();
}

namespace {

// Snapshot index range [lowest, highest] that materialize_span returns.
std::optional<std::pair<std::size_t, std::size_t>> span_range(const EntityHistory& h,
                                                              const TimeInterval& interval) {
  const auto& snaps = h.snapshots;
  if (snaps.empty()) return std::nullopt;
  std::size_t lowest = 0;
  if (interval.start) lowest = h.index_at(*interval.start).value_or(0);
  if (interval.end && snaps[lowest].generated_at > *interval.end) return std::nullopt;
  std::size_t highest = snaps.size() - 1;
  if (interval.end) highest = *h.index_at(*interval.end);
  return std::pair{lowest, highest};
}

}  // namespace

std::vector<VersionedGraph> cached_span(const std::string& entity, const EntityHistory& history,
                                        const TimeInterval& interval, const Context& ctx,
                                        MaterializeCounters& counters) {
  auto range = span_range(history, interval);
  if (!range) return {};
  const auto& snaps = history.snapshots;
  Cache* cache = ctx.cache();
  std::string fingerprint;
  if (cache) {
    try {
      fingerprint = history.fingerprint();
      std::vector<VersionedGraph> hits;
      for (std::size_t k = range->first; k <= range->second; ++k) {
        auto graphs = cache->lookup(entity, snaps[k].generated_at, fingerprint);
        if (!graphs) break;
        hits.push_back(VersionedGraph{entity, snaps[k], std::move(*graphs), k + 1 < snaps.size()});
      }
      if (hits.size() == range->second - range->first + 1) {
        counters.cache_hits += hits.size();
        return hits;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCacheIO) throw;
      counters.cache_warning = true;
      cache = nullptr;
    }
  }
  MaterializeStats stats;
  GraphSet present = ctx.data().entity_graph(entity);
  auto versions = materialize_span(entity, present, history, interval, &stats);
  counters.delta_applications += stats.delta_applications;
  counters.rebuilds += versions.size();
  if (cache) {
    try {
      for (const auto& v : versions) {
        if (!cache->lookup(entity, v.snapshot.generated_at, fingerprint)) {
          cache->store(entity, v.snapshot.generated_at, fingerprint, v.graphs);
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCacheIO) throw;
      counters.cache_warning = true;
    }
  }
  return versions;
}

VersionedGraph get_or_materialize(const std::string& entity, Timestamp time, const Context& ctx,
                                  MaterializeCounters& counters) {
  auto history = ctx.provenance().history(entity);
  if (!history || history->snapshots.empty()) {
    throw Error(ErrorCode::kNoHistory, "no provenance snapshots for <" + entity + ">");
  }
  auto idx = history->index_at(time);
  if (!idx) {
    throw Error(ErrorCode::kBeforeCreation,
                "<" + entity + "> did not exist at " + time.to_string() +
                    "; it was created at " +
                    history->snapshots.front().generated_at.to_string());
  }
  const Snapshot& snap = history->snapshots[*idx];
  bool reconstructed = *idx + 1 < history->snapshots.size();
  Cache* cache = ctx.cache();
  std::string fingerprint;
  if (cache) {
    try {
      fingerprint = history->fingerprint();
      if (auto graphs = cache->lookup(entity, snap.generated_at, fingerprint)) {
        ++counters.cache_hits;
        return VersionedGraph{entity, snap, std::move(*graphs), reconstructed};
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCacheIO) throw;
      counters.cache_warning = true;
      cache = nullptr;
    }
  }
  MaterializeStats stats;
  GraphSet present = ctx.data().entity_graph(entity);
  auto m = materialize_at(entity, time, present, *history, &stats);
  counters.delta_applications += stats.delta_applications;
  ++counters.rebuilds;
  if (cache) {
    try {
      cache->store(entity, snap.generated_at, fingerprint, m.version.graphs);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCacheIO) throw;
      counters.cache_warning = true;
    }
  }
  return std::move(m.version);
}

}  // namespace chrono_rdf
