#pragma once

#include <filesystem>
#include <string>

#include "chrono_rdf/benchgen.hpp"
#include "chrono_rdf/cache.hpp"
#include "chrono_rdf/rdf.hpp"
#include "chrono_rdf/sources.hpp"

namespace chrono_rdf::tests {

inline constexpr const char* kBase = "https://github.com/opencitations/time-agnostic-library/";

std::filesystem::path data_path(const std::string& name);
std::string read_file(const std::filesystem::path& path);

// The identifier fixture: data plus two snapshots of id/80178.
GraphSet doi_fix_data();
GraphSet doi_fix_provenance();
Context doi_fix_context(bool text_index = false);

// Generated dataset, memoized per (seed, entities).
const GeneratedDataset& generated(std::uint64_t seed, std::size_t entities);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace chrono_rdf::tests
