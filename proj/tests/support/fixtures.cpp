#include "fixtures.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "chrono_rdf/rdf_io.hpp"

namespace chrono_rdf::tests {

std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(TEST_DATA_DIR) / name;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

GraphSet doi_fix_data() {
  return parse_document(read_file(data_path("doi_fix_data.ttl")), DocumentFormat::kTurtle);
}

GraphSet doi_fix_provenance() {
  return parse_document(read_file(data_path("doi_fix_prov.ttl")), DocumentFormat::kTurtle);
}

Context doi_fix_context(bool text_index) {
  return make_context(doi_fix_data(), doi_fix_provenance(),
                      ContextOptions{text_index, kDefaultExplosionLimit});
}

const GeneratedDataset& generated(std::uint64_t seed, std::size_t entities) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint64_t, std::size_t>, GeneratedDataset> memo;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(seed, entities);
  auto it = memo.find(key);
  if (it == memo.end()) {
    GenSpec spec;
    spec.seed = seed;
    spec.n_entities = entities;
    it = memo.emplace(key, generate(spec)).first;
  }
  return it->second;
}

TempDir::TempDir() {
  std::random_device rd;
  auto base = std::filesystem::temp_directory_path();
  do {
    path_ = base / ("chrono-rdf-test-" + std::to_string(rd()));
  } while (!std::filesystem::create_directory(path_));
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace chrono_rdf::tests
