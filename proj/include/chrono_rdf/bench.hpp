#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chrono_rdf/benchgen.hpp"

namespace chrono_rdf {

struct BenchOptions {
  std::size_t repetitions = 10;
  // Known-subject workloads run once per sampled entity.
  std::size_t sample_entities = 20;
  std::uint64_t seed = 42;
  bool text_index = false;
};

struct BenchRow {
  std::string workload;  // VM-one, VM-all, SV, CV, SD, CD
  std::string query;     // "SP?" (known subject) or "?PO" (unknown subject)
  std::size_t executions = 0;
  double mean_s = 0;
  double stdev_s = 0;
  // mean_s / snapshots_involved.
  double overhead_s = 0;
  double snapshots_involved = 0;
  double entities_involved = 0;
  // Same query on the latest version only.
  double baseline_s = 0;
  // Results matched the ledger before timing.
  bool verified = false;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  long peak_rss_kb = 0;
  std::size_t entities = 0;
  std::size_t snapshots = 0;
  std::string note;
};

// Runs the ten workload classes over a generated dataset.
BenchReport bench_run(const GeneratedDataset& dataset, const BenchOptions& options);

std::string report_csv(const BenchReport& report);
nlohmann::json report_json(const BenchReport& report);

// Query texts used by the harness.
std::string known_subject_query(const std::string& entity);
std::string unknown_subject_query();

}  // namespace chrono_rdf
