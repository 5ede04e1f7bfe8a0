#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "chrono_rdf/provenance.hpp"
#include "chrono_rdf/rdf.hpp"
#include "chrono_rdf/timestamp.hpp"

namespace chrono_rdf {

namespace bench_vocab {
inline constexpr std::string_view kExpression = "http://purl.org/spar/fabio/Expression";
inline constexpr std::string_view kTitle = "http://purl.org/dc/terms/title";
inline constexpr std::string_view kCites = "http://purl.org/spar/cito/cites";
inline constexpr std::string_view kHasIdentifier = "http://purl.org/spar/datacite/hasIdentifier";
inline constexpr std::string_view kIdentifier = "http://purl.org/spar/datacite/Identifier";
inline constexpr std::string_view kUsesIdentifierScheme =
    "http://purl.org/spar/datacite/usesIdentifierScheme";
inline constexpr std::string_view kDoi = "http://purl.org/spar/datacite/doi";
inline constexpr std::string_view kOrcid = "http://purl.org/spar/datacite/orcid";
inline constexpr std::string_view kHasLiteralValue =
    "http://www.essepuntato.it/2010/06/literalreification/hasLiteralValue";
}  // namespace bench_vocab

struct SnapshotDistribution {
  double mean = 20.0;
  double stdev = 8.0;
  int min = 2;
  int max = 35;
};

struct ChangeMix {
  double literal_edit = 0.45;
  double triple_add = 0.25;
  double triple_remove = 0.25;
  double entity_delete = 0.05;
};

struct GenSpec {
  std::uint64_t seed = 42;
  std::size_t n_entities = 1000;
  SnapshotDistribution snapshots;
  ChangeMix change_mix;
  std::string base_iri = "https://w3id.org/oc/bench/";
  Timestamp start = Timestamp::from_unix(1577836800);  // 2020-01-01T00:00:00

  // Throws Error(kSpecError).
  void validate() const;
};

struct LedgerVersion {
  std::string snapshot;
  Timestamp time;
  GraphSet graph;
  // Change from the previous version (the whole graph for the first one).
  DeltaPair delta;
};

// Every full version of every generated entity, kept independently of the
// provenance encoding.
struct OracleLedger {
  std::map<std::string, std::vector<LedgerVersion>> entities;

  // Entity state at t, or nullptr before creation.
  const LedgerVersion* version_at(const std::string& entity, Timestamp t) const;
  // Union of every entity's state at t.
  GraphSet dataset_at(Timestamp t) const;
  // Same, restricted to `entities`.
  GraphSet dataset_at(Timestamp t, const std::set<std::string>& entities) const;
  std::vector<Timestamp> all_times() const;
};

struct GeneratedDataset {
  GraphSet data;
  GraphSet provenance;
  OracleLedger ledger;
};

// Deterministic for a given spec. Throws Error(kSpecError).
GeneratedDataset generate(const GenSpec& spec);

// data.nq, provenance.nq and ledger/ (one N-Quads file per version plus
// index.json). Throws Error(kConfigError) on write failure.
void write_dataset(const GeneratedDataset& dataset, const std::filesystem::path& dir);

}  // namespace chrono_rdf
