#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "chrono_rdf/benchgen.hpp"
#include "chrono_rdf/error.hpp"
#include "chrono_rdf/materializer.hpp"
#include "chrono_rdf/rdf_io.hpp"
#include "fixtures.hpp"

using namespace chrono_rdf;

TEST(Benchgen, DeterministicForSeed) {
  GenSpec spec;
  spec.n_entities = 80;
  auto a = generate(spec);
  auto b = generate(spec);
  EXPECT_EQ(serialize(a.data), serialize(b.data));
  EXPECT_EQ(serialize(a.provenance), serialize(b.provenance));
  spec.seed = 43;
  EXPECT_NE(serialize(generate(spec).provenance), serialize(a.provenance));
}

TEST(Benchgen, SnapshotCountsWithinBounds) {
  const auto& ds = tests::generated(42, 1000);
  ASSERT_EQ(ds.ledger.entities.size(), 1000u);
  double total = 0;
  for (const auto& [e, versions] : ds.ledger.entities) {
    EXPECT_GE(versions.size(), 2u) << e;
    EXPECT_LE(versions.size(), 35u) << e;
    total += static_cast<double>(versions.size());
    for (std::size_t k = 1; k < versions.size(); ++k) EXPECT_LT(versions[k - 1].time, versions[k].time);
  }
  EXPECT_NEAR(total / 1000.0, 20.0, 1.5);
}

TEST(Benchgen, LedgerEndsAtCurrentData) {
  const auto& ds = tests::generated(42, 300);
  std::size_t deleted = 0;
  for (const auto& [e, versions] : ds.ledger.entities) {
    EXPECT_EQ(versions.back().graph, current_graph(e, ds.data)) << e;
    if (versions.back().graph.empty()) ++deleted;
    // Deletion only happens at the last snapshot.
    for (std::size_t k = 0; k + 1 < versions.size(); ++k) EXPECT_FALSE(versions[k].graph.empty());
  }
  EXPECT_GT(deleted, 0u);
  EXPECT_LT(deleted, 60u);
}

TEST(Benchgen, ChangeMixRoughlyHonoured) {
  const auto& ds = tests::generated(42, 1000);
  std::size_t literal = 0, add = 0, remove = 0, changes = 0;
  auto is_literal_property = [](const Quad& q) {
    return q.predicate().value() == bench_vocab::kHasLiteralValue ||
           q.predicate().value() == bench_vocab::kTitle;
  };
  for (const auto& [e, versions] : ds.ledger.entities) {
    for (std::size_t k = 1; k < versions.size(); ++k) {
      const auto& d = versions[k].delta;
      if (versions[k].graph.empty()) continue;
      ++changes;
      bool lit_edit = d.added.size() == 1 && d.removed.size() == 1 &&
                      is_literal_property(*d.added.begin()) &&
                      is_literal_property(*d.removed.begin());
      if (lit_edit) {
        ++literal;
      } else if (d.removed.empty()) {
        ++add;
      } else if (d.added.empty()) {
        ++remove;
      }
    }
  }
  ASSERT_GT(changes, 10000u);
  double n = static_cast<double>(changes);
  // Deletion's share is redistributed over the other three kinds. Some
  // identifier edits swap a scheme, which counts as neither add nor remove.
  EXPECT_NEAR(literal / n, 0.45 / 0.95, 0.08);
  EXPECT_GT(add / n, 0.10);
  EXPECT_GT(remove / n, 0.10);
}

TEST(Benchgen, InvalidSpecs) {
  auto code = [](GenSpec s) {
    try {
      generate(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kConfigError;
  };
  GenSpec zero;
  zero.n_entities = 0;
  EXPECT_EQ(code(zero), ErrorCode::kSpecError);
  GenSpec mix;
  mix.change_mix.literal_edit = 0.9;
  EXPECT_EQ(code(mix), ErrorCode::kSpecError);
  GenSpec bounds;
  bounds.snapshots.max = 1;
  EXPECT_EQ(code(bounds), ErrorCode::kSpecError);
}

TEST(Benchgen, WritesDatasetFiles) {
  GenSpec spec;
  spec.n_entities = 20;
  auto ds = generate(spec);
  tests::TempDir tmp;
  write_dataset(ds, tmp.path());
  EXPECT_EQ(parse_document(tests::read_file(tmp.path() / "data.nq"), DocumentFormat::kNQuads), ds.data);
  EXPECT_EQ(parse_document(tests::read_file(tmp.path() / "provenance.nq"), DocumentFormat::kNQuads),
            ds.provenance);
  auto index = nlohmann::json::parse(tests::read_file(tmp.path() / "ledger" / "index.json"));
  EXPECT_FALSE(index.empty());
}
