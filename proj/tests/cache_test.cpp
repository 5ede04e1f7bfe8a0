#include <fstream>
#include <thread>

#include <gtest/gtest.h>

#include "chrono_rdf/cache.hpp"
#include "chrono_rdf/error.hpp"
#include "chrono_rdf/output.hpp"
#include "chrono_rdf/version_query.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace chrono_rdf;

namespace {

Context cached_context(const GeneratedDataset& ds, const std::filesystem::path& dir) {
  return make_context(ds.data, ds.provenance, {}, std::make_unique<Cache>(dir));
}

std::string document(const version_query::Result& r, const Context& ctx) {
  return dump_document(version_query_document(r, newest_snapshot(r.relevant_entities, ctx)));
}

GraphSet sample_graph(int i) {
  return GraphSet{make_quad(Term::iri("http://x/e" + std::to_string(i)), Term::iri("http://x/p"),
                            Term::literal("v" + std::to_string(i)), Term::iri("http://x/g"))};
}

}  // namespace

TEST(Cache, StoreLookupAndFingerprint) {
  tests::TempDir tmp;
  Cache cache(tmp.path());
  Timestamp t = Timestamp::parse("2021-01-01T00:00:00");
  EXPECT_FALSE(cache.lookup("http://x/e1", t, "f1"));
  cache.store("http://x/e1", t, "f1", sample_graph(1));
  EXPECT_EQ(cache.lookup("http://x/e1", t, "f1"), sample_graph(1));
  EXPECT_FALSE(cache.lookup("http://x/e1", t, "f2"));
  EXPECT_FALSE(cache.lookup("http://x/e1", t + std::chrono::seconds(1), "f1"));
  // A second instance sees the entry through the index file.
  Cache other(tmp.path());
  EXPECT_EQ(other.lookup("http://x/e1", t, "f1"), sample_graph(1));
  EXPECT_EQ(other.entry_count(), 1u);
  other.clear();
  EXPECT_EQ(Cache(tmp.path()).entry_count(), 0u);
  EXPECT_FALSE(Cache(tmp.path()).lookup("http://x/e1", t, "f1"));
}

TEST(Cache, ConcurrentWritersKeepIndexConsistent) {
  tests::TempDir tmp;
  Timestamp t = Timestamp::parse("2021-01-01T00:00:00");
  std::vector<std::thread> writers;
  for (int w = 0; w < 4; ++w) {
    writers.emplace_back([&, w] {
      Cache cache(tmp.path());
      for (int i = 0; i < 25; ++i) cache.store("http://x/e" + std::to_string(i), t, "f", sample_graph(i));
      (void)w;
    });
  }
  for (auto& th : writers) th.join();
  Cache reader(tmp.path());
  for (int i = 0; i < 25; ++i) {
    EXPECT_EQ(reader.lookup("http://x/e" + std::to_string(i), t, "f"), sample_graph(i));
  }
}

TEST(Cache, SameOutputWithAndWithoutCacheAndNoRebuildsOnSecondRun) {
  const auto& ds = tests::generated(42, 200);
  tests::TempDir tmp;
  Context plain = make_context(ds.data, ds.provenance);
  for (const auto& g : tests::generate_queries(ds.ledger, 8, 5)) {
    version_query::Options opts{version_query::Mode::kCrossVersion, std::nullopt, g.interval};
    std::string expected = document(version_query::run(g.text, opts, plain), plain);
    Context first = cached_context(ds, tmp.path());
    auto r1 = version_query::run(g.text, opts, first);
    EXPECT_EQ(document(r1, first), expected) << g.text;
    Context second = cached_context(ds, tmp.path());
    auto r2 = version_query::run(g.text, opts, second);
    EXPECT_EQ(document(r2, second), expected) << g.text;
    EXPECT_EQ(r2.stats.counters.rebuilds, 0u) << g.text;
    EXPECT_EQ(r2.stats.counters.delta_applications, 0u);
    EXPECT_FALSE(r2.stats.counters.cache_warning);
  }
}

TEST(Cache, ChangedHistoryInvalidatesEntries) {
  tests::TempDir tmp;
  std::string id = std::string(tests::kBase) + "id/80178";
  Timestamp at = Timestamp::parse("2021-10-15T00:00:00");
  {
    Context ctx = make_context(tests::doi_fix_data(), tests::doi_fix_provenance(), {},
                               std::make_unique<Cache>(tmp.path()));
    MaterializeCounters c;
    get_or_materialize(id, at, ctx, c);
    EXPECT_EQ(c.rebuilds, 1u);
    MaterializeCounters again;
    get_or_materialize(id, at, ctx, again);
    EXPECT_EQ(again.cache_hits, 1u);
  }
  // Dropping the second snapshot changes the history fingerprint.
  GraphSet prov;
  for (const Quad& q : tests::doi_fix_provenance()) {
    if (q.subject().value().find("/se/2") == std::string::npos &&
        q.predicate().value() != vocab::kInvalidatedAtTime) {
      prov.insert(q);
    }
  }
  Context ctx = make_context(tests::doi_fix_data(), prov, {}, std::make_unique<Cache>(tmp.path()));
  MaterializeCounters c;
  get_or_materialize(id, at, ctx, c);
  EXPECT_EQ(c.rebuilds, 1u);
  EXPECT_EQ(c.cache_hits, 0u);
}

TEST(Cache, FailureFallsBackToMaterialization) {
  const auto& ds = tests::generated(42, 100);
  tests::TempDir tmp;
  auto dir = tmp.path() / "cache";
  Context ctx = cached_context(ds, dir);
  std::filesystem::remove_all(dir);
  std::ofstream(dir) << "not a directory";
  Context plain = make_context(ds.data, ds.provenance);
  std::string q = "SELECT ?s WHERE { ?s <http://purl.org/spar/datacite/usesIdentifierScheme> "
                  "<http://purl.org/spar/datacite/orcid> }";
  auto r = version_query::run(q, {}, ctx);
  EXPECT_TRUE(r.stats.counters.cache_warning);
  EXPECT_EQ(document(r, ctx), document(version_query::run(q, {}, plain), plain));
}

TEST(Cache, UnusableDirectoryThrows) {
  tests::TempDir tmp;
  auto file = tmp.path() / "file";
  std::ofstream(file) << "x";
  try {
    Cache c(file);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCacheIO);
  }
}
