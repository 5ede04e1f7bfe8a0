#include <gtest/gtest.h>

#include "chrono_rdf/error.hpp"
#include "chrono_rdf/version_query.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace chrono_rdf;

namespace {

std::string query_file(const std::string& name) {
  return tests::read_file(tests::data_path(name));
}

std::vector<bool> engine_joined(const ParsedQuery& q) {
  QueryPlan plan = classify(q);
  std::vector<bool> out;
  std::size_t j = 0, i = 0;
  for (const auto& p : q.patterns) {
    if (j < plan.joined.size() && plan.joined[j] == p) {
      out.push_back(true);
      ++j;
    } else {
      EXPECT_EQ(plan.isolated.at(i++), p);
      out.push_back(false);
    }
  }
  return out;
}

const std::vector<std::string> kShapes = {
    "SELECT * WHERE { <http://x/a> <http://x/p> ?b . ?b <http://x/q> ?c . ?c <http://x/r> ?d }",
    "SELECT * WHERE { <http://x/a> <http://x/p> ?b . ?x <http://x/q> ?y }",
    "SELECT * WHERE { ?x <http://x/q> ?y . <http://x/a> <http://x/p> ?y }",
    "SELECT * WHERE { ?x <http://x/q> ?y . ?y <http://x/q> ?z . <http://x/a> <http://x/p> ?z }",
    "SELECT * WHERE { ?x <http://x/q> \"v\" }",
    "SELECT * WHERE { ?x a <http://x/C> . ?x <http://x/p> ?y }",
    "SELECT * WHERE { <http://x/a> ?p ?o . ?s ?p2 ?o2 . ?s <http://x/q> \"k\" }",
    "SELECT * WHERE { <http://x/a> <http://x/p> ?b . OPTIONAL { ?b <http://x/q> ?c } }",
    "SELECT * WHERE { <http://x/a> ?p ?o . ?o ?p2 ?o2 . ?x <http://x/r> ?p2 }",
    "SELECT * WHERE { ?s ?p <http://x/o> . ?t ?p ?u }",
};

}  // namespace

TEST(Classify, AgreesWithBreadthFirstSearch) {
  for (const auto& text : kShapes) {
    ParsedQuery q = parse_select(text);
    EXPECT_EQ(engine_joined(q), tests::brute_force_joined(q)) << text;
  }
}

TEST(Classify, UnboundedQuery) {
  for (const char* text : {"SELECT * WHERE { ?s ?p ?o }",
                           "SELECT * WHERE { <http://x/a> ?p ?o . ?s ?p2 ?o2 }"}) {
    try {
      classify(parse_select(text));
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kUnboundedQuery);
    }
  }
}

TEST(VersionQuery, TrailingDotOnFixture) {
  Context ctx = tests::doi_fix_context();
  auto r = version_query::run(query_file("trailing_dot.rq"), {}, ctx);
  ASSERT_EQ(r.results.size(), 2u);
  auto first = r.results.at(Timestamp::parse("2021-10-10T23:44:45"));
  ASSERT_EQ(first.size(), 1u);
  EXPECT_EQ(first.rows()[0].at("literal"), Term::literal("10.1111/j.1365-2648.2012.06023.x."));
  EXPECT_TRUE(r.results.at(Timestamp::parse("2021-10-19T19:55:55")).empty());
  EXPECT_EQ(r.relevant_entities, std::set<std::string>{std::string(tests::kBase) + "id/80178"});
}

TEST(VersionQuery, KnownSubjectOnFixture) {
  Context ctx = tests::doi_fix_context();
  auto r = version_query::run(query_file("cites_chain.rq"), {}, ctx);
  EXPECT_EQ(r.relevant_entities.size(), 7u);
  version_query::Options single{version_query::Mode::kSingleVersion,
                                Timestamp::parse("2021-10-15T00:00:00"), {}};
  auto s = version_query::run(query_file("identifiers.rq"), single, ctx);
  ASSERT_EQ(s.results.size(), 1u);
  EXPECT_EQ(s.results.begin()->first, Timestamp::parse("2021-10-10T23:44:45"));
  EXPECT_EQ(s.results.begin()->second.size(), 1u);
}

TEST(VersionQuery, ExplosionLimit) {
  GraphSet data = tests::doi_fix_data();
  Context ctx = make_context(data, tests::doi_fix_provenance(), ContextOptions{false, 3});
  try {
    version_query::run(query_file("cites_chain.rq"), {}, ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExplosionLimit);
  }
}

TEST(VersionQuery, CrossVersionMatchesLedger) {
  const auto& ds = tests::generated(42, 300);
  Context ctx = make_context(ds.data, ds.provenance);
  std::size_t nonempty = 0;
  for (const auto& g : tests::generate_queries(ds.ledger, 16, 9)) {
    ParsedQuery q = parse_select(g.text);
    version_query::Options opts{version_query::Mode::kCrossVersion, std::nullopt, g.interval};
    auto r = version_query::run(q, opts, ctx);
    auto relevant = tests::oracle_relevant(q, ds.ledger, g.interval);
    EXPECT_EQ(r.relevant_entities, relevant) << g.text;
    auto times = tests::oracle_times(ds.ledger, relevant, g.interval);
    std::set<Timestamp> keys;
    for (const auto& [t, _] : r.results) keys.insert(t);
    EXPECT_EQ(keys, times) << g.text;
    for (const auto& [t, solutions] : r.results) {
      GraphSet expected_data = ds.ledger.dataset_at(t, relevant);
      EXPECT_EQ(solutions, evaluate(q, expected_data)) << g.text << " at " << t.to_string();
      nonempty += !solutions.empty();
    }
  }
  EXPECT_GT(nonempty, 50u);
}

TEST(VersionQuery, SingleVersionMatchesLedger) {
  const auto& ds = tests::generated(42, 300);
  Context ctx = make_context(ds.data, ds.provenance);
  auto times = ds.ledger.all_times();
  auto queries = tests::generate_queries(ds.ledger, 16, 17);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    ParsedQuery q = parse_select(queries[i].text);
    Timestamp at = times[(i * 7919) % times.size()];
    version_query::Options opts{version_query::Mode::kSingleVersion, at, {}};
    auto r = version_query::run(q, opts, ctx);
    auto relevant = tests::oracle_relevant(q, ds.ledger, TimeInterval::at(at));
    EXPECT_EQ(r.relevant_entities, relevant) << queries[i].text;
    ASSERT_LE(r.results.size(), 1u);
    if (r.results.empty()) continue;
    const auto& [key, solutions] = *r.results.begin();
    EXPECT_LE(key, at);
    EXPECT_EQ(solutions, evaluate(q, ds.ledger.dataset_at(at, relevant))) << queries[i].text;
  }
}

TEST(VersionQuery, SmallResultsMatchBruteForce) {
  const auto& ds = tests::generated(42, 300);
  Context ctx = make_context(ds.data, ds.provenance);
  std::size_t compared = 0;
  for (const auto& g : tests::generate_queries(ds.ledger, 24, 23)) {
    ParsedQuery q = parse_select(g.text);
    if (q.patterns.size() > 2) continue;
    auto r = version_query::run(q, {version_query::Mode::kCrossVersion, std::nullopt, g.interval}, ctx);
    for (const auto& [t, solutions] : r.results) {
      GraphSet data = ds.ledger.dataset_at(t, r.relevant_entities);
      if (data.size() > 150) continue;
      EXPECT_EQ(solutions, tests::brute_force_evaluate(q, data)) << g.text;
      ++compared;
    }
  }
  EXPECT_GT(compared, 0u);
}

TEST(AlignedTimeline, SweepEqualsPointLookups) {
  const auto& ds = tests::generated(42, 100);
  Context ctx = make_context(ds.data, ds.provenance);
  QueryPlan plan = classify(parse_select(
      "SELECT * WHERE { ?s <http://purl.org/spar/datacite/usesIdentifierScheme> ?o }"));
  Explication ex = explicate(plan, ctx, TimeInterval::unbounded(), 10000);
  std::vector<EntityStates> states;
  for (auto& [_, s] : ex.states) states.push_back(s);
  AlignedTimeline timeline = align_and_merge(states, TimeInterval::unbounded());
  ASSERT_FALSE(timeline.times().empty());
  std::size_t visits = 0;
  timeline.sweep([&](Timestamp t, const GraphSet& g) {
    EXPECT_EQ(g, timeline.dataset_at(t));
    EXPECT_EQ(g, ds.ledger.dataset_at(t, ex.entities));
    ++visits;
  });
  EXPECT_EQ(visits, timeline.times().size());
}

TEST(AlignedTimeline, UntimedEntitiesAlwaysPresent) {
  GraphSet data = tests::doi_fix_data();
  Context ctx = tests::doi_fix_context();
  auto r = version_query::run(
      "SELECT ?t WHERE { <https://github.com/opencitations/time-agnostic-library/br/86766> "
      "<http://purl.org/dc/terms/title> ?t }",
      {version_query::Mode::kSingleVersion, Timestamp::parse("2019-01-01T00:00:00"), {}}, ctx);
  ASSERT_EQ(r.results.size(), 1u);
  EXPECT_EQ(r.results.begin()->second.size(), 1u);
}
