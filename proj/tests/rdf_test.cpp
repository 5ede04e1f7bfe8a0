#include <gtest/gtest.h>

#include "chrono_rdf/error.hpp"
#include "chrono_rdf/rdf.hpp"
#include "chrono_rdf/rdf_io.hpp"
#include "chrono_rdf/timestamp.hpp"
#include "fixtures.hpp"

using namespace chrono_rdf;

TEST(Term, XsdStringNormalizesToPlain) {
  EXPECT_EQ(Term::typed_literal("a", std::string(kXsdString)), Term::literal("a"));
  EXPECT_NE(Term::typed_literal("1", std::string(kXsdInteger)), Term::literal("1"));
  EXPECT_EQ(Term::lang_literal("a", "EN").language(), "en");
}

TEST(Term, LiteralEqualityIsLexical) {
  EXPECT_NE(Term::typed_literal("01", std::string(kXsdInteger)),
            Term::typed_literal("1", std::string(kXsdInteger)));
}

TEST(Term, NTriplesForms) {
  EXPECT_EQ(Term::iri("http://x/a").to_ntriples(), "<http://x/a>");
  EXPECT_EQ(Term::blank("b0").to_ntriples(), "_:b0");
  EXPECT_EQ(Term::literal("a\"b\n").to_ntriples(), "\"a\\\"b\\n\"");
  EXPECT_EQ(Term::lang_literal("x", "en").to_ntriples(), "\"x\"@en");
  EXPECT_EQ(Term::typed_literal("1", std::string(kXsdInteger)).to_ntriples(),
            "\"1\"^^<http://www.w3.org/2001/XMLSchema#integer>");
}

TEST(GraphSet, BySubjectRange) {
  GraphSet g{make_quad(Term::iri("http://x/a"), Term::iri("http://x/p"), Term::literal("1")),
             make_quad(Term::iri("http://x/b"), Term::iri("http://x/p"), Term::literal("2")),
             make_quad(Term::iri("http://x/a"), Term::iri("http://x/q"), Term::literal("3"))};
  EXPECT_EQ(g.subject_graph(Term::iri("http://x/a")).size(), 2u);
  EXPECT_EQ(g.subject_graph(Term::iri("http://x/c")).size(), 0u);
}

TEST(GraphSet, EraseTripleRemovesEveryGraph) {
  Triple t{Term::iri("http://x/a"), Term::iri("http://x/p"), Term::literal("1")};
  GraphSet g{Quad{t, std::nullopt}, Quad{t, Term::iri("http://x/g")}};
  EXPECT_EQ(g.erase_triple(t), 2u);
  EXPECT_TRUE(g.empty());
}

TEST(GraphDiff, AddedAndRemoved) {
  Quad a = make_quad(Term::iri("http://x/a"), Term::iri("http://x/p"), Term::literal("1"));
  Quad b = make_quad(Term::iri("http://x/a"), Term::iri("http://x/p"), Term::literal("2"));
  auto d = graph_diff(GraphSet{b}, GraphSet{a});
  EXPECT_EQ(d.added, GraphSet{b});
  EXPECT_EQ(d.removed, GraphSet{a});
}

TEST(Timestamp, ParsesOffsetsAndTruncatesFractions) {
  EXPECT_EQ(Timestamp::parse("2021-10-19T19:55:55").to_string(), "2021-10-19T19:55:55");
  EXPECT_EQ(Timestamp::parse("2021-10-19T21:55:55+02:00").to_string(), "2021-10-19T19:55:55");
  EXPECT_EQ(Timestamp::parse("2021-10-19T19:55:55.987Z").to_string(), "2021-10-19T19:55:55");
  EXPECT_FALSE(Timestamp::try_parse("2021-13-01T00:00:00"));
  EXPECT_FALSE(Timestamp::try_parse("yesterday"));
}

TEST(Timestamp, IntervalIsClosed) {
  auto a = Timestamp::parse("2021-01-01T00:00:00");
  auto b = Timestamp::parse("2021-01-02T00:00:00");
  TimeInterval i{a, b};
  EXPECT_TRUE(i.contains(a));
  EXPECT_TRUE(i.contains(b));
  EXPECT_FALSE(i.contains(b + std::chrono::seconds(1)));
  EXPECT_THROW((TimeInterval{b, a}.validate()), Error);
}

TEST(RdfIo, TurtleFixture) {
  GraphSet g = tests::doi_fix_data();
  EXPECT_EQ(g.size(), 11u);
  Term id = Term::iri(std::string(tests::kBase) + "id/80178");
  GraphSet idg = g.subject_graph(id);
  EXPECT_EQ(idg.size(), 3u);
  EXPECT_TRUE(idg.contains_triple(
      Triple{id, Term::iri("http://www.essepuntato.it/2010/06/literalreification/hasLiteralValue"),
             Term::literal("10.1111/j.1365-2648.2012.06023.x")}));
}

TEST(RdfIo, NQuadsRoundTrip) {
  GraphSet g = tests::doi_fix_provenance();
  std::string text = serialize(g);
  EXPECT_EQ(parse_document(text, DocumentFormat::kNQuads), g);
  EXPECT_EQ(serialize(parse_document(text, DocumentFormat::kNQuads)), text);
}

TEST(RdfIo, SerializationIsSorted) {
  std::string text = serialize(tests::doi_fix_data());
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t nl; (nl = text.find('\n', start)) != std::string::npos; start = nl + 1) {
    lines.push_back(text.substr(start, nl - start));
  }
  EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));
  EXPECT_EQ(start, text.size());
}

TEST(RdfIo, Errors) {
  try {
    parse_document("<http://x/a> <http://x/p> .\n", DocumentFormat::kNQuads);
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse_document("ex:a ex:p ex:o .", DocumentFormat::kTurtle);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownPrefix);
  }
  EXPECT_THROW(parse_document("<a> <http://x/p> <http://x/o> .", DocumentFormat::kTurtle),
               SyntaxError);
}

TEST(RdfIo, FormatForPath) {
  EXPECT_EQ(format_for_path("a/b.ttl"), DocumentFormat::kTurtle);
  EXPECT_EQ(format_for_path("a.nq"), DocumentFormat::kNQuads);
  EXPECT_EQ(format_for_path("a.nt"), DocumentFormat::kNQuads);
  EXPECT_FALSE(format_for_path("a.json"));
}
