// Acceptance run: one PASS/FAIL line per criterion.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chrono_rdf/bench.hpp"
#include "chrono_rdf/benchgen.hpp"
#include "chrono_rdf/cache.hpp"
#include "chrono_rdf/delta_query.hpp"
#include "chrono_rdf/error.hpp"
#include "chrono_rdf/materializer.hpp"
#include "chrono_rdf/output.hpp"
#include "chrono_rdf/rdf_io.hpp"
#include "chrono_rdf/version_query.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace chrono_rdf;

namespace {

constexpr double kFixtureSeconds = 1.0;
constexpr std::size_t kDeltaCount = 1000;
constexpr std::size_t kMaterializePairs = 200;
constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kEntities = 1000;
constexpr std::size_t kQueryCorpus = 20;
constexpr double kScalingRatioMax = 40.0;
constexpr int kScalingRepeats = 15;
constexpr double kBenchSecondsMax = 600.0;

const std::string kId = "https://github.com/opencitations/time-agnostic-library/id/80178";
const std::string kLiteralValue =
    "http://www.essepuntato.it/2010/06/literalreification/hasLiteralValue";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string sh(const std::string& args, int& status) {
  std::string cmd = "'" + std::string(CLI_PATH) + "' " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run the CLI");
  std::string out;
  char buffer[4096];
  for (std::size_t n; (n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0;) out.append(buffer, n);
  int rc = ::pclose(pipe);
  status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

const GeneratedDataset& dataset() { return tests::generated(kSeed, kEntities); }

const std::vector<tests::GeneratedQuery>& corpus() {
  static const auto queries = tests::generate_queries(dataset().ledger, kQueryCorpus, 2024);
  return queries;
}

Outcome fixture_end_to_end() {
  std::string sources = "--quiet --data '" + tests::data_path("doi_fix_data.ttl").string() +
                        "' --provenance '" + tests::data_path("doi_fix_prov.ttl").string() + "'";
  struct Case {
    std::string at;
    std::string literal;
  };
  std::vector<Case> cases{{"2021-10-15T00:00:00", "10.1111/j.1365-2648.2012.06023.x."},
                          {"2021-10-20T00:00:00", "10.1111/j.1365-2648.2012.06023.x"}};
  double slowest = 0;
  for (const auto& c : cases) {
    auto start = Clock::now();
    int status = 0;
    std::string out = sh(sources + " materialize '" + kId + "' --at " + c.at, status);
    double took = seconds_since(start);
    slowest = std::max(slowest, took);
    if (status != 0) return {false, "exit status " + std::to_string(status) + " at " + c.at};
    auto doc = nlohmann::json::parse(out);
    const auto& results = doc.at("results");
    if (results.size() != 1) return {false, "expected one version at " + c.at};
    GraphSet g = parse_document(results.begin()->at("graph").get<std::string>(),
                                DocumentFormat::kNQuads);
    std::vector<std::string> literals;
    for (const Quad& q : g) {
      if (q.predicate().value() == kLiteralValue) literals.push_back(q.object().value());
    }
    if (literals.size() != 1) return {false, std::to_string(literals.size()) + " literal quads at " + c.at};
    if (literals[0] != c.literal) return {false, "got '" + literals[0] + "' at " + c.at};
    if (took >= kFixtureSeconds) return {false, c.at + " took " + std::to_string(took) + " s"};
  }
  return {true, "both literals exact; slowest run " + std::to_string(slowest) + " s"};
}

Outcome inversion_and_replay() {
  const auto& ds = dataset();
  std::size_t deltas = 0, invert_ok = 0, undo_ok = 0, chains = 0, compose_ok = 0;
  for (const auto& [entity, versions] : ds.ledger.entities) {
    if (deltas >= kDeltaCount) break;
    EntityHistory h = load_history(entity, ds.provenance);
    std::vector<Delta> chain;
    GraphSet state = versions.front().graph;
    for (std::size_t k = 1; k < h.snapshots.size() && deltas < kDeltaCount; ++k) {
      Delta d = entity_scoped(*h.snapshots[k].update, Term::iri(entity));
      ++deltas;
      invert_ok += invert(invert(d)) == d;
      GraphSet next = apply(d, state);
      undo_ok += apply(invert(d), next) == state;
      state = std::move(next);
      chain.push_back(std::move(d));
    }
    if (chain.empty()) continue;
    ++chains;
    GraphSet sequential = versions.front().graph;
    for (const auto& d : chain) sequential = apply(d, sequential);
    compose_ok += apply(compose(chain), versions.front().graph) == sequential &&
                  sequential == versions[chain.size()].graph;
  }
  bool pass = deltas == kDeltaCount && invert_ok == deltas && undo_ok == deltas &&
              compose_ok == chains;
  std::ostringstream d;
  d << deltas << " deltas: double inversion " << invert_ok << "/" << deltas << ", undo " << undo_ok
    << "/" << deltas << ", compose " << compose_ok << "/" << chains << " chains";
  return {pass, d.str()};
}

Outcome materialization_oracle() {
  const auto& ds = dataset();
  std::vector<std::string> entities;
  for (const auto& [e, _] : ds.ledger.entities) entities.push_back(e);
  std::mt19937_64 rng(kSeed);
  std::size_t equal = 0;
  for (std::size_t i = 0; i < kMaterializePairs; ++i) {
    const std::string& e = entities[rng() % entities.size()];
    const auto& versions = ds.ledger.entities.at(e);
    long long from = versions.front().time.unix_seconds();
    long long to = versions.back().time.unix_seconds() + 30 * 86400;
    Timestamp t = Timestamp::from_unix(from + static_cast<long long>(rng() % (to - from + 1)));
    EntityHistory h = load_history(e, ds.provenance);
    auto m = materialize_at(e, t, ds.data, h);
    equal += m.version.graphs == ds.ledger.version_at(e, t)->graph;
  }
  std::size_t chained_ok = 0;
  for (const auto& [e, versions] : ds.ledger.entities) {
    EntityHistory h = load_history(e, ds.provenance);
    MaterializeStats stats;
    auto all = materialize_all(e, ds.data, h, TimeInterval::unbounded(), &stats);
    bool same = all.size() == versions.size();
    for (std::size_t k = 0; same && k < all.size(); ++k) same = all[k].graphs == versions[k].graph;
    chained_ok += same && stats.delta_applications == versions.size() - 1;
  }
  std::ostringstream d;
  d << equal << "/" << kMaterializePairs << " pairs equal; n-1 chaining on " << chained_ok << "/"
    << ds.ledger.entities.size() << " entities";
  return {equal == kMaterializePairs && chained_ok == ds.ledger.entities.size(), d.str()};
}

Outcome classification() {
  std::vector<std::string> texts;
  for (const char* f : {"cites_chain.rq", "trailing_dot.rq", "known_subject.rq",
                        "unknown_subject.rq", "identifiers.rq"}) {
    texts.push_back(tests::read_file(tests::data_path(f)));
  }
  for (const char* t :
       {"SELECT * WHERE { <http://x/a> <http://x/p> ?b . ?x <http://x/q> ?y }",
        "SELECT * WHERE { ?x <http://x/q> ?y . ?y <http://x/q> ?z . <http://x/a> <http://x/p> ?z }",
        "SELECT * WHERE { <http://x/a> ?p ?o . ?o ?p2 ?o2 . ?x <http://x/r> ?p2 }",
        "SELECT * WHERE { ?s ?p <http://x/o> . ?t ?p ?u }",
        "SELECT * WHERE { <http://x/a> <http://x/p> ?b . OPTIONAL { ?b <http://x/q> ?c } }",
        "SELECT * WHERE { ?s ?p ?o }",
        "SELECT * WHERE { <http://x/a> ?p ?o . ?s ?p2 ?o2 }"}) {
    texts.push_back(t);
  }
  std::size_t agree = 0, unbounded = 0;
  for (const auto& text : texts) {
    ParsedQuery q = parse_select(text);
    auto flags = tests::brute_force_joined(q);
    bool any_isolated = false, isolated_ground = false;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (flags[i]) continue;
      any_isolated = true;
      isolated_ground = isolated_ground || !q.patterns[i].ground_terms().empty();
    }
    bool expect_unbounded = any_isolated && !isolated_ground;
    unbounded += expect_unbounded;
    try {
      QueryPlan plan = classify(q);
      if (expect_unbounded) continue;
      std::vector<TriplePattern> joined, isolated;
      for (std::size_t i = 0; i < flags.size(); ++i) (flags[i] ? joined : isolated).push_back(q.patterns[i]);
      agree += plan.joined == joined && plan.isolated == isolated;
    } catch (const Error& e) {
      agree += expect_unbounded && e.code() == ErrorCode::kUnboundedQuery;
    }
  }
  std::ostringstream d;
  d << agree << "/" << texts.size() << " queries agree (" << unbounded << " unbounded)";
  return {agree == texts.size() && texts.size() == 12 && unbounded > 0, d.str()};
}

Outcome cross_version() {
  const auto& ds = dataset();
  Context ctx = make_context(ds.data, ds.provenance);
  std::size_t keys = 0, equal = 0, nonempty = 0, relevant_ok = 0, timeline_ok = 0;
  for (const auto& g : corpus()) {
    ParsedQuery q = parse_select(g.text);
    auto r = version_query::run(q, {version_query::Mode::kCrossVersion, std::nullopt, g.interval}, ctx);
    auto relevant = tests::oracle_relevant(q, ds.ledger, g.interval);
    relevant_ok += r.relevant_entities == relevant;
    std::set<Timestamp> got;
    for (const auto& [t, solutions] : r.results) {
      got.insert(t);
      ++keys;
      bool same = solutions == evaluate(q, ds.ledger.dataset_at(t, relevant));
      equal += same;
      nonempty += !solutions.empty();
    }
    timeline_ok += got == tests::oracle_times(ds.ledger, relevant, g.interval);
  }
  std::size_t n = corpus().size();
  std::ostringstream d;
  d << equal << "/" << keys << " keys equal (" << nonempty << " non-empty); relevant sets "
    << relevant_ok << "/" << n << "; timelines " << timeline_ok << "/" << n;
  return {keys > 0 && equal == keys && relevant_ok == n && timeline_ok == n, d.str()};
}

Outcome delta_correctness() {
  const auto& ds = dataset();
  Context ctx = make_context(ds.data, ds.provenance);
  std::size_t equal = 0, records = 0, deleted = 0, filtered = 0, unfiltered = 0;
  for (const auto& g : corpus()) {
    ParsedQuery q = parse_select(g.text);
    auto report = delta_query::run(q, g.properties, g.interval, ctx);
    auto relevant = tests::oracle_relevant(q, ds.ledger, g.interval, false);
    auto expected = tests::consecutive_diffs(ds.ledger, relevant, g.properties, g.interval);
    std::vector<tests::OracleChange> got;
    for (const auto& r : report.records) {
      got.push_back({r.entity, r.snapshot, r.time, std::string(change_kind_name(r.kind)),
                     r.delta.added, r.delta.removed});
      if (r.kind == ChangeKind::kDeleted && ds.data.subject_graph(Term::iri(r.entity)).empty()) {
        ++deleted;
      }
    }
    equal += got == expected && report.relevant_entities == relevant;
    records += got.size();
    (g.properties.empty() ? unfiltered : filtered) += 1;
  }
  std::size_t n = corpus().size();
  std::ostringstream d;
  d << equal << "/" << n << " reports equal; " << records << " records, " << deleted
    << " for entities absent from current data; " << filtered << " filtered, " << unfiltered
    << " unfiltered";
  return {equal == n && deleted > 0 && filtered > 0 && unfiltered > 0, d.str()};
}

std::string version_doc(const std::string& text, const TimeInterval& interval, const Context& ctx,
                        std::size_t* rebuilds = nullptr) {
  auto r = version_query::run(text, {version_query::Mode::kCrossVersion, std::nullopt, interval}, ctx);
  if (rebuilds) *rebuilds += r.stats.counters.rebuilds;
  return dump_document(version_query_document(r, newest_snapshot(r.relevant_entities, ctx)));
}

std::string delta_doc(const tests::GeneratedQuery& g, const Context& ctx) {
  auto r = delta_query::run(g.text, g.properties, g.interval, ctx);
  return dump_document(delta_query_document(r, newest_snapshot(r.relevant_entities, ctx)));
}

Outcome cache_transparency() {
  const auto& ds = dataset();
  tests::TempDir tmp;
  Context plain = make_context(ds.data, ds.provenance);
  Context first = make_context(ds.data, ds.provenance, {}, std::make_unique<Cache>(tmp.path()));
  std::size_t identical = 0, first_rebuilds = 0, second_rebuilds = 0;
  std::vector<std::string> expected;
  for (const auto& g : corpus()) {
    expected.push_back(version_doc(g.text, g.interval, plain));
    identical += version_doc(g.text, g.interval, first, &first_rebuilds) == expected.back();
  }
  Context second = make_context(ds.data, ds.provenance, {}, std::make_unique<Cache>(tmp.path()));
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const auto& g = corpus()[i];
    identical += version_doc(g.text, g.interval, second, &second_rebuilds) == expected[i];
  }
  std::size_t n = 2 * corpus().size();
  std::ostringstream d;
  d << identical << "/" << n << " outputs byte-identical; rebuilds " << first_rebuilds
    << " then " << second_rebuilds;
  return {identical == n && first_rebuilds > 0 && second_rebuilds == 0, d.str()};
}

Outcome index_transparency() {
  const auto& ds = dataset();
  Context scan = make_context(ds.data, ds.provenance, {false, kDefaultExplosionLimit});
  Context indexed = make_context(ds.data, ds.provenance, {true, kDefaultExplosionLimit});
  std::size_t identical = 0;
  std::set<std::string> forms;
  for (const auto& g : corpus()) {
    identical += version_doc(g.text, g.interval, scan) == version_doc(g.text, g.interval, indexed);
    identical += delta_doc(g, scan) == delta_doc(g, indexed);
    for (const auto& terms : classify(parse_select(g.text)).known_terms_per_isolated) {
      for (const Term& t : terms) forms.insert(t.to_ntriples());
    }
  }
  // Plus a seeded sample of every term form occurring in some delta.
  std::vector<std::string> delta_forms;
  LocalProvenanceSource prov(ds.provenance);
  std::set<std::string> seen;
  prov.for_each_delta([&](const DeltaHit&, const std::string& text) {
    for (const Quad& q : parse_document(text, DocumentFormat::kNQuads)) {
      for (const Term* t : {&q.subject(), &q.predicate(), &q.object()}) {
        if (seen.insert(t->to_ntriples()).second) delta_forms.push_back(t->to_ntriples());
      }
    }
  });
  std::mt19937_64 rng(kSeed);
  std::shuffle(delta_forms.begin(), delta_forms.end(), rng);
  delta_forms.resize(std::min<std::size_t>(delta_forms.size(), 400));
  forms.insert(delta_forms.begin(), delta_forms.end());
  TextIndex index = TextIndex::build(prov);
  std::size_t lookups_equal = 0;
  for (const auto& f : forms) {
    auto scanned = prov.scan({f});
    lookups_equal += index.lookup(f) == std::set<DeltaHit>(scanned.begin(), scanned.end());
  }
  std::size_t n = 2 * corpus().size();
  std::ostringstream d;
  d << identical << "/" << n << " outputs identical; " << lookups_equal << "/" << forms.size()
    << " lookups equal the scan";
  return {identical == n && lookups_equal == forms.size(), d.str()};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Outcome scaling() {
  std::map<int, double> runtime, overhead;
  for (int s : {10, 50, 200}) {
    GenSpec spec;
    spec.seed = kSeed;
    spec.n_entities = 8;
    spec.snapshots = {static_cast<double>(s), 0.0, s, s};
    spec.change_mix = {0.5, 0.25, 0.25, 0.0};
    auto ds = generate(spec);
    std::vector<std::pair<std::string, EntityHistory>> histories;
    for (const auto& [e, _] : ds.ledger.entities) histories.emplace_back(e, load_history(e, ds.provenance));
    std::vector<double> samples;
    for (int r = 0; r < kScalingRepeats; ++r) {
      auto start = Clock::now();
      for (const auto& [e, h] : histories) {
        auto all = materialize_all(e, ds.data, h, TimeInterval::unbounded());
        if (all.size() != static_cast<std::size_t>(s)) throw std::runtime_error("wrong version count");
      }
      samples.push_back(seconds_since(start) / static_cast<double>(histories.size()));
    }
    runtime[s] = median(samples);
    overhead[s] = runtime[s] / s;
  }
  double ratio = runtime[200] / runtime[10];
  char d[256];
  std::snprintf(d, sizeof d,
                "runtime(200)/runtime(10) = %.2f (max %.0f); overhead per snapshot %.2e / %.2e / "
                "%.2e s at S=10/50/200",
                ratio, kScalingRatioMax, overhead[10], overhead[50], overhead[200]);
  return {ratio <= kScalingRatioMax, d};
}

Outcome bench_report() {
  auto start = Clock::now();
  GenSpec spec;
  spec.seed = kSeed;
  spec.n_entities = kEntities;
  GeneratedDataset ds = generate(spec);
  tests::TempDir tmp;
  write_dataset(ds, tmp.path());
  BenchReport report = bench_run(ds, BenchOptions{});
  std::string csv = report_csv(report);
  auto json = report_json(report);
  double took = seconds_since(start);

  std::set<std::pair<std::string, std::string>> expected;
  for (const char* w : {"VM-one", "VM-all"}) expected.insert({w, "SP?"});
  for (const char* w : {"SV", "CV", "SD", "CD"}) {
    expected.insert({w, "SP?"});
    expected.insert({w, "?PO"});
  }
  std::set<std::pair<std::string, std::string>> got;
  bool columns_ok = true;
  for (const auto& r : report.rows) {
    got.insert({r.workload, r.query});
    double expected_overhead = r.snapshots_involved > 0 ? r.mean_s / r.snapshots_involved : 0.0;
    columns_ok = columns_ok && r.executions > 0 && r.mean_s > 0 && std::isfinite(r.stdev_s) &&
                 r.snapshots_involved > 0 && r.entities_involved > 0 && r.baseline_s > 0 &&
                 std::abs(r.overhead_s - expected_overhead) <= 1e-12 && r.verified;
  }
  std::string header = csv.substr(0, csv.find('\n'));
  for (const char* col : {"mean_s", "stdev_s", "overhead_s", "snapshots_involved",
                          "entities_involved", "baseline_s"}) {
    columns_ok = columns_ok && header.find(col) != std::string::npos &&
                 json.at("rows").at(0).contains(col);
  }
  std::ostringstream d;
  d << report.rows.size() << " rows, columns " << (columns_ok ? "complete" : "INCOMPLETE")
    << ", peak RSS " << report.peak_rss_kb / 1024 << " MiB, " << took << " s";
  return {report.rows.size() == 10 && got == expected && columns_ok && took < kBenchSecondsMax,
          d.str()};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fixture identifier fix, end to end", fixture_end_to_end},
      {"delta inversion and composition", inversion_and_replay},
      {"materialization against the ledger", materialization_oracle},
      {"joined/isolated classification", classification},
      {"cross-version results against the ledger", cross_version},
      {"delta reports against consecutive diffs", delta_correctness},
      {"cache transparency and reuse", cache_transparency},
      {"text index transparency", index_transparency},
      {"materialization scaling", scaling},
      {"benchmark report", bench_report},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
