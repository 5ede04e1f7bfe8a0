#include "chrono_rdf/bench.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>

#include "chrono_rdf/delta_query.hpp"
#include "chrono_rdf/materializer.hpp"
#include "chrono_rdf/sources.hpp"
#include "chrono_rdf/version_query.hpp"

namespace chrono_rdf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Sample {
  double seconds;
  double snapshots;
  double entities;
};

BenchRow summarize(std::string workload, std::string query, const std::vector<Sample>& samples,
                   double baseline, bool verified) {
  BenchRow row;
  row.workload = std::move(workload);
  row.query = std::move(query);
  row.executions = samples.size();
  row.verified = verified;
  row.baseline_s = baseline;
  if (samples.empty()) return row;
  double n = static_cast<double>(samples.size());
  for (const auto& s : samples) {
    row.mean_s += s.seconds / n;
    row.snapshots_involved += s.snapshots / n;
    row.entities_involved += s.entities / n;
  }
  if (samples.size() > 1) {
    double ss = 0;
    for (const auto& s : samples) ss += (s.seconds - row.mean_s) * (s.seconds - row.mean_s);
    row.stdev_s = std::sqrt(ss / (n - 1));
  }
  row.overhead_s = row.snapshots_involved > 0 ? row.mean_s / row.snapshots_involved : 0.0;
  return row;
}

double time_once(const std::function<void()>& fn) {
  auto start = Clock::now();
  fn();
  return seconds_since(start);
}

// Every CV key equals the query evaluated on the ledger's dataset at that
// time, restricted to the relevant entities.
bool matches_ledger(const ParsedQuery& q, const version_query::Result& r,
                    const OracleLedger& ledger) {
  for (const auto& [t, solutions] : r.results) {
    if (!(evaluate(q, ledger.dataset_at(t, r.relevant_entities)) == solutions)) return false;
  }
  return true;
}

}  // namespace

std::string known_subject_query(const std::string& entity) {
  return "PREFIX literal: <http://www.essepuntato.it/2010/06/literalreification/>\n"
         "PREFIX cito: <http://purl.org/spar/cito/>\n"
         "PREFIX datacite: <http://purl.org/spar/datacite/>\n"
         "SELECT DISTINCT ?br ?id ?value\n"
         "WHERE {\n"
         "  <" + entity + "> cito:cites ?br.\n"
         "  ?br datacite:hasIdentifier ?id.\n"
         "  OPTIONAL {?id literal:hasLiteralValue ?value.}\n"
         "}\n";
}

std::string unknown_subject_query() {
  return "PREFIX datacite: <http://purl.org/spar/datacite/>\n"
         "SELECT DISTINCT ?s\n"
         "WHERE {\n"
         "  ?s datacite:usesIdentifierScheme datacite:orcid.\n"
         "}\n";
}

BenchReport bench_run(const GeneratedDataset& dataset, const BenchOptions& options) {
  Context ctx = make_context(dataset.data, dataset.provenance,
                             ContextOptions{options.text_index, kDefaultExplosionLimit});
  const GraphSet& data = dataset.data;
  const OracleLedger& ledger = dataset.ledger;
  std::size_t reps = std::max<std::size_t>(1, options.repetitions);

  BenchReport report;
  report.entities = ledger.entities.size();
  for (const auto& [_, versions] : ledger.entities) report.snapshots += versions.size();
  report.note =
      "entities_involved counts the distinct entities found by explication; "
      "overhead_s = mean_s / snapshots_involved; snapshots_involved counts, per "
      "reconstructed entity, the snapshots from the oldest needed version to the present, "
      "plus, for delta workloads, the in-interval deltas read without reconstruction";

  // Known subjects: bibliographic resources that currently cite something.
  std::vector<std::string> sample;
  for (const auto& [entity, versions] : ledger.entities) {
    if (versions.size() < 2 || entity.find("/br/") == std::string::npos) continue;
    const GraphSet& g = versions.back().graph;
    bool cites = std::any_of(g.begin(), g.end(), [](const Quad& q) {
      return q.predicate().value() == bench_vocab::kCites;
    });
    if (cites) sample.push_back(entity);
  }
  std::mt19937_64 rng(options.seed);
  std::shuffle(sample.begin(), sample.end(), rng);
  if (sample.size() > options.sample_entities) sample.resize(options.sample_entities);
  std::sort(sample.begin(), sample.end());

  auto times = ledger.all_times();
  Timestamp mid = times.empty() ? Timestamp{} : times[times.size() / 2];
  TimeInterval one_day{mid, mid + std::chrono::seconds(86400)};

  // Materialization workloads.
  {
    std::vector<Sample> one, all;
    double baseline = 0;
    bool ok = true;
    for (const auto& e : sample) {
      auto h = ctx.provenance().history(e);
      Timestamp at = std::clamp(mid, h->snapshots.front().generated_at,
                                h->snapshots.back().generated_at);
      std::size_t idx = *h->index_at(at);
      GraphSet present = ctx.data().entity_graph(e);
      auto m = materialize_at(e, at, present, *h);
      ok = ok && m.version.graphs == ledger.version_at(e, at)->graph;
      for (std::size_t r = 0; r < reps; ++r) {
        double s = time_once([&] {
          GraphSet p = ctx.data().entity_graph(e);
          materialize_at(e, at, p, *h);
        });
        one.push_back({s, static_cast<double>(h->snapshots.size() - idx), 1});
        s = time_once([&] {
          GraphSet p = ctx.data().entity_graph(e);
          materialize_all(e, p, *h, TimeInterval::unbounded());
        });
        all.push_back({s, static_cast<double>(h->snapshots.size()), 1});
        baseline += time_once([&] { current_graph(e, data); });
      }
    }
    baseline /= static_cast<double>(std::max<std::size_t>(1, sample.size() * reps));
    report.rows.push_back(summarize("VM-one", "SP?", one, baseline, ok));
    report.rows.push_back(summarize("VM-all", "SP?", all, baseline, ok));
  }

  // Query workloads; SP? queries run once per sampled entity.
  struct QueryCase {
    std::string label;
    std::vector<std::string> texts;
  };
  std::vector<QueryCase> cases{{"SP?", {}}, {"?PO", {unknown_subject_query()}}};
  for (const auto& e : sample) cases[0].texts.push_back(known_subject_query(e));

  for (const auto& c : cases) {
    std::vector<Sample> sv, cv, sd, cd;
    double baseline = 0;
    bool cv_ok = true, sv_ok = true;
    for (const auto& text : c.texts) {
      ParsedQuery q = parse_select(text);
      version_query::Options sv_opts{version_query::Mode::kSingleVersion, mid, {}};
      version_query::Options cv_opts{version_query::Mode::kCrossVersion, std::nullopt, {}};
      // Correctness gate before timing.
      auto cv_res = version_query::run(q, cv_opts, ctx);
      cv_ok = cv_ok && matches_ledger(q, cv_res, ledger);
      auto sv_res = version_query::run(q, sv_opts, ctx);
      sv_ok = sv_ok && matches_ledger(q, sv_res, ledger);
      for (std::size_t r = 0; r < reps; ++r) {
        version_query::Result res;
        double s = time_once([&] { res = version_query::run(q, sv_opts, ctx); });
        sv.push_back({s, static_cast<double>(res.stats.snapshots_involved),
                      static_cast<double>(res.relevant_entities.size())});
        s = time_once([&] { res = version_query::run(q, cv_opts, ctx); });
        cv.push_back({s, static_cast<double>(res.stats.snapshots_involved),
                      static_cast<double>(res.relevant_entities.size())});
        ChangeReport rep;
        s = time_once([&] { rep = delta_query::run(q, {}, one_day, ctx); });
        sd.push_back({s, static_cast<double>(rep.stats.snapshots_involved),
                      static_cast<double>(rep.relevant_entities.size())});
        s = time_once([&] { rep = delta_query::run(q, {}, TimeInterval::unbounded(), ctx); });
        cd.push_back({s, static_cast<double>(rep.stats.snapshots_involved),
                      static_cast<double>(rep.relevant_entities.size())});
        baseline += time_once([&] { evaluate(q, data); });
      }
    }
    baseline /= static_cast<double>(std::max<std::size_t>(1, c.texts.size() * reps));
    report.rows.push_back(summarize("SV", c.label, sv, baseline, sv_ok));
    report.rows.push_back(summarize("CV", c.label, cv, baseline, cv_ok));
    report.rows.push_back(summarize("SD", c.label, sd, baseline, true));
    report.rows.push_back(summarize("CD", c.label, cd, baseline, true));
  }

  struct rusage usage {};
  if (getrusage(RUSAGE_SELF, &usage) == 0) report.peak_rss_kb = usage.ru_maxrss;
  return report;
}

std::string report_csv(const BenchReport& report) {
  std::string out =
      "workload,query,executions,mean_s,stdev_s,overhead_s,snapshots_involved,"
      "entities_involved,baseline_s,verified\n";
  char line[512];
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%s,%s,%zu,%.9f,%.9f,%.9f,%.3f,%.3f,%.9f,%s\n",
                  r.workload.c_str(), r.query.c_str(), r.executions, r.mean_s, r.stdev_s,
                  r.overhead_s, r.snapshots_involved, r.entities_involved, r.baseline_s,
                  r.verified ? "true" : "false");
    out += line;
  }
  return out;
}

nlohmann::json report_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"workload", r.workload},
                    {"query", r.query},
                    {"executions", r.executions},
                    {"mean_s", r.mean_s},
                    {"stdev_s", r.stdev_s},
                    {"overhead_s", r.overhead_s},
                    {"snapshots_involved", r.snapshots_involved},
                    {"entities_involved", r.entities_involved},
                    {"baseline_s", r.baseline_s},
                    {"verified", r.verified}});
  }
  return {{"rows", rows},
          {"peak_rss_kb", report.peak_rss_kb},
          {"entities", report.entities},
          {"snapshots", report.snapshots},
          {"note", report.note}};
}

}  // namespace chrono_rdf
