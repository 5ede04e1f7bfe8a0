// Command-line front end: materialize | query | delta | cache clear | bench.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chrono_rdf/bench.hpp"
#include "chrono_rdf/benchgen.hpp"
#include "chrono_rdf/cache.hpp"
#include "chrono_rdf/delta_query.hpp"
#include "chrono_rdf/error.hpp"
#include "chrono_rdf/output.hpp"
#include "chrono_rdf/rdf_io.hpp"
#include "chrono_rdf/sources.hpp"
#include "chrono_rdf/version_query.hpp"

using namespace chrono_rdf;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSource = 3;
constexpr int kExitDomain = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SourceFlags {
  std::string config;
  std::vector<std::string> data;
  std::vector<std::string> provenance;
  std::string cache_dir;
  bool text_index = false;
  std::size_t explosion_limit = 0;
  double http_timeout = 0;
};

SourceConfig resolve_config(const SourceFlags& flags) {
  SourceConfig config;
  std::string path = flags.config;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar); env && *env) path = env;
  }
  if (!path.empty()) config = load_config_file(path);
  if (!flags.data.empty()) config.data = flags.data;
  if (!flags.provenance.empty()) config.provenance = flags.provenance;
  if (!flags.cache_dir.empty()) config.cache_dir = flags.cache_dir;
  if (flags.text_index) config.text_index = true;
  if (flags.explosion_limit > 0) config.explosion_limit = flags.explosion_limit;
  if (flags.http_timeout > 0) config.http_timeout = flags.http_timeout;
  return config;
}

// RFC 3339 with or without offset, or a bare date.
Timestamp parse_cli_time(const std::string& text, bool end_of_day) {
  std::string t = text;
  if (t.size() == 10 && t[4] == '-' && t[7] == '-') t += end_of_day ? "T23:59:59" : "T00:00:00";
  auto parsed = Timestamp::try_parse(t);
  if (!parsed) throw UsageError("invalid time '" + text + "'");
  return *parsed;
}

TimeInterval parse_interval(const std::string& from, const std::string& to) {
  TimeInterval interval;
  if (!from.empty()) interval.start = parse_cli_time(from, false);
  if (!to.empty()) interval.end = parse_cli_time(to, true);
  if (interval.start && interval.end && *interval.end < *interval.start) {
    throw UsageError("--from is after --to");
  }
  return interval;
}

std::string read_query_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read query file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string strip_angles(std::string iri) {
  if (iri.size() >= 2 && iri.front() == '<' && iri.back() == '>') return iri.substr(1, iri.size() - 2);
  return iri;
}

int exit_code_for(const Error& e, bool loading) {
  switch (e.code()) {
    case ErrorCode::kConfigError:
    case ErrorCode::kNetworkError:
    case ErrorCode::kCacheIO:
      return kExitSource;
    case ErrorCode::kSyntaxError:
    case ErrorCode::kUnknownPrefix:
      return loading ? kExitSource : kExitDomain;
    default:
      return kExitDomain;
  }
}

void report_error(const std::string& code, const std::string& message) {
  std::cerr << error_document(code, message).dump() << "\n";
}

void print_stats(const MaterializeCounters& c, std::size_t relevant, bool quiet) {
  if (quiet) return;
  std::cerr << "relevant_entities=" << relevant << " rebuilds=" << c.rebuilds
            << " cache_hits=" << c.cache_hits << " delta_applications=" << c.delta_applications
            << (c.cache_warning ? " cache_warning=true" : "") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-traversal queries over change-tracked RDF"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SourceFlags flags;
  std::string format = "json";
  bool quiet = false;
  app.add_option("--config", flags.config, "JSON config file (default: $CHRONO_RDF_CONFIG)");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "nquads"}));
  app.add_flag("--quiet", quiet, "No diagnostics on stderr");
  app.add_option("--data", flags.data, "Data file or endpoint URL (repeatable)");
  app.add_option("--provenance", flags.provenance, "Provenance file or endpoint URL (repeatable)");
  app.add_option("--cache-dir", flags.cache_dir, "Cache directory");
  app.add_flag("--text-index", flags.text_index, "Use the inverted index over deltas");
  app.add_option("--explosion-limit", flags.explosion_limit, "Maximum relevant entities");
  app.add_option("--http-timeout", flags.http_timeout, "Endpoint timeout in seconds");

  std::string entity, at, from, to, query_file, properties;
  bool all = false;
  auto* materialize = app.add_subcommand("materialize", "Reconstruct an entity's versions");
  materialize->add_option("entity", entity, "Entity IRI")->required();
  auto* at_opt = materialize->add_option("--at", at, "Time of the version");
  auto* all_opt = materialize->add_flag("--all", all, "Every version");
  at_opt->excludes(all_opt);
  materialize->add_option("--from", from, "Interval start (with --all)");
  materialize->add_option("--to", to, "Interval end (with --all)");

  auto* query = app.add_subcommand("query", "Single- or cross-version structured query");
  query->add_option("--file", query_file, "SPARQL SELECT file")->required();
  auto* q_at = query->add_option("--at", at, "Single-version time");
  auto* q_from = query->add_option("--from", from, "Interval start");
  auto* q_to = query->add_option("--to", to, "Interval end");
  q_at->excludes(q_from)->excludes(q_to);

  auto* delta = app.add_subcommand("delta", "Single- or cross-delta structured query");
  delta->add_option("--file", query_file, "SPARQL SELECT file")->required();
  delta->add_option("--properties", properties, "Comma-separated property IRIs");
  delta->add_option("--from", from, "Interval start");
  delta->add_option("--to", to, "Interval end");

  auto* cache = app.add_subcommand("cache", "Cache management");
  cache->require_subcommand(1);
  auto* cache_clear = cache->add_subcommand("clear", "Remove every cache entry");

  GenSpec gen;
  BenchOptions bench_opts;
  std::string out_dir = "bench-out";
  auto* bench = app.add_subcommand("bench", "Generate a dataset and time the ten workloads");
  bench->add_option("--entities", gen.n_entities, "Generated entities")->default_val(1000);
  bench->add_option("--seed", gen.seed, "Generator seed")->default_val(42);
  bench->add_option("--repetitions", bench_opts.repetitions, "Runs per case")->default_val(10);
  bench->add_option("--sample", bench_opts.sample_entities, "Known-subject entities")->default_val(20);
  bench->add_option("--out", out_dir, "Output directory")->default_val("bench-out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  bool loading = true;
  try {
    if (*bench) {
      bench_opts.seed = gen.seed;
      bench_opts.text_index = flags.text_index;
      GeneratedDataset ds = generate(gen);
      write_dataset(ds, out_dir);
      BenchReport report = bench_run(ds, bench_opts);
      std::ofstream(std::filesystem::path(out_dir) / "report.csv") << report_csv(report);
      std::ofstream(std::filesystem::path(out_dir) / "report.json") << dump_document(report_json(report));
      std::cout << dump_document(report_json(report));
      return 0;
    }

    SourceConfig config = resolve_config(flags);
    if (*cache_clear) {
      if (!config.cache_dir) throw Error(ErrorCode::kConfigError, "no cache directory configured");
      Cache(*config.cache_dir).clear();
      return 0;
    }
    if (*materialize && !all && at.empty()) throw UsageError("materialize needs --at or --all");
    if (*materialize && !at.empty() && (!from.empty() || !to.empty())) {
      throw UsageError("--from/--to go with --all");
    }
    TimeInterval interval = parse_interval(from, to);
    std::optional<Timestamp> at_time;
    if (!at.empty()) at_time = parse_cli_time(at, false);
    std::string query_text;
    if (!query_file.empty()) query_text = read_query_file(query_file);

    Context ctx = load_sources(config);
    loading = false;

    if (*materialize) {
      entity = strip_angles(entity);
      MaterializeCounters counters;
      std::vector<VersionedGraph> versions;
      std::vector<Snapshot> others;
      auto history = ctx.provenance().history(entity);
      if (!history) throw Error(ErrorCode::kNoHistory, "no provenance snapshots for <" + entity + ">");
      if (at_time) {
        versions.push_back(get_or_materialize(entity, *at_time, ctx, counters));
      } else {
        for (auto& v : cached_span(entity, *history, interval, ctx, counters)) {
          if (interval.contains(v.snapshot.generated_at)) versions.push_back(std::move(v));
        }
      }
      std::set<std::string> shown;
      for (const auto& v : versions) shown.insert(v.snapshot.id);
      for (const auto& s : history->snapshots) {
        if (!shown.count(s.id)) others.push_back(s);
      }
      print_stats(counters, 1, quiet);
      if (format == "nquads") {
        for (const auto& v : versions) {
          if (versions.size() > 1) std::cout << "# " << v.snapshot.generated_at.to_string() << "\n";
          std::cout << serialize(v.graphs);
        }
        return 0;
      }
      std::cout << dump_document(materialization_document(
          entity, versions, others, history->snapshots.back().generated_at));
      return 0;
    }

    if (*query) {
      version_query::Options opts;
      opts.interval = interval;
      if (at_time) {
        opts.mode = version_query::Mode::kSingleVersion;
        opts.at = at_time;
      }
      auto result = version_query::run(query_text, opts, ctx);
      print_stats(result.stats.counters, result.relevant_entities.size(), quiet);
      std::cout << dump_document(
          version_query_document(result, newest_snapshot(result.relevant_entities, ctx)));
      return 0;
    }

    if (*delta) {
      std::set<std::string> props;
      std::stringstream list(properties);
      for (std::string p; std::getline(list, p, ',');) {
        p.erase(0, p.find_first_not_of(" \t"));
        p.erase(p.find_last_not_of(" \t") + 1);
        if (!p.empty()) props.insert(strip_angles(p));
      }
      auto report = delta_query::run(query_text, props, interval, ctx);
      print_stats(report.stats.counters, report.relevant_entities.size(), quiet);
      std::cout << dump_document(
          delta_query_document(report, newest_snapshot(report.relevant_entities, ctx)));
      return 0;
    }
  } catch (const UsageError& e) {
    report_error("Usage", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    report_error(std::string(error_code_name(e.code())), e.what());
    return exit_code_for(e, loading);
  } catch (const std::exception& e) {
    report_error("Internal", e.what());
    return 1;
  }
  return 0;
}
