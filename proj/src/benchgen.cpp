#include "chrono_rdf/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "chrono_rdf/error.hpp"
#include "chrono_rdf/rdf_io.hpp"
#include "chrono_rdf/update.hpp"

namespace chrono_rdf {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void spec_error(const std::string& message) {
  throw Error(ErrorCode::kSpecError, message);
}

Term iri(std::string_view v) { return Term::iri(std::string(v)); }

enum class Change { kLiteralEdit, kTripleAdd, kTripleRemove, kEntityDelete };

class Generator {
 public:
  explicit Generator(const GenSpec& spec) : spec_(spec), rng_(spec.seed) {}

  GeneratedDataset run() {
    std::size_t n_br = (spec_.n_entities + 1) / 2;
    std::size_t n_id = spec_.n_entities - n_br;
    for (std::size_t i = 0; i < n_br; ++i) brs_.push_back(spec_.base_iri + "br/" + std::to_string(i + 1));
    for (std::size_t i = 0; i < n_id; ++i) ids_.push_back(spec_.base_iri + "id/" + std::to_string(i + 1));

    GeneratedDataset out;
    for (std::size_t i = 0; i < brs_.size(); ++i) {
      build_entity(brs_[i], first_br_version(i), true, out);
    }
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      build_entity(ids_[i], first_id_version(i), false, out);
    }
    return out;
  }

 private:
  Term br_graph() const { return Term::iri(spec_.base_iri + "br/"); }
  Term id_graph() const { return Term::iri(spec_.base_iri + "id/"); }

  std::string title() {
    static const char* words[] = {"open",     "access",   "citation", "network", "graph",
                                  "archive",  "metadata", "nursing",  "science", "provenance",
                                  "temporal", "query",    "review",   "data",    "model"};
    std::uniform_int_distribution<int> n(3, 7), w(0, 14);
    std::string t;
    for (int i = n(rng_); i > 0; --i) {
      if (!t.empty()) t += ' ';
      t += words[w(rng_)];
    }
    t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
    return t;
  }

  std::string identifier_value(bool doi) {
    std::uniform_int_distribution<int> d(0, 9999);
    char buf[64];
    if (doi) {
      std::snprintf(buf, sizeof buf, "10.%04d/bench.%04d.%04d", d(rng_), d(rng_), d(rng_));
      std::string v = buf;
      // Some values carry a stray trailing period.
      if (std::bernoulli_distribution(0.2)(rng_)) v += '.';
      return v;
    }
    std::snprintf(buf, sizeof buf, "0000-%04d-%04d-%04d", d(rng_), d(rng_), d(rng_));
    return buf;
  }

  GraphSet first_br_version(std::size_t i) {
    Term s = Term::iri(brs_[i]);
    Term g = br_graph();
    GraphSet v;
    v.insert(make_quad(s, Term::iri(std::string(kRdfType)), iri(bench_vocab::kExpression), g));
    v.insert(make_quad(s, iri(bench_vocab::kTitle), Term::literal(title()), g));
    std::uniform_int_distribution<int> n_cites(0, 4);
    for (int c = n_cites(rng_); c > 0; --c) {
      if (auto target = random_other_br(i)) v.insert(make_quad(s, iri(bench_vocab::kCites), *target, g));
    }
    if (i < ids_.size()) v.insert(make_quad(s, iri(bench_vocab::kHasIdentifier), Term::iri(ids_[i]), g));
    return v;
  }

  GraphSet first_id_version(std::size_t i) {
    Term s = Term::iri(ids_[i]);
    Term g = id_graph();
    bool doi = std::bernoulli_distribution(0.6)(rng_);
    GraphSet v;
    v.insert(make_quad(s, Term::iri(std::string(kRdfType)), iri(bench_vocab::kIdentifier), g));
    v.insert(make_quad(s, iri(bench_vocab::kUsesIdentifierScheme),
                       iri(doi ? bench_vocab::kDoi : bench_vocab::kOrcid), g));
    v.insert(make_quad(s, iri(bench_vocab::kHasLiteralValue), Term::literal(identifier_value(doi)), g));
    return v;
  }

  std::optional<Term> random_other_br(std::size_t self) {
    if (brs_.size() < 2) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, brs_.size() - 2);
    std::size_t j = pick(rng_);
    if (j >= self) ++j;
    return Term::iri(brs_[j]);
  }

  int snapshot_count() {
    const auto& d = spec_.snapshots;
    std::normal_distribution<double> normal(d.mean, d.stdev);
    double x = d.stdev > 0 ? normal(rng_) : d.mean;
    return std::clamp(static_cast<int>(std::lround(x)), d.min, d.max);
  }

  // Deletion only closes a history; the other kinds are drawn from the
  // remaining proportions.
  Change pick_change(bool last) {
    const auto& m = spec_.change_mix;
    if (last && std::bernoulli_distribution(std::clamp(m.entity_delete, 0.0, 1.0))(rng_)) {
      return Change::kEntityDelete;
    }
    double rest = m.literal_edit + m.triple_add + m.triple_remove;
    if (rest <= 0) return Change::kLiteralEdit;
    std::discrete_distribution<int> d({m.literal_edit, m.triple_add, m.triple_remove});
    return static_cast<Change>(d(rng_));
  }

  // Next version of a live entity; never equal to the current one.
  GraphSet next_version(const std::string& entity, bool is_br, const GraphSet& cur, Change change) {
    if (change == Change::kEntityDelete) return {};
    Term s = Term::iri(entity);
    GraphSet next = cur;
    auto with_predicate = [&](std::string_view p) {
      std::vector<Quad> out;
      for (const Quad& q : cur) {
        if (q.predicate().value() == p) out.push_back(q);
      }
      return out;
    };
    if (is_br) {
      Term g = br_graph();
      auto cites = with_predicate(bench_vocab::kCites);
      if (change == Change::kTripleRemove && cites.empty()) change = Change::kTripleAdd;
      if (change == Change::kTripleAdd && brs_.size() < 2) change = Change::kLiteralEdit;
      switch (change) {
        case Change::kLiteralEdit: {
          for (const Quad& q : with_predicate(bench_vocab::kTitle)) next.erase(q);
          std::string t;
          do {
            t = title();
          } while (cur.contains(make_quad(s, iri(bench_vocab::kTitle), Term::literal(t), g)));
          next.insert(make_quad(s, iri(bench_vocab::kTitle), Term::literal(t), g));
          break;
        }
        case Change::kTripleAdd: {
          std::size_t self = std::stoul(entity.substr(entity.rfind('/') + 1)) - 1;
          for (int attempt = 0; attempt < 16 && next == cur; ++attempt) {
            next.insert(make_quad(s, iri(bench_vocab::kCites), *random_other_br(self), g));
          }
          if (next == cur) return next_version(entity, is_br, cur, Change::kLiteralEdit);
          break;
        }
        case Change::kTripleRemove: {
          std::uniform_int_distribution<std::size_t> pick(0, cites.size() - 1);
          next.erase(cites[pick(rng_)]);
          break;
        }
        case Change::kEntityDelete:
          break;
      }
      return next;
    }
    Term g = id_graph();
    if (change == Change::kLiteralEdit) {
      auto values = with_predicate(bench_vocab::kHasLiteralValue);
      bool doi = cur.contains(make_quad(s, iri(bench_vocab::kUsesIdentifierScheme),
                                        iri(bench_vocab::kDoi), g));
      std::string old = values.empty() ? "" : values.front().object().value();
      std::string v;
      if (doi && !old.empty() && std::bernoulli_distribution(0.5)(rng_)) {
        // Toggle a trailing period, the typical correction.
        v = old.back() == '.' ? old.substr(0, old.size() - 1) : old + '.';
      } else {
        do {
          v = identifier_value(doi);
        } while (v == old);
      }
      for (const Quad& q : values) next.erase(q);
      next.insert(make_quad(s, iri(bench_vocab::kHasLiteralValue), Term::literal(v), g));
      return next;
    }
    // Triple additions and removals switch the identifier scheme.
    auto schemes = with_predicate(bench_vocab::kUsesIdentifierScheme);
    bool was_doi = !schemes.empty() && schemes.front().object().value() == bench_vocab::kDoi;
    for (const Quad& q : schemes) next.erase(q);
    next.insert(make_quad(s, iri(bench_vocab::kUsesIdentifierScheme),
                          iri(was_doi ? bench_vocab::kOrcid : bench_vocab::kDoi), g));
    return next;
  }

  void build_entity(const std::string& entity, GraphSet first, bool is_br, GeneratedDataset& out) {
    int n = snapshot_count();
    std::uniform_int_distribution<long long> offset(0, 60LL * 86400);
    std::uniform_int_distribution<long long> jitter(-6LL * 3600, 6LL * 3600);
    Timestamp t = spec_.start + std::chrono::seconds(offset(rng_));
    std::uniform_int_distribution<int> agent(1, 5);

    auto& versions = out.ledger.entities[entity];
    versions.push_back(LedgerVersion{entity + "/prov/se/1", t, first, DeltaPair{first, {}}});
    std::vector<std::string> descriptions{"created"};
    for (int k = 1; k < n; ++k) {
      const GraphSet& cur = versions.back().graph;
      Change change = pick_change(k == n - 1);
      GraphSet next = next_version(entity, is_br, cur, change);
      GraphDiff diff = graph_diff(next, cur);
      t = t + std::chrono::seconds(86400 + jitter(rng_));
      versions.push_back(LedgerVersion{entity + "/prov/se/" + std::to_string(k + 1), t,
                                       std::move(next),
                                       DeltaPair{std::move(diff.added), std::move(diff.removed)}});
      descriptions.push_back(change == Change::kEntityDelete ? "deleted" : "modified");
    }
    out.data.insert_all(versions.back().graph);

    // Provenance and the replay check.
    Term subject_entity = Term::iri(entity);
    Term prov_graph = Term::iri(entity + "/prov/");
    GraphSet replay;
    for (std::size_t k = 0; k < versions.size(); ++k) {
      const auto& v = versions[k];
      Term se = Term::iri(v.snapshot);
      auto add = [&](std::string_view p, Term o) {
        out.provenance.insert(make_quad(se, iri(p), std::move(o), prov_graph));
      };
      add(kRdfType, iri(vocab::kProvEntity));
      add(vocab::kSpecializationOf, subject_entity);
      add(vocab::kGeneratedAtTime, Term::typed_literal(v.time.to_string(), std::string(kXsdDateTime)));
      if (k + 1 < versions.size()) {
        add(vocab::kInvalidatedAtTime,
            Term::typed_literal(versions[k + 1].time.to_string(), std::string(kXsdDateTime)));
      }
      add(vocab::kWasAttributedTo,
          Term::iri("https://orcid.org/0000-0000-0000-000" + std::to_string(agent(rng_))));
      add(vocab::kDescription, Term::literal("The entity '" + entity + "' has been " +
                                             descriptions[k] + "."));
      if (k == 0) {
        add(vocab::kHadPrimarySource, Term::iri("https://api.crossref.org/works/bench"));
        replay = v.graph;
        continue;
      }
      add(vocab::kWasDerivedFrom, Term::iri(versions[k - 1].snapshot));
      std::vector<Quad> deletes(v.delta.removed.begin(), v.delta.removed.end());
      std::vector<Quad> inserts(v.delta.added.begin(), v.delta.added.end());
      add(vocab::kHasUpdateQuery, Term::literal(render_update(deletes, inserts)));
      replay = apply(Delta{deletes, inserts, ""}, std::move(replay));
      if (!(replay == v.graph)) spec_error("generated delta does not replay for <" + entity + ">");
    }
  }

  const GenSpec& spec_;
  std::mt19937_64 rng_;
  std::vector<std::string> brs_;
  std::vector<std::string> ids_;
};

}  // namespace

void GenSpec::validate() const {
  if (n_entities == 0) spec_error("n_entities must be positive");
  if (snapshots.min < 1) spec_error("snapshot minimum must be at least 1");
  if (snapshots.max < snapshots.min) spec_error("snapshot maximum is below the minimum");
  if (snapshots.stdev < 0) spec_error("snapshot stdev must not be negative");
  const auto& m = change_mix;
  for (double p : {m.literal_edit, m.triple_add, m.triple_remove, m.entity_delete}) {
    if (p < 0 || !std::isfinite(p)) spec_error("change proportions must be non-negative");
  }
  double sum = m.literal_edit + m.triple_add + m.triple_remove + m.entity_delete;
  if (std::abs(sum - 1.0) > 1e-9) spec_error("change proportions must sum to 1");
  if (!is_absolute_iri(base_iri)) spec_error("base IRI must be absolute");
}

GeneratedDataset generate(const GenSpec& spec) {
  spec.validate();
  return Generator(spec).run();
}

const LedgerVersion* OracleLedger::version_at(const std::string& entity, Timestamp t) const {
  auto it = entities.find(entity);
  if (it == entities.end()) return nullptr;
  const LedgerVersion* found = nullptr;
  for (const auto& v : it->second) {
    if (t < v.time) break;
    found = &v;
  }
  return found;
}

GraphSet OracleLedger::dataset_at(Timestamp t) const {
  GraphSet out;
  for (const auto& [entity, _] : entities) {
    if (auto v = version_at(entity, t)) out.insert_all(v->graph);
  }
  return out;
}

GraphSet OracleLedger::dataset_at(Timestamp t, const std::set<std::string>& subset) const {
  GraphSet out;
  for (const auto& entity : subset) {
    if (auto v = version_at(entity, t)) out.insert_all(v->graph);
  }
  return out;
}

std::vector<Timestamp> OracleLedger::all_times() const {
  std::set<Timestamp> times;
  for (const auto& [_, versions] : entities) {
    for (const auto& v : versions) times.insert(v.time);
  }
  return {times.begin(), times.end()};
}

void write_dataset(const GeneratedDataset& dataset, const fs::path& dir) {
  auto write = [](const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error(ErrorCode::kConfigError, "cannot write '" + path.string() + "'");
  };
  std::error_code ec;
  fs::create_directories(dir / "ledger", ec);
  if (ec) throw Error(ErrorCode::kConfigError, "cannot create '" + dir.string() + "'");
  write(dir / "data.nq", serialize(dataset.data));
  write(dir / "provenance.nq", serialize(dataset.provenance));
  nlohmann::json index = nlohmann::json::array();
  std::size_t n = 0;
  for (const auto& [entity, versions] : dataset.ledger.entities) {
    for (const auto& v : versions) {
      std::string file = "v" + std::to_string(++n) + ".nq";
      write(dir / "ledger" / file, serialize(v.graph));
      index.push_back({{"entity", entity},
                       {"snapshot", v.snapshot},
                       {"time", v.time.to_string()},
                       {"file", file}});
    }
  }
  write(dir / "ledger" / "index.json", index.dump(1) + "\n");
}

}  // namespace chrono_rdf
