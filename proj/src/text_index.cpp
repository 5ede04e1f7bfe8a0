#include <algorithm>
#include <iterator>

#include "chrono_rdf/rdf_io.hpp"
#include "chrono_rdf/sources.hpp"

namespace chrono_rdf {

TextIndex TextIndex::build(const ProvenanceSource& provenance) {
  TextIndex index;
  provenance.for_each_delta([&](const DeltaHit& hit, const std::string& text) {
    GraphSet quads = parse_document(text, DocumentFormat::kNQuads);
    for (const Quad& q : quads) {
      index.postings_[q.subject().to_ntriples()].insert(hit);
      index.postings_[q.predicate().to_ntriples()].insert(hit);
      index.postings_[q.object().to_ntriples()].insert(hit);
      if (q.graph) index.postings_[q.graph->to_ntriples()].insert(hit);
    }
  });
  return index;
}

// A term form occurs in a canonical delta text exactly when it occurs inside
// one of the delta's own term forms, so the key set is scanned rather than
// assuming whole-term equality.
std::set<DeltaHit> TextIndex::lookup(std::string_view form) const {
  std::set<DeltaHit> out;
  auto exact = postings_.find(form);
  if (exact != postings_.end()) out = exact->second;
  for (const auto& [key, hits] : postings_) {
    if (key.size() > form.size() && key.find(form) != std::string::npos) {
      out.insert(hits.begin(), hits.end());
    }
  }
  return out;
}

std::set<DeltaHit> TextIndex::search(const std::vector<std::string>& forms) const {
  if (forms.empty()) return {};
  std::set<DeltaHit> out = lookup(forms.front());
  for (std::size_t i = 1; i < forms.size() && !out.empty(); ++i) {
    std::set<DeltaHit> next = lookup(forms[i]);
    std::set<DeltaHit> both;
    std::set_intersection(out.begin(), out.end(), next.begin(), next.end(),
                          std::inserter(both, both.end()));
    out = std::move(both);
  }
  return out;
}

}  // namespace chrono_rdf
