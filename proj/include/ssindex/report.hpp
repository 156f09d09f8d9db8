#pragma once

#include <json.hpp>

#include "ssindex/tree.hpp"
#include "ssindex/witness.hpp"

namespace ssindex {

// JSON rendering for every result type the CLI and the test suites consume.
// All numbers are emitted as canonical strings (rationals stay exact) or as
// plain integers, so serialized output is byte-stable across runs.
using json = nlohmann::json;

inline json json_of(const NormValue& v) {
  if (v.is_exact()) return rational_str(v.value());
  json j;
  j["square"] = rational_str(v.square());
  j["approx"] = decimal_str(v.enclosure().lo, 9);
  return j;
}

inline json json_of(const FiniteSet& f) {
  json arr = json::array();
  for (int v : f.elements()) arr.push_back(v);
  return arr;
}

inline json json_of(const FiniteTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes()) {
    std::string line;
    if (n.empty()) {
      line = "-";
    } else {
      for (std::size_t i = 0; i < n.size(); ++i) {
        if (i) line += ' ';
        line += std::to_string(n[i]);
      }
    }
    nodes.push_back(line);
  }
  return nodes;
}

inline json json_of(const TsirelsonWitness& w) {
  json j;
  if (w.is_leaf()) {
    j["coordinate"] = w.coordinate;
  } else {
    j["block"] = json_of(w.block);
    json parts = json::array();
    for (const auto& p : w.parts) parts.push_back(json_of(p));
    j["parts"] = parts;
  }
  return j;
}

inline json json_of(const Certificate& c) {
  json j;
  j["xi"] = c.xi.str();
  j["epsilon"] = rational_str(c.epsilon);
  j["F"] = json_of(c.indices);
  json coeffs = json::array();
  for (const auto& a : c.coefficients) coeffs.push_back(rational_str(a));
  j["coefficients"] = coeffs;
  j["ratio"] = json_of(c.ratio);
  j["seed"] = c.seed;
  return j;
}

inline json json_of(const WitnessSearchResult& r) {
  json j;
  j["outcome"] = r.certificate ? "certificate" : "failure";
  if (r.certificate) j["certificate"] = json_of(*r.certificate);
  j["best_ratio"] = json_of(r.best_ratio);
  j["best_indices"] = json_of(r.best_indices);
  j["sets_examined"] = r.sets_examined;
  j["enumeration_truncated"] = r.enumeration_truncated;
  return j;
}

inline json json_of(const WitnessTreeResult& r) {
  json j;
  j["verdict"] = verdict_str(r.verdict);
  j["rank"] = r.rank;
  j["node_count"] = r.truncation.size();
  j["nodes"] = json_of(r.truncation);
  return j;
}

inline json json_of(const ExplorationResult& r) {
  json j;
  j["verdict"] = verdict_str(r.verdict);
  j["rank"] = r.rank;
  j["node_count"] = r.truncation.size();
  j["nodes"] = json_of(r.truncation);
  return j;
}

inline json json_of(const IndexReport& r) {
  json j;
  j["bracket"] = r.bracket ? json(r.bracket->str()) : json(nullptr);
  json cells = json::array();
  for (const auto& cell : r.cells) {
    json cj;
    cj["xi"] = cell.xi.str();
    cj["epsilon"] = rational_str(cell.epsilon);
    cj["result"] = json_of(cell.outcome);
    cells.push_back(cj);
  }
  j["cells"] = cells;
  return j;
}

inline json json_of_search_config(const SearchConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["max_candidate_sets"] = cfg.max_candidate_sets;
  j["max_span"] = cfg.max_span;
  j["max_functionals"] = cfg.max_functionals;
  j["max_lp_rows"] = cfg.max_lp_rows;
  j["vertex_combo_budget"] = cfg.vertex_combo_budget;
  j["random_tries"] = cfg.random_tries;
  j["refine_rounds"] = cfg.refine_rounds;
  j["eigen_refine_steps"] = cfg.eigen_refine_steps;
  return j;
}

}  // namespace ssindex
