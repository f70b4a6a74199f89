#pragma once

#include <optional>
#include <string>

#include "symdyn/digraph.hpp"
#include "symdyn/metricspace.hpp"
#include "symdyn/symsys.hpp"

namespace symdyn {

// Graph descriptors: {"family": "cayley_zd", "D": 2}, {"family": "cayley_zdne",
// "D": 1, "E": 1}, {"family": "unit_shift", "D": 0, "E": 1}, {"family":
// "odometer"}, {"family": "shortcut"}, {"family": "counterexample"}, or
// {"edges": [[v, w], ...]}. Vertices are integers or integer arrays.
DigraphPtr graph_from_json(const std::string& text);

struct LoadedSystem {
  SystemPtr system;
  PatternSpace space;
};

// Either a named system ({"system": "odometer", "moduli": [2]}, "full_shift",
// "ca_on_zd", "counterexample") or an explicit one: {"alphabet": k, "graph":
// {...}, "rules": [{"vertex": v, "inputs": [...], "table": [...]}]}.
// An optional "allowed": [{"vertex": v, "symbols": [...]}] restricts the
// product space; unlisted vertices allow the whole alphabet.
LoadedSystem system_from_json(const std::string& text);
LoadedSystem load_system_file(const std::string& path);

// {"estuary": [...], "lambda": 2, "scheme": "finite" | "doubleexp",
// "coeffs": [...]} on the given graph.
BasedMetric metric_from_json(const std::string& text, DigraphPtr graph);

}  // namespace symdyn
