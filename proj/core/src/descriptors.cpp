#include "symdyn/descriptors.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "symdyn/counterexample.hpp"
#include "symdyn/error.hpp"

namespace symdyn {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

VertexId vertex_from(const json& j) {
  if (j.is_number_integer()) return VertexId(j.get<std::int64_t>());
  if (j.is_array()) {
    std::vector<std::int64_t> c = j.get<std::vector<std::int64_t>>();
    if (c.empty() || c.size() > VertexId::kMaxCoords) throw InvalidArgument("vertex arrays hold 1 to 4 integers");
    return VertexId::from_span(c);
  }
  throw InvalidArgument("vertex must be an integer or an integer array: " + j.dump());
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw InvalidArgument(std::string("\"") + key + "\" must be an integer");
  return j[key].get<int>();
}

DigraphPtr graph_from(const json& j) {
  if (j.contains("edges")) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2) throw InvalidArgument("edges are [v, w] pairs");
      edges.emplace_back(vertex_from(e[0]), vertex_from(e[1]));
    }
    std::vector<VertexId> extra;
    if (j.contains("vertices"))
      for (const auto& v : j["vertices"]) extra.push_back(vertex_from(v));
    return std::make_shared<ExplicitDigraph>(std::move(edges), std::move(extra));
  }
  const std::string family = j.value("family", "");
  if (family == "cayley_zd") return cayley_zd(get_int(j, "D", 1));
  if (family == "cayley_zdne") return cayley_zdne(get_int(j, "D", 1), get_int(j, "E", 0));
  if (family == "unit_shift") return unit_shift_graph(get_int(j, "D", 0), get_int(j, "E", 1));
  if (family == "odometer") return odometer_graph();
  if (family == "shortcut") return shortcut_graph();
  if (family == "counterexample") return counterexample_graph();
  throw InvalidArgument("unknown graph family \"" + family + "\"");
}

std::vector<Symbol> symbols_from(const json& j) {
  std::vector<Symbol> out;
  for (const auto& s : j) {
    if (!s.is_number_integer() || s.get<int>() < 0 || s.get<int>() >= kMaxAlphabet)
      throw InvalidArgument("symbols are integers in [0, 64)");
    out.push_back(static_cast<Symbol>(s.get<int>()));
  }
  return out;
}

PatternSpace apply_allowed(const json& j, PatternSpace base) {
  if (!j.contains("allowed")) return base;
  auto masks = std::make_shared<VertexMap<SymbolSet>>();
  for (const auto& a : j["allowed"]) {
    SymbolSet m = 0;
    for (Symbol s : symbols_from(a.at("symbols"))) m |= SymbolSet{1} << s;
    (*masks)[vertex_from(a.at("vertex"))] = m;
  }
  return PatternSpace(
      base.alphabet(),
      [masks, base](const VertexId& v) {
        auto it = masks->find(v);
        return it == masks->end() ? base.allowed(v) : it->second;
      },
      base.name() + "+allowed");
}

LoadedSystem named_system(const json& j) {
  const std::string name = j["system"].get<std::string>();
  if (name == "odometer") {
    const auto m = j.value("moduli", std::vector<int>{2});
    return {odometer_system(m), odometer_space(m)};
  }
  if (name == "full_shift") {
    const int a = get_int(j, "alphabet", 2);
    return {full_shift(a, get_int(j, "D", 0), get_int(j, "E", 1)), full_space(a)};
  }
  if (name == "ca_on_zd") {
    const int a = get_int(j, "alphabet", 2);
    auto offsets = j.at("offsets").get<std::vector<std::vector<std::int64_t>>>();
    return {ca_on_zd(a, get_int(j, "D", 1), std::move(offsets), symbols_from(j.at("table"))), full_space(a)};
  }
  if (name == "counterexample") return {cex_rules(), cex_space()};
  throw InvalidArgument("unknown system \"" + name + "\"");
}

}  // namespace

DigraphPtr graph_from_json(const std::string& text) { return graph_from(parse(text)); }

LoadedSystem system_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    if (j.contains("system")) {
      LoadedSystem ls = named_system(j);
      ls.space = apply_allowed(j, ls.space);
      return ls;
    }
    const int alphabet = get_int(j, "alphabet", 2);
    DigraphPtr graph = graph_from(j.at("graph"));
    auto rules = std::make_shared<VertexMap<LocalRule>>();
    for (const auto& r : j.at("rules")) {
      LocalRule rule;
      for (const auto& u : r.at("inputs")) rule.inputs.push_back(vertex_from(u));
      rule.table = symbols_from(r.at("table"));
      (*rules)[vertex_from(r.at("vertex"))] = std::move(rule);
    }
    auto factory = [rules](const VertexId& v) {
      auto it = rules->find(v);
      if (it == rules->end()) throw InvalidArgument("no rule given for vertex " + v.to_string());
      return it->second;
    };
    auto sys = std::make_shared<SymbolicSystem>(Alphabet{alphabet, {}}, graph, factory,
                                                j.value("name", std::string("custom")));
    return {sys, apply_allowed(j, full_space(alphabet))};
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad system description: ") + e.what());
  }
}

LoadedSystem load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return system_from_json(ss.str());
}

BasedMetric metric_from_json(const std::string& text, DigraphPtr graph) {
  const json j = parse(text);
  try {
    std::vector<VertexId> estuary;
    for (const auto& v : j.at("estuary")) estuary.push_back(vertex_from(v));
    const double lambda = j.value("lambda", 2.0);
    if (!(lambda > 1)) throw InvalidArgument("lambda must exceed 1");
    const std::string scheme = j.value("scheme", std::string("finite"));
    if (scheme == "doubleexp") return BasedMetric{double_exponential_scheme(estuary), lambda, graph};
    if (scheme != "finite") throw InvalidArgument("scheme must be finite or doubleexp");
    std::vector<double> coeffs = j.contains("coeffs") ? j["coeffs"].get<std::vector<double>>()
                                                      : std::vector<double>(estuary.size(), 1.0 / estuary.size());
    return BasedMetric{finite_scheme(std::move(estuary), std::move(coeffs)), lambda, graph};
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad metric description: ") + e.what());
  }
}

}  // namespace symdyn
