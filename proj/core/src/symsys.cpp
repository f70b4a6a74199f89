#include "symdyn/symsys.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "eval_plan.hpp"
#include "symdyn/error.hpp"

namespace symdyn {

std::vector<Symbol> symbols_of(SymbolSet s) {
  std::vector<Symbol> out;
  for (int i = 0; i < 64; ++i)
    if (s >> i & 1) out.push_back(static_cast<Symbol>(i));
  return out;
}

std::string Alphabet::label(Symbol s) const {
  if (s < labels.size()) return labels[s];
  return std::to_string(s);
}

namespace {

std::size_t checked_power(int base, std::size_t exp, std::size_t limit, const char* what) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (n > limit / static_cast<std::size_t>(base))
      throw CapExceeded(what, static_cast<double>(exp) * std::log2(static_cast<double>(base)));
    n *= static_cast<std::size_t>(base);
  }
  return n;
}

std::string join_vertices(const VertexSet& s, std::size_t limit = 12) {
  std::string out;
  for (std::size_t i = 0; i < s.size() && i < limit; ++i) out += (i ? " " : "") + s[i].to_string();
  if (s.size() > limit) out += " ...";
  return out;
}

}  // namespace

Symbol LocalRule::apply(std::span<const Symbol> in, int alphabet) const {
  if (in.size() != inputs.size()) throw InvalidArgument("rule arity mismatch");
  if (!tabulated()) return fn(in);
  std::size_t idx = 0;
  for (Symbol s : in) idx = idx * static_cast<std::size_t>(alphabet) + s;
  return table[idx];
}

ProperReport check_proper(const LocalRule& rule, int alphabet) {
  const std::size_t k = rule.inputs.size();
  const std::size_t total = checked_power(alphabet, k, std::size_t{1} << 24, "properness scan");
  ProperReport rep;
  rep.witnesses.resize(k);
  std::vector<Symbol> x(k, 0), y;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = k; i-- > 0;) {
      x[i] = static_cast<Symbol>(c % alphabet);
      c /= alphabet;
    }
    const Symbol fx = rule.apply(x, alphabet);
    for (std::size_t i = 0; i < k; ++i) {
      if (rep.witnesses[i] || x[i] != 0) continue;
      y = x;
      for (int s = 1; s < alphabet; ++s) {
        y[i] = static_cast<Symbol>(s);
        if (rule.apply(y, alphabet) != fx) {
          rep.witnesses[i] = std::make_pair(x, y);
          break;
        }
      }
    }
  }
  rep.proper = std::all_of(rep.witnesses.begin(), rep.witnesses.end(), [](const auto& w) { return w.has_value(); });
  return rep;
}

// ---------------------------------------------------------------------------

SymbolicSystem::SymbolicSystem(Alphabet alphabet, DigraphPtr graph, RuleFactory rules, std::string name)
    : alphabet_(std::move(alphabet)), graph_(std::move(graph)), factory_(std::move(rules)), name_(std::move(name)) {
  if (alphabet_.size < 2 || alphabet_.size > kMaxAlphabet)
    throw InvalidArgument("alphabet size must be in [2, 64]");
}

const LocalRule& SymbolicSystem::rule_at(const VertexId& v) const {
  std::lock_guard lock(mu_);
  if (auto it = cache_.find(v); it != cache_.end()) return *it->second;

  LocalRule rule = factory_(v);
  VertexSet declared = rule.inputs;
  VertexSet network = graph_->in_neighbors(v);
  canonicalize(declared);
  canonicalize(network);
  if (declared.size() != rule.inputs.size())
    throw InvalidArgument("rule at " + v.to_string() + " lists an input twice");
  if (declared != network)
    throw InvalidArgument("rule at " + v.to_string() + " reads {" + join_vertices(declared) +
                          "} but the network gives {" + join_vertices(network) + "}");
  if (rule.tabulated()) {
    const std::size_t want = checked_power(alphabet_.size, rule.inputs.size(), std::size_t{1} << 26, "rule table");
    if (rule.table.size() != want)
      throw InvalidArgument("rule table at " + v.to_string() + " has " + std::to_string(rule.table.size()) +
                            " entries, expected " + std::to_string(want));
    for (Symbol s : rule.table)
      if (s >= alphabet_.size) throw InvalidArgument("rule table at " + v.to_string() + " leaves the alphabet");
  } else if (!rule.fn) {
    throw InvalidArgument("rule at " + v.to_string() + " has neither table nor function");
  }
  auto [it, _] = cache_.emplace(v, std::make_unique<const LocalRule>(std::move(rule)));
  return *it->second;
}

// ---------------------------------------------------------------------------

PatternSpace::PatternSpace(int alphabet, AllowedFn allowed, std::string name)
    : alphabet_(alphabet), allowed_(std::move(allowed)), name_(std::move(name)) {}

SymbolSet PatternSpace::allowed(const VertexId& v) const {
  const SymbolSet s = allowed_(v) & all_symbols(alphabet_);
  if (s == 0) throw InvalidArgument("no symbol allowed at " + v.to_string() + " in " + name_);
  return s;
}

PatternSpace full_space(int alphabet) {
  return PatternSpace(alphabet, [m = all_symbols(alphabet)](const VertexId&) { return m; },
                      "full(" + std::to_string(alphabet) + ")");
}

std::optional<Symbol> Configuration::get(const VertexId& v) const {
  auto it = values_.find(v);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

Symbol Configuration::at(const VertexId& v) const {
  auto it = values_.find(v);
  if (it == values_.end()) throw InsufficientDomain("configuration has no value at " + v.to_string());
  return it->second;
}

VertexSet Configuration::domain() const {
  VertexSet out;
  out.reserve(values_.size());
  for (const auto& [v, _] : values_) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

VertexSet LightCone::cone_upto(int t) const {
  VertexSet out;
  for (int s = 0; s <= t && s < static_cast<int>(layers.size()); ++s) out = set_union(out, layers[s]);
  return out;
}

LightCone light_cone(const SymbolicSystem& sys, const VertexSet& W, int T) {
  if (T < 0) throw InvalidArgument("horizon must be >= 0");
  LightCone lc;
  lc.window = make_set(W);
  if (lc.window.empty()) throw InvalidArgument("window must be nonempty");
  lc.horizon = T;
  lc.layers.push_back(lc.window);
  VertexHashSet all(lc.window.begin(), lc.window.end());
  for (int t = 0; t < T; ++t) {
    VertexSet next;
    for (const auto& v : lc.layers.back())
      for (const auto& u : sys.rule_at(v).inputs) next.push_back(u);
    canonicalize(next);
    all.insert(next.begin(), next.end());
    lc.layers.push_back(std::move(next));
  }
  lc.cone.assign(all.begin(), all.end());
  std::sort(lc.cone.begin(), lc.cone.end());
  return lc;
}

std::vector<std::size_t> propagation(const SymbolicSystem& sys, const VertexId& v, int T) {
  const LightCone lc = light_cone(sys, {v}, T);
  std::vector<std::size_t> rho;
  VertexHashSet seen;
  for (const auto& layer : lc.layers) {
    seen.insert(layer.begin(), layer.end());
    rho.push_back(seen.size());
  }
  return rho;
}

Trajectory evaluate(const SymbolicSystem& sys, const Configuration& x, const VertexSet& W, int T) {
  const detail::EvalPlan plan = detail::compile_plan(sys, W, T);
  VertexSet missing;
  for (const auto& c : plan.cells)
    if (!x.has(c)) missing.push_back(c);
  if (!missing.empty()) {
    canonicalize(missing);
    throw InsufficientDomain("configuration misses " + std::to_string(missing.size()) +
                             " light-cone cells: " + join_vertices(missing));
  }
  std::vector<Symbol> vals(plan.entries.size(), 0);
  for (std::size_t i = 0; i < plan.cells.size(); ++i) {
    const Symbol s = x.at(plan.cells[i]);
    if (s >= sys.alphabet()) throw InvalidArgument("symbol outside alphabet at " + plan.cells[i].to_string());
    vals[plan.base[i]] = s;
  }
  plan.run_all(vals);
  Trajectory tr;
  tr.window = plan.window;
  const std::size_t w = plan.window.size();
  for (int s = 0; s <= T; ++s) {
    std::vector<Symbol> row(w);
    for (std::size_t j = 0; j < w; ++j) row[j] = vals[plan.observed[s * w + j]];
    tr.steps.push_back(std::move(row));
  }
  return tr;
}

Configuration apply_once(const SymbolicSystem& sys, const Configuration& x, const VertexSet& cells) {
  Configuration y;
  std::vector<Symbol> in;
  for (const auto& v : cells) {
    const LocalRule& rule = sys.rule_at(v);
    in.clear();
    bool ok = true;
    for (const auto& u : rule.inputs) {
      auto s = x.get(u);
      if (!s) {
        ok = false;
        break;
      }
      in.push_back(*s);
    }
    if (ok) y.set(v, rule.apply(in, sys.alphabet()));
  }
  return y;
}

// ---------------------------------------------------------------------------

std::optional<SensitivityCertificate> sensitivity_certificate(const SymbolicSystem& sys, const VertexId& v,
                                                              int R, int T_max) {
  if (R < 0 || T_max < 0) throw InvalidArgument("R and T_max must be >= 0");
  const LightCone lc = light_cone(sys, {v}, T_max);
  BallExpansion ball(sys.graph(), {v});
  ball.expand_to(R);
  for (int t = 0; t <= T_max; ++t)
    for (const auto& w : lc.layers[t])
      if (!ball.reached(w)) return SensitivityCertificate{t, w};
  return std::nullopt;
}

EnvelopeResult equicontinuity_envelope(const SymbolicSystem& sys, const PatternSpace& space, const VertexSet& W,
                                       int T_probe, int R_cap, std::uint64_t pattern_cap) {
  if (T_probe < 1) throw InvalidArgument("T_probe must be >= 1");
  const LightCone lc = light_cone(sys, W, T_probe);
  EnvelopeResult res;
  VertexHashSet seen;
  for (const auto& layer : lc.layers) {
    seen.insert(layer.begin(), layer.end());
    res.cone_sizes.push_back(seen.size());
  }

  BallExpansion ball(sys.graph(), lc.window);
  for (const auto& u : lc.cone) {
    int r = 0;
    while (r <= R_cap && (ball.expand_to(r), !ball.reached(u))) ++r;
    res.reach = std::max(res.reach, r);
  }

  const int half = T_probe / 2;
  res.stable = res.cone_sizes[half] == res.cone_sizes[T_probe];
  if (!res.stable) {
    res.report = "cone grew from " + std::to_string(res.cone_sizes[half]) + " to " +
                 std::to_string(res.cone_sizes[T_probe]) + " cells over t in [" + std::to_string(half) + ", " +
                 std::to_string(T_probe) + "]";
    return res;
  }
  res.envelope = lc.cone;

  // Exhaustive check of statement (10) up to T_probe: simulate on a ball that
  // strictly contains U, with two different fillings outside U.
  double log2_patterns = 0;
  for (const auto& u : res.envelope) log2_patterns += std::log2(space.count(u));
  if (log2_patterns > std::log2(static_cast<double>(pattern_cap)))
    throw CapExceeded("envelope verification", log2_patterns);
  const VertexSet outer = in_ball(sys.graph(), res.envelope, T_probe).members;
  const VertexSet rim = set_difference(outer, res.envelope);
  std::vector<std::vector<Symbol>> choices;
  for (const auto& u : res.envelope) choices.push_back(space.allowed_symbols(u));

  std::vector<std::size_t> digit(choices.size(), 0);
  for (bool more = true; more;) {
    std::vector<std::vector<Symbol>> traj[2];
    for (int variant = 0; variant < 2; ++variant) {
      Configuration x;
      for (std::size_t i = 0; i < choices.size(); ++i) x.set(res.envelope[i], choices[i][digit[i]]);
      for (const auto& r : rim) {
        const auto syms = space.allowed_symbols(r);
        x.set(r, variant == 0 ? syms.front() : syms.back());
      }
      VertexSet alive = outer;
      for (int t = 0; t <= T_probe; ++t) {
        std::vector<Symbol> row;
        for (const auto& w : lc.window) row.push_back(x.at(w));
        traj[variant].push_back(std::move(row));
        if (t == T_probe) break;
        x = apply_once(sys, x, alive);
        alive = x.domain();
      }
    }
    if (traj[0] != traj[1]) {
      res.stable = false;
      res.envelope.clear();
      res.report = "window trajectory depends on cells outside the stabilised cone";
      return res;
    }
    std::size_t i = 0;
    while (i < digit.size() && ++digit[i] == choices[i].size()) digit[i++] = 0;
    more = i < digit.size();
  }
  res.certified_horizon = T_probe;
  res.report = "cone stable at " + std::to_string(res.envelope.size()) + " cells";
  return res;
}

std::vector<FactorChainEntry> odometer_factor_chain(const SymbolicSystem& sys, const PatternSpace& space,
                                                    const std::vector<VertexSet>& windows,
                                                    const std::vector<int>& horizons, std::uint64_t pattern_cap) {
  if (horizons.size() != windows.size() && horizons.size() != 1)
    throw InvalidArgument("give one horizon or one per window");
  std::vector<FactorChainEntry> out;
  for (std::size_t n = 0; n < windows.size(); ++n) {
    const VertexSet W = make_set(windows[n]);
    if (n > 0 && !is_subset(make_set(windows[n - 1]), W)) throw InvalidArgument("windows must be nested");
    const int h = horizons.size() == 1 ? horizons[0] : horizons[n];
    if (h < 1) throw InvalidArgument("horizon must be >= 1");

    const int probe = std::max(4, 2 * static_cast<int>(W.size()));
    const EnvelopeResult env = equicontinuity_envelope(sys, space, W, probe, probe, pattern_cap);
    if (!env.stable) throw NotEquicontinuous("window {" + join_vertices(W) + "}: " + env.report);

    const detail::EvalPlan plan = detail::compile_plan(sys, W, h);
    for (const auto& c : plan.cells)
      if (!contains(env.envelope, c))
        throw NotEquicontinuous("cone of {" + join_vertices(W) + "} at horizon " + std::to_string(h) +
                                " leaves the envelope at " + c.to_string());

    std::vector<std::vector<Symbol>> choices;
    double log2_patterns = 0;
    for (const auto& c : plan.cells) {
      choices.push_back(space.allowed_symbols(c));
      log2_patterns += std::log2(static_cast<double>(choices.back().size()));
    }
    if (log2_patterns > std::log2(static_cast<double>(pattern_cap))) throw CapExceeded("factor chain", log2_patterns);

    std::set<std::vector<Symbol>> Y;
    std::vector<Symbol> vals(plan.entries.size(), 0);
    std::vector<std::size_t> digit(choices.size(), 0);
    const std::size_t w = W.size();
    for (bool more = true; more;) {
      for (std::size_t i = 0; i < choices.size(); ++i) vals[plan.base[i]] = choices[i][digit[i]];
      plan.run_all(vals);
      std::vector<Symbol> y(plan.observed.size());
      for (std::size_t k = 0; k < y.size(); ++k) y[k] = vals[plan.observed[k]];
      Y.insert(std::move(y));
      std::size_t i = 0;
      while (i < digit.size() && ++digit[i] == choices[i].size()) digit[i++] = 0;
      more = i < digit.size();
    }

    std::set<std::vector<Symbol>> truncated, shifted;
    for (const auto& y : Y) {
      truncated.emplace(y.begin(), y.end() - static_cast<std::ptrdiff_t>(w));
      shifted.emplace(y.begin() + static_cast<std::ptrdiff_t>(w), y.end());
    }
    FactorChainEntry e;
    e.window = W;
    e.envelope = env.envelope;
    e.horizon = h;
    e.orbit_count = Y.size();
    e.sigma_is_permutation = truncated.size() == Y.size() && truncated == shifted;
    out.push_back(std::move(e));
  }
  return out;
}

SubsymmetryReport subsymmetry_check(const SymbolicSystem& sys, const Subisometry& tau, const VertexSet& probe_in,
                                    const PatternSpace& space, int samples, std::uint64_t seed) {
  const VertexSet probe = make_set(probe_in);
  SubsymmetryReport rep;
  rep.network = verify_subisometry(sys.graph(), tau, probe);

  VertexSet checkable;
  VertexSet domain;
  for (const auto& v : probe) {
    const VertexId tv = tau(v);
    if (!sys.graph().contains(tv)) continue;
    if (space.allowed(v) != space.allowed(tv)) {
      rep.space_invariant = false;
      rep.violations.push_back("allowed symbols differ at " + v.to_string() + " and " + tv.to_string());
    }
    checkable.push_back(v);
    domain.push_back(tv);
    for (const auto& u : sys.rule_at(tv).inputs) domain.push_back(u);
    for (const auto& u : sys.rule_at(v).inputs) {
      const VertexId tu = tau(u);
      if (!sys.graph().contains(tu)) {
        rep.commutes = false;
        rep.violations.push_back("image of input " + u.to_string() + " leaves the universe");
      }
      domain.push_back(tu);
    }
  }
  canonicalize(domain);
  domain.erase(std::remove_if(domain.begin(), domain.end(), [&](const VertexId& u) { return !sys.graph().contains(u); }),
               domain.end());

  std::mt19937_64 rng(seed);
  std::vector<Symbol> lhs_in, rhs_in;
  for (int s = 0; s < samples && rep.commutes; ++s) {
    const Configuration x = random_configuration(space, domain, rng);
    for (const auto& v : checkable) {
      const VertexId tv = tau(v);
      const LocalRule& rt = sys.rule_at(tv);
      const LocalRule& rv = sys.rule_at(v);
      lhs_in.clear();
      rhs_in.clear();
      for (const auto& u : rt.inputs) lhs_in.push_back(x.at(u));
      for (const auto& u : rv.inputs) rhs_in.push_back(x.at(tau(u)));
      const Symbol lhs = rt.apply(lhs_in, sys.alphabet());
      const Symbol rhs = rv.apply(rhs_in, sys.alphabet());
      if (lhs != rhs) {
        rep.commutes = false;
        rep.violations.push_back("sample " + std::to_string(s) + ": Phi then tau gives " + std::to_string(lhs) +
                                 " at " + v.to_string() + ", tau then Phi gives " + std::to_string(rhs));
        break;
      }
    }
    ++rep.samples_checked;
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

int modulus_at(const std::vector<int>& m, std::int64_t n) {
  return m[static_cast<std::size_t>(std::min<std::int64_t>(n, static_cast<std::int64_t>(m.size()) - 1))];
}

std::string moduli_label(const std::vector<int>& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  return s + ",...";
}

void validate_moduli(const std::vector<int>& m) {
  if (m.empty()) throw InvalidArgument("odometer needs at least one modulus");
  for (int k : m)
    if (k < 2 || k > kMaxAlphabet) throw InvalidArgument("odometer moduli must be in [2, 64]");
}

Symbol odometer_step(const std::vector<int>& m, std::span<const Symbol> a) {
  const std::size_t N = a.size() - 1;
  for (std::size_t n = 0; n < N; ++n)
    if (a[n] != modulus_at(m, static_cast<std::int64_t>(n)) - 1) return a[N];
  return static_cast<Symbol>((a[N] + 1) % modulus_at(m, static_cast<std::int64_t>(N)));
}

std::vector<Symbol> tabulate(int alphabet, std::size_t arity, const std::function<Symbol(std::span<const Symbol>)>& f) {
  const std::size_t total = checked_power(alphabet, arity, std::size_t{1} << 26, "rule table");
  std::vector<Symbol> table(total);
  std::vector<Symbol> x(arity);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = arity; i-- > 0;) {
      x[i] = static_cast<Symbol>(c % alphabet);
      c /= alphabet;
    }
    table[code] = f(x);
  }
  return table;
}

}  // namespace

SystemPtr odometer_system(std::vector<int> moduli) {
  validate_moduli(moduli);
  const int alphabet = *std::max_element(moduli.begin(), moduli.end());
  auto factory = [moduli, alphabet](const VertexId& v) {
    LocalRule rule;
    for (std::int64_t n = 0; n <= v.index(); ++n) rule.inputs.emplace_back(n);
    auto step = [moduli](std::span<const Symbol> a) { return odometer_step(moduli, a); };
    if (std::pow(static_cast<double>(alphabet), static_cast<double>(rule.inputs.size())) <= 4096)
      rule.table = tabulate(alphabet, rule.inputs.size(), step);
    else
      rule.fn = step;
    return rule;
  };
  return std::make_shared<SymbolicSystem>(Alphabet{alphabet, {}}, odometer_graph(), factory,
                                          "odometer(m=" + moduli_label(moduli) + ")");
}

PatternSpace odometer_space(std::vector<int> moduli) {
  validate_moduli(moduli);
  const int alphabet = *std::max_element(moduli.begin(), moduli.end());
  return PatternSpace(
      alphabet, [moduli](const VertexId& v) { return all_symbols(modulus_at(moduli, v.index())); },
      "odometer(m=" + moduli_label(moduli) + ")");
}

SystemPtr full_shift(int alphabet, int d, int e) {
  auto graph = unit_shift_graph(d, e);
  auto factory = [graph, alphabet](const VertexId& v) {
    LocalRule rule;
    rule.inputs = graph->in_neighbors(v);
    for (int s = 0; s < alphabet; ++s) rule.table.push_back(static_cast<Symbol>(s));
    return rule;
  };
  return std::make_shared<SymbolicSystem>(Alphabet{alphabet, {}}, graph, factory,
                                          "full_shift(A=" + std::to_string(alphabet) + "," + graph->describe() + ")");
}

SystemPtr ca_on_zd(int alphabet, int d, std::vector<std::vector<std::int64_t>> offsets, std::vector<Symbol> table) {
  {
    auto sorted = offsets;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidArgument("neighbourhood offsets must be distinct");
  }
  auto graph = std::make_shared<LatticeDigraph>(d, 0, offsets, "ca_on_zd(D=" + std::to_string(d) + ",k=" +
                                                                   std::to_string(offsets.size()) + ")");
  const std::size_t want = checked_power(alphabet, offsets.size(), std::size_t{1} << 26, "rule table");
  if (table.size() != want) throw InvalidArgument("CA table must have |A|^k entries");
  auto shared_table = std::make_shared<const std::vector<Symbol>>(std::move(table));
  auto factory = [graph, shared_table](const VertexId& v) {
    LocalRule rule;
    rule.inputs = graph->in_neighbors(v);
    rule.table = *shared_table;
    return rule;
  };
  return std::make_shared<SymbolicSystem>(Alphabet{alphabet, {}}, graph, factory, graph->describe());
}

SystemPtr shift_extension(SystemPtr base, std::vector<Symbol> psi) {
  const int A = base->alphabet();
  if (psi.size() != static_cast<std::size_t>(A * A)) throw InvalidArgument("psi must have |A|^2 entries");
  auto graph = std::make_shared<ShiftExtensionDigraph>(base->graph_ptr());
  auto factory = [base, psi, A](const VertexId& v) {
    const VertexId b = v.truncated();
    const std::int64_t n = v[v.arity() - 1];
    const LocalRule& inner = base->rule_at(b);
    LocalRule rule;
    for (const auto& u : inner.inputs) rule.inputs.push_back(u.appended(n));
    rule.inputs.push_back(b.appended(n + 1));
    const LocalRule* inner_ptr = &inner;
    auto f = [inner_ptr, psi, A](std::span<const Symbol> in) {
      const Symbol phi = inner_ptr->apply(in.first(in.size() - 1), A);
      return psi[static_cast<std::size_t>(phi) * A + in.back()];
    };
    if (std::pow(static_cast<double>(A), static_cast<double>(rule.inputs.size())) <= 65536)
      rule.table = tabulate(A, rule.inputs.size(), f);
    else
      rule.fn = f;
    return rule;
  };
  return std::make_shared<SymbolicSystem>(Alphabet{A, {}}, graph, factory, "shift_extension(" + base->name() + ")");
}

}  // namespace symdyn
