#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symdyn/digraph.hpp"
#include "symdyn/netgraph.hpp"
#include "symdyn/vertex.hpp"

namespace symdyn {

using Symbol = std::uint8_t;
// Bit s set iff symbol s is allowed. Alphabets are capped at 64 symbols.
using SymbolSet = std::uint64_t;

constexpr int kMaxAlphabet = 64;

inline int symbol_count(SymbolSet s) { return __builtin_popcountll(s); }
std::vector<Symbol> symbols_of(SymbolSet s);
inline SymbolSet all_symbols(int alphabet) {
  return alphabet >= 64 ? ~SymbolSet{0} : (SymbolSet{1} << alphabet) - 1;
}

struct Alphabet {
  int size = 2;
  std::vector<std::string> labels;

  std::string label(Symbol s) const;
};

// phi_v : A^inputs -> A. Either a total table in row-major order (first input
// most significant) or, for rules whose table would be huge, a function.
struct LocalRule {
  std::vector<VertexId> inputs;
  std::vector<Symbol> table;
  std::function<Symbol(std::span<const Symbol>)> fn;

  Symbol apply(std::span<const Symbol> in, int alphabet) const;
  bool tabulated() const { return !table.empty(); }
};

struct ProperReport {
  bool proper = true;
  // Per input position: two tuples differing only there with different
  // outputs, or nothing when the coordinate is inessential.
  std::vector<std::optional<std::pair<std::vector<Symbol>, std::vector<Symbol>>>> witnesses;
};

ProperReport check_proper(const LocalRule& rule, int alphabet);

class SymbolicSystem {
 public:
  using RuleFactory = std::function<LocalRule(const VertexId&)>;

  SymbolicSystem(Alphabet alphabet, DigraphPtr graph, RuleFactory rules, std::string name);

  int alphabet() const { return alphabet_.size; }
  const Alphabet& alphabet_info() const { return alphabet_; }
  const Digraph& graph() const { return *graph_; }
  DigraphPtr graph_ptr() const { return graph_; }
  const std::string& name() const { return name_; }

  // Built on first use and cached. Throws if the rule's inputs disagree with
  // the network or its table is not total.
  const LocalRule& rule_at(const VertexId& v) const;

 private:
  Alphabet alphabet_;
  DigraphPtr graph_;
  RuleFactory factory_;
  std::string name_;
  mutable std::mutex mu_;
  mutable VertexMap<std::unique_ptr<const LocalRule>> cache_;
};

using SystemPtr = std::shared_ptr<const SymbolicSystem>;

// Product space X = prod_v allowed(v).
class PatternSpace {
 public:
  using AllowedFn = std::function<SymbolSet(const VertexId&)>;

  PatternSpace(int alphabet, AllowedFn allowed, std::string name);

  int alphabet() const { return alphabet_; }
  SymbolSet allowed(const VertexId& v) const;
  std::vector<Symbol> allowed_symbols(const VertexId& v) const { return symbols_of(allowed(v)); }
  int count(const VertexId& v) const { return symbol_count(allowed(v)); }
  const std::string& name() const { return name_; }

 private:
  int alphabet_;
  AllowedFn allowed_;
  std::string name_;
};

PatternSpace full_space(int alphabet);

class Configuration {
 public:
  Configuration() = default;

  void set(const VertexId& v, Symbol s) { values_[v] = s; }
  bool has(const VertexId& v) const { return values_.count(v) > 0; }
  std::optional<Symbol> get(const VertexId& v) const;
  // Throws InsufficientDomain when v is unassigned.
  Symbol at(const VertexId& v) const;
  std::size_t size() const { return values_.size(); }
  VertexSet domain() const;
  const VertexMap<Symbol>& values() const { return values_; }

 private:
  VertexMap<Symbol> values_;
};

// Uniform sample from the space on a finite domain.
template <class Rng>
Configuration random_configuration(const PatternSpace& space, const VertexSet& domain, Rng& rng);

struct LightCone {
  VertexSet window;
  int horizon = 0;
  // layers[t] = Phi^t_in(W).
  std::vector<VertexSet> layers;
  // Union of all layers.
  VertexSet cone;

  VertexSet cone_upto(int t) const;
};

LightCone light_cone(const SymbolicSystem& sys, const VertexSet& W, int T);
std::vector<std::size_t> propagation(const SymbolicSystem& sys, const VertexId& v, int T);

struct Trajectory {
  VertexSet window;
  // steps[t][i] = Phi^t(x) at window[i].
  std::vector<std::vector<Symbol>> steps;
};

Trajectory evaluate(const SymbolicSystem& sys, const Configuration& x, const VertexSet& W, int T);

// One application of Phi on every cell of `cells` whose inputs lie in x.
Configuration apply_once(const SymbolicSystem& sys, const Configuration& x, const VertexSet& cells);

constexpr std::uint64_t kDefaultPatternCap = std::uint64_t{1} << 24;

struct PanoramaResult {
  VertexSet window;
  int horizon = 0;
  // layers[t] = W^t.
  std::vector<VertexSet> layers;
  VertexSet cone;
  std::uint64_t patterns_enumerated = 0;
};

// Exhaustive panorama of W. pattern_cap bounds the number of cone patterns
// enumerated at any single horizon.
PanoramaResult panorama(const SymbolicSystem& sys, const PatternSpace& space, const VertexSet& W, int T,
                        std::uint64_t pattern_cap = kDefaultPatternCap);

// W^t alone, enumerating only the patterns on Phi^[0..t]_in(W).
VertexSet panorama_layer(const SymbolicSystem& sys, const PatternSpace& space, const VertexSet& W, int t,
                         std::uint64_t pattern_cap = kDefaultPatternCap,
                         std::uint64_t* patterns_enumerated = nullptr);

struct WindowCheck {
  bool covered = false;
  int first_T = -1;
  // Target cells still undetermined at the last horizon examined.
  VertexSet missing;
  std::vector<VertexSet> layers;
};

WindowCheck posexpansive_window_check(const SymbolicSystem& sys, const PatternSpace& space,
                                      const VertexSet& W, int T_max, const VertexSet& target,
                                      std::uint64_t pattern_cap = kDefaultPatternCap);

struct SensitivityCertificate {
  int t = -1;
  VertexId w;
};

std::optional<SensitivityCertificate> sensitivity_certificate(const SymbolicSystem& sys, const VertexId& v,
                                                              int R, int T_max);

struct EnvelopeResult {
  bool stable = false;
  VertexSet envelope;
  int certified_horizon = -1;
  // Largest ball radius around W needed to contain the cone layers seen.
  int reach = 0;
  std::vector<std::size_t> cone_sizes;
  std::string report;
};

EnvelopeResult equicontinuity_envelope(const SymbolicSystem& sys, const PatternSpace& space,
                                       const VertexSet& W, int T_probe, int R_cap,
                                       std::uint64_t pattern_cap = kDefaultPatternCap);

struct FactorChainEntry {
  VertexSet window;
  VertexSet envelope;
  int horizon = 0;
  std::size_t orbit_count = 0;  // |Y_n|
  bool sigma_is_permutation = false;
};

std::vector<FactorChainEntry> odometer_factor_chain(const SymbolicSystem& sys, const PatternSpace& space,
                                                    const std::vector<VertexSet>& windows,
                                                    const std::vector<int>& horizons,
                                                    std::uint64_t pattern_cap = kDefaultPatternCap);

struct SubsymmetryReport {
  SubisometryReport network;
  bool space_invariant = true;
  bool commutes = true;
  int samples_checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return network.ok() && space_invariant && commutes; }
};

SubsymmetryReport subsymmetry_check(const SymbolicSystem& sys, const Subisometry& tau, const VertexSet& probe,
                                    const PatternSpace& space, int samples, std::uint64_t seed);

// Odometer with moduli m_0, m_1, ...; the last modulus repeats forever.
SystemPtr odometer_system(std::vector<int> moduli);
PatternSpace odometer_space(std::vector<int> moduli);

// Full shift on Z^D x N^E along axis 0: Phi(x)_v = x_{v+e_0}.
SystemPtr full_shift(int alphabet, int d, int e);

// Cellular automaton on Z^D: Phi(x)_v = table[x_{v+o_1}, ..., x_{v+o_k}].
SystemPtr ca_on_zd(int alphabet, int d, std::vector<std::vector<std::int64_t>> offsets,
                   std::vector<Symbol> table);

// On V x Z: the value at (v,n) is psi[phi_v(x at (in(v), n)), x at (v, n+1)].
SystemPtr shift_extension(SystemPtr base, std::vector<Symbol> psi);

// ---------------------------------------------------------------------------

template <class Rng>
Configuration random_configuration(const PatternSpace& space, const VertexSet& domain, Rng& rng) {
  Configuration x;
  for (const auto& v : domain) {
    const auto syms = space.allowed_symbols(v);
    x.set(v, syms[static_cast<std::size_t>(rng() % syms.size())]);
  }
  return x;
}

}  // namespace symdyn
