#pragma once

// Slow, obviously-correct reference implementations used to check the
// library. Nothing here calls the library's search or enumeration code.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "symdyn/digraph.hpp"
#include "symdyn/symsys.hpp"
#include "symdyn/vertex.hpp"

namespace oracle {

using symdyn::Digraph;
using symdyn::Symbol;
using symdyn::VertexId;

// B(U, r) by boolean matrix powers: index every vertex within r rounds,
// build the in-adjacency matrix M, then iterate reach <- reach | M reach.
inline std::set<VertexId> matrix_ball(const Digraph& g, const std::vector<VertexId>& U, int r) {
  std::vector<VertexId> verts(U.begin(), U.end());
  std::map<VertexId, std::size_t> index;
  for (std::size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], i);
  // Universe: everything reachable in r in-steps (discovered by plain
  // iteration, no frontier bookkeeping).
  for (int round = 0; round < r; ++round) {
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& u : g.in_neighbors(verts[i]))
        if (index.emplace(u, verts.size()).second) verts.push_back(u);
  }
  const std::size_t n = verts.size();
  std::vector<std::vector<char>> M(n, std::vector<char>(n, 0));  // M[i][j]: j feeds i
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& u : g.in_neighbors(verts[i])) {
      auto it = index.find(u);
      if (it != index.end()) M[i][it->second] = 1;
    }
  std::vector<char> reach(n, 0);
  for (const auto& u : U) reach[index.at(u)] = 1;
  for (int round = 0; round < r; ++round) {
    std::vector<char> next = reach;
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i])
        for (std::size_t j = 0; j < n; ++j)
          if (M[i][j]) next[j] = 1;
    reach = next;
  }
  std::set<VertexId> out;
  for (std::size_t i = 0; i < n; ++i)
    if (reach[i]) out.insert(verts[i]);
  return out;
}

// Plain one-sided BFS over in- and out-neighbours.
inline std::optional<std::int64_t> bfs_distance(const Digraph& g, const VertexId& v, const VertexId& w,
                                                std::int64_t cap) {
  std::map<VertexId, std::int64_t> dist{{v, 0}};
  std::deque<VertexId> q{v};
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop_front();
    const auto d = dist[u];
    if (u == w) return d;
    if (d == cap) continue;
    auto nb = g.in_neighbors(u);
    for (const auto& x : g.out_neighbors(u)) nb.push_back(x);
    for (const auto& x : nb)
      if (dist.emplace(x, d + 1).second) q.push_back(x);
  }
  return std::nullopt;
}

// Directed reachability v ->• ... ->• w within cap steps, by forward search
// from w through in-neighbours.
inline bool reaches(const Digraph& g, const VertexId& v, const VertexId& w, int cap) {
  std::set<VertexId> layer{w}, seen{w};
  for (int s = 0; s < cap; ++s) {
    if (seen.count(v)) return true;
    std::set<VertexId> next;
    for (const auto& u : layer)
      for (const auto& x : g.in_neighbors(u))
        if (seen.insert(x).second) next.insert(x);
    layer = next;
  }
  return seen.count(v) > 0;
}

using Config = std::map<VertexId, Symbol>;

// One synchronous step on every cell whose inputs are all assigned.
inline Config step(const symdyn::SymbolicSystem& sys, const Config& x) {
  Config y;
  for (const auto& [v, _] : x) {
    const auto& rule = sys.rule_at(v);
    std::vector<Symbol> in;
    bool ok = true;
    for (const auto& u : rule.inputs) {
      auto it = x.find(u);
      if (it == x.end()) {
        ok = false;
        break;
      }
      in.push_back(it->second);
    }
    if (!ok) continue;
    if (rule.tabulated()) {
      std::size_t idx = 0;
      for (Symbol s : in) idx = idx * static_cast<std::size_t>(sys.alphabet()) + s;
      y[v] = rule.table[idx];
    } else {
      y[v] = rule.fn(in);
    }
  }
  return y;
}

// Trajectory of W for t = 0..T by repeated full steps; empty if the domain
// runs out.
inline std::vector<std::vector<Symbol>> trajectory(const symdyn::SymbolicSystem& sys, Config x,
                                                   const std::vector<VertexId>& W, int T) {
  std::vector<std::vector<Symbol>> out;
  for (int t = 0; t <= T; ++t) {
    std::vector<Symbol> obs;
    for (const auto& w : W) {
      auto it = x.find(w);
      if (it == x.end()) return {};
      obs.push_back(it->second);
    }
    out.push_back(obs);
    if (t < T) x = step(sys, x);
  }
  return out;
}

// W^t by brute force over every pattern on `cells` (which must contain the
// cone): group patterns by trajectory and keep the cells on which each group
// agrees.
inline std::vector<std::set<VertexId>> naive_panorama(const symdyn::SymbolicSystem& sys,
                                                      const symdyn::PatternSpace& space,
                                                      const std::vector<VertexId>& cells,
                                                      const std::vector<VertexId>& W, int T) {
  std::vector<std::vector<Symbol>> choices;
  for (const auto& c : cells) choices.push_back(space.allowed_symbols(c));
  std::vector<std::set<VertexId>> layers;
  for (int t = 0; t <= T; ++t) {
    std::map<std::vector<std::vector<Symbol>>, std::vector<Symbol>> first;
    std::set<VertexId> undetermined;
    std::vector<std::size_t> digit(cells.size(), 0);
    for (;;) {
      Config x;
      std::vector<Symbol> pat;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        x[cells[i]] = choices[i][digit[i]];
        pat.push_back(choices[i][digit[i]]);
      }
      auto key = trajectory(sys, x, W, t);
      auto [it, fresh] = first.emplace(key, pat);
      if (!fresh)
        for (std::size_t i = 0; i < cells.size(); ++i)
          if (it->second[i] != pat[i]) undetermined.insert(cells[i]);
      std::size_t j = 0;
      while (j < cells.size() && ++digit[j] == choices[j].size()) digit[j++] = 0;
      if (j == cells.size()) break;
    }
    std::set<VertexId> layer;
    for (const auto& c : cells)
      if (!undetermined.count(c)) layer.insert(c);
    layers.push_back(layer);
  }
  return layers;
}

// The counterexample dynamics written out directly. Circles copy a from n+1
// and write b = 0; the box at m_k writes (a[m_k + 1], a[m_{k+1}] xor
// b[m_{k+1}]). Values are computed by memoised recursion on (t, n), so only
// cells that actually matter are read from x0.
inline bool cex_is_box(std::int64_t n) {
  for (std::int64_t k = 0; k * (k + 1) <= n; ++k)
    if (k * (k + 1) == n) return true;
  return false;
}

inline std::int64_t cex_next_box(std::int64_t n) {
  std::int64_t k = 0;
  while (k * (k + 1) != n) ++k;
  return (k + 1) * (k + 2);
}

struct CexForward {
  std::function<std::pair<int, int>(std::int64_t)> x0;  // (a, b) at time 0
  std::map<std::pair<int, std::int64_t>, std::pair<int, int>> memo;

  std::pair<int, int> at(int t, std::int64_t n) {
    if (t == 0) return x0(n);
    auto it = memo.find({t, n});
    if (it != memo.end()) return it->second;
    std::pair<int, int> v;
    const auto succ = at(t - 1, n + 1);
    if (cex_is_box(n)) {
      const auto nb = at(t - 1, cex_next_box(n));
      v = {succ.first, nb.first ^ nb.second};
    } else {
      v = {succ.first, 0};
    }
    memo[{t, n}] = v;
    return v;
  }
};

}  // namespace oracle
