#include "symdyn/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "symdyn/error.hpp"
#include "symdyn/stats.hpp"

namespace symdyn {

BallExpansion::BallExpansion(const Digraph& g, VertexSet center) : g_(g), center_(std::move(center)) {
  canonicalize(center_);
  if (center_.empty()) throw InvalidArgument("ball centre must be nonempty");
  for (const auto& v : center_) {
    if (!g_.contains(v))
      throw UniverseExhausted("vertex " + v.to_string() + " is not in " + g_.describe());
    seen_.insert(v);
  }
  frontier_ = center_;
  layers_.push_back(center_);
  sizes_.push_back(center_.size());
}

void BallExpansion::expand_to(int r) {
  while (radius() < r) {
    std::vector<VertexId> next;
    if (!saturated_) {
      for (const auto& w : frontier_)
        for (const auto& u : g_.in_neighbors(w))
          if (seen_.insert(u).second) next.push_back(u);
      if (next.empty()) saturated_ = true;
    }
    std::sort(next.begin(), next.end());
    sizes_.push_back(sizes_.back() + next.size());
    frontier_ = next;
    layers_.push_back(std::move(next));
  }
}

std::size_t BallExpansion::size_at(int r) {
  expand_to(r);
  return sizes_[r];
}

VertexSet BallExpansion::members(int r) {
  expand_to(r);
  VertexSet out;
  out.reserve(sizes_[r]);
  for (int i = 0; i <= r; ++i) out.insert(out.end(), layers_[i].begin(), layers_[i].end());
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<VertexId>& BallExpansion::layer(int r) {
  expand_to(r);
  return layers_[r];
}

Ball in_ball(const Digraph& g, const VertexSet& U, int r) {
  if (r < 0) throw InvalidArgument("ball radius must be >= 0");
  BallExpansion e(g, U);
  return Ball{e.members(0), r, e.members(r)};
}

Ball in_ball(const Digraph& g, const VertexId& v, int r) { return in_ball(g, VertexSet{v}, r); }

// ---------------------------------------------------------------------------

std::string to_string(const Distance& d) {
  if (const auto* n = std::get_if<std::int64_t>(&d)) return std::to_string(*n);
  return std::get<Infinity>(d).proven_disconnected ? "inf" : "inf(cap)";
}

namespace {

std::vector<VertexId> undirected_neighbors(const Digraph& g, const VertexId& v) {
  auto out = g.in_neighbors(v);
  auto o = g.out_neighbors(v);
  out.insert(out.end(), o.begin(), o.end());
  return out;
}

}  // namespace

std::vector<Distance> undirected_distances(const Digraph& g, const VertexId& v,
                                           const std::vector<VertexId>& targets, std::int64_t cap) {
  if (cap < 0) throw InvalidArgument("distance cap must be >= 0");
  if (!g.has_out_neighbors())
    throw MissingOutNeighbors("undirected distance on " + g.describe() +
                              " needs out-neighbour enumeration");
  std::vector<Distance> result(targets.size(), Infinity{false});
  VertexMap<std::vector<std::size_t>> wanted;
  for (std::size_t i = 0; i < targets.size(); ++i) wanted[targets[i]].push_back(i);
  std::size_t remaining = wanted.size();

  VertexHashSet seen{v};
  std::vector<VertexId> frontier{v};
  for (std::int64_t d = 0;; ++d) {
    for (const auto& u : frontier) {
      auto it = wanted.find(u);
      if (it == wanted.end()) continue;
      for (auto i : it->second) result[i] = d;
      wanted.erase(it);
      --remaining;
    }
    if (remaining == 0 || d == cap) break;
    std::vector<VertexId> next;
    for (const auto& u : frontier)
      for (const auto& x : undirected_neighbors(g, u))
        if (seen.insert(x).second) next.push_back(x);
    if (next.empty()) {
      for (auto& [_, idx] : wanted)
        for (auto i : idx) result[i] = Infinity{true};
      break;
    }
    frontier = std::move(next);
  }
  return result;
}

Distance undirected_distance(const Digraph& g, const VertexId& v, const VertexId& w, std::int64_t cap) {
  return undirected_distances(g, v, {w}, cap).front();
}

// ---------------------------------------------------------------------------

DimensionEstimate dim_estimate(const Digraph& g, const VertexId& v, int r_min, int r_max) {
  if (r_min < 2 || r_min >= r_max) throw InvalidArgument("dim_estimate needs 2 <= r_min < r_max");
  BallExpansion e(g, {v});
  DimensionEstimate est;
  std::vector<double> lr, lb;
  for (int r = r_min; r <= r_max; ++r) {
    const std::size_t n = e.size_at(r);
    est.radii.push_back(r);
    est.ball_sizes.push_back(n);
    const double x = std::log(static_cast<double>(r));
    const double y = std::log(static_cast<double>(n));
    est.pointwise_exponents.push_back(y / x);
    lr.push_back(x);
    lb.push_back(y);
  }
  const std::size_t half = est.radii.size() / 2;
  est.tail_from = est.radii[half];
  auto tail = std::span(est.pointwise_exponents).subspan(half);
  est.lower_proxy = *std::min_element(tail.begin(), tail.end());
  est.upper_proxy = *std::max_element(tail.begin(), tail.end());
  est.fit_slope = ols_slope(lr, lb);
  return est;
}

SuperlinearReport superlinear_check(const Digraph& g, const VertexId& v, int r_max) {
  if (r_max < 4) throw InvalidArgument("superlinear_check needs r_max >= 4");
  BallExpansion e(g, {v});
  SuperlinearReport rep;
  for (int r = 1; r <= r_max; ++r) {
    rep.radii.push_back(r);
    rep.ratios.push_back(static_cast<double>(e.size_at(r)) / r);
  }
  const std::size_t q = rep.ratios.size() / 4;
  const double first_max = *std::max_element(rep.ratios.begin(), rep.ratios.begin() + q);
  const double last_min = *std::min_element(rep.ratios.end() - q, rep.ratios.end());
  rep.divergent = last_min > first_max;
  return rep;
}

// ---------------------------------------------------------------------------

std::string to_string(Tri t) {
  switch (t) {
    case Tri::True:
      return "true";
    case Tri::False:
      return "false";
    default:
      return "unknown";
  }
}

Tri upstream(const Digraph& g, const VertexId& v, const VertexId& w, int cap) {
  if (cap < 0) throw InvalidArgument("upstream cap must be >= 0");
  BallExpansion e(g, {w});
  for (int r = 0; r <= cap; ++r) {
    e.expand_to(r);
    if (e.reached(v)) return Tri::True;
    if (e.saturated()) return Tri::False;
  }
  e.expand_to(cap + 1);
  return e.saturated() && !e.reached(v) ? Tri::False : Tri::Unknown;
}

BiconnectedProbe biconnected_probe(const Digraph& g, const VertexSet& S_in, int cap) {
  VertexSet S = S_in;
  canonicalize(S);
  const std::size_t n = S.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };

  // reach[i][j]: S[i] upstream of S[j]. One backward search per target.
  std::vector<std::vector<Tri>> reach(n, std::vector<Tri>(n, Tri::Unknown));
  for (std::size_t j = 0; j < n; ++j) {
    BallExpansion e(g, {S[j]});
    e.expand_to(cap);
    std::vector<bool> hit(n);
    for (std::size_t i = 0; i < n; ++i) hit[i] = e.reached(S[i]);
    e.expand_to(cap + 1);
    for (std::size_t i = 0; i < n; ++i)
      reach[i][j] = hit[i] ? Tri::True : (e.saturated() ? Tri::False : Tri::Unknown);
  }

  BiconnectedProbe out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Tri a = reach[i][j], b = reach[j][i];
      if (a == Tri::True && b == Tri::True)
        parent[find(i)] = find(j);
      else if (a != Tri::False && b != Tri::False)
        out.unknown_pairs.emplace_back(S[i], S[j]);
    }
  std::map<std::size_t, VertexSet> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(S[i]);
  for (auto& [_, members] : groups) out.classes.push_back(std::move(members));
  std::sort(out.classes.begin(), out.classes.end());
  return out;
}

// ---------------------------------------------------------------------------

VertexId Subisometry::power(const VertexId& v, int n) const {
  VertexId x = v;
  for (int i = 0; i < n; ++i) x = map(x);
  return x;
}

Subisometry identity_map() {
  return {[](const VertexId& v) { return v; }, "identity"};
}

Subisometry translation(std::vector<std::int64_t> delta) {
  std::string label = "translate(";
  for (std::size_t i = 0; i < delta.size(); ++i) label += (i ? "," : "") + std::to_string(delta[i]);
  label += ")";
  return {[delta](const VertexId& v) {
            if (v.arity() != delta.size()) throw InvalidArgument("translation arity mismatch at " + v.to_string());
            VertexId w = v;
            for (std::size_t i = 0; i < delta.size(); ++i) w = w.with(i, v[i] + delta[i]);
            return w;
          },
          label};
}

SubisometryReport verify_subisometry(const Digraph& g, const Subisometry& tau, const VertexSet& probe_in) {
  VertexSet probe = probe_in;
  canonicalize(probe);
  SubisometryReport rep;
  VertexMap<VertexId> image;
  VertexMap<VertexId> preimage;
  for (const auto& v : probe) {
    const VertexId t = tau(v);
    image[v] = t;
    auto [it, fresh] = preimage.emplace(t, v);
    if (!fresh) {
      rep.injective = false;
      rep.violations.push_back("not injective: " + it->second.to_string() + " and " + v.to_string() +
                               " both map to " + t.to_string());
    }
  }
  for (const auto& w : probe) {
    const VertexId tw = image[w];
    if (!g.contains(tw)) {
      rep.edge_preserving = false;
      rep.violations.push_back("image of " + w.to_string() + " leaves the universe");
      continue;
    }
    VertexSet mapped_in;
    for (const auto& u : g.in_neighbors(w))
      if (contains(probe, u)) mapped_in.push_back(image[u]);
    canonicalize(mapped_in);
    VertexSet image_in;
    for (const auto& u : g.in_neighbors(tw))
      if (preimage.count(u)) image_in.push_back(u);
    canonicalize(image_in);
    if (mapped_in != image_in) {
      rep.edge_preserving = false;
      rep.violations.push_back("edges into " + w.to_string() + " map to " + to_string(mapped_in) +
                               " but edges into " + tw.to_string() + " are " + to_string(image_in));
    }
  }
  return rep;
}

SpeedEstimate speed_estimate(const Digraph& g, const Subisometry& tau, const VertexId& v, int n_max,
                             std::int64_t cap) {
  if (n_max < 1) throw InvalidArgument("speed_estimate needs n_max >= 1");
  SpeedEstimate est;
  std::vector<VertexId> targets;
  VertexId x = v;
  for (int n = 1; n <= n_max; ++n) {
    x = tau(x);
    est.n.push_back(n);
    targets.push_back(x);
  }
  est.distances = undirected_distances(g, v, targets, cap);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (const auto* d = std::get_if<std::int64_t>(&est.distances[i])) {
      const double val = static_cast<double>(*d) / est.n[i];
      est.values.push_back(val);
      if (!est.inf_proxy || val < *est.inf_proxy) est.inf_proxy = val;
    } else {
      est.values.push_back(std::nullopt);
    }
  }
  return est;
}

EstuaryReport is_estuary(const Digraph& g, const VertexSet& U, const VertexSet& probes_in, int cap) {
  VertexSet probes = probes_in;
  canonicalize(probes);
  BallExpansion e(g, U);
  e.expand_to(cap);
  VertexHashSet within;
  for (const auto& p : probes)
    if (e.reached(p)) within.insert(p);
  e.expand_to(cap + 1);
  const bool closed = e.saturated();
  EstuaryReport rep;
  bool any_unknown = false;
  for (const auto& p : probes) {
    Tri t = within.count(p) ? Tri::True : (closed && !e.reached(p) ? Tri::False : Tri::Unknown);
    if (t == Tri::False) rep.verdict = Tri::False;
    if (t == Tri::Unknown) any_unknown = true;
    rep.per_probe.emplace_back(p, t);
  }
  if (rep.verdict != Tri::False && any_unknown) rep.verdict = Tri::Unknown;
  return rep;
}

}  // namespace symdyn
