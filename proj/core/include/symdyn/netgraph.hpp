#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "symdyn/digraph.hpp"
#include "symdyn/vertex.hpp"

namespace symdyn {

struct Ball {
  VertexSet center;
  int radius = 0;
  VertexSet members;
};

// Incremental in-ball growth around a fixed centre set. Layer r holds the
// vertices first reached after r rounds. Reusing one expansion for nested
// radii avoids recomputing inner balls.
class BallExpansion {
 public:
  BallExpansion(const Digraph& g, VertexSet center);

  void expand_to(int r);
  // Radius reached so far.
  int radius() const { return static_cast<int>(sizes_.size()) - 1; }
  std::size_t size_at(int r);
  VertexSet members(int r);
  // Vertices first reached at round r, sorted.
  const std::vector<VertexId>& layer(int r);
  // True once a round added nothing: the ball is the whole upstream set.
  bool saturated() const { return saturated_; }
  bool reached(const VertexId& v) const { return seen_.count(v) > 0; }

 private:
  const Digraph& g_;
  VertexSet center_;
  VertexHashSet seen_;
  std::vector<VertexId> frontier_;
  std::vector<std::vector<VertexId>> layers_;
  std::vector<std::size_t> sizes_;
  bool saturated_ = false;
};

Ball in_ball(const Digraph& g, const VertexSet& U, int r);
Ball in_ball(const Digraph& g, const VertexId& v, int r);

struct Infinity {
  // True when the whole component of v was exhausted without meeting w.
  bool proven_disconnected = false;
};
using Distance = std::variant<std::int64_t, Infinity>;

inline bool is_finite(const Distance& d) { return std::holds_alternative<std::int64_t>(d); }
std::string to_string(const Distance& d);

// Shortest undirected path length, or Infinity beyond cap.
Distance undirected_distance(const Digraph& g, const VertexId& v, const VertexId& w, std::int64_t cap);
// Distances from v to every target within cap, in one search.
std::vector<Distance> undirected_distances(const Digraph& g, const VertexId& v,
                                           const std::vector<VertexId>& targets, std::int64_t cap);

struct DimensionEstimate {
  std::vector<int> radii;
  std::vector<std::size_t> ball_sizes;
  std::vector<double> pointwise_exponents;
  // Min and max pointwise exponent over the last half of the radii.
  double lower_proxy = 0;
  double upper_proxy = 0;
  double fit_slope = 0;
  int tail_from = 0;
};

DimensionEstimate dim_estimate(const Digraph& g, const VertexId& v, int r_min, int r_max);

struct SuperlinearReport {
  std::vector<int> radii;
  std::vector<double> ratios;
  // Heuristic: min ratio over the last quartile exceeds max over the first.
  bool divergent = false;
};

SuperlinearReport superlinear_check(const Digraph& g, const VertexId& v, int r_max);

enum class Tri { False, True, Unknown };
std::string to_string(Tri t);

// Whether a directed path v ->• ... ->• w of length <= cap exists.
Tri upstream(const Digraph& g, const VertexId& v, const VertexId& w, int cap);

struct BiconnectedProbe {
  std::vector<VertexSet> classes;
  // Pairs left apart only because the cap ran out in some direction.
  std::vector<std::pair<VertexId, VertexId>> unknown_pairs;
};

BiconnectedProbe biconnected_probe(const Digraph& g, const VertexSet& S, int cap);

struct Subisometry {
  std::function<VertexId(const VertexId&)> map;
  std::string label;

  VertexId operator()(const VertexId& v) const { return map(v); }
  VertexId power(const VertexId& v, int n) const;
};

Subisometry identity_map();
// Adds delta to the coordinates of lattice-like vertices.
Subisometry translation(std::vector<std::int64_t> delta);

struct SubisometryReport {
  bool injective = true;
  bool edge_preserving = true;
  std::vector<std::string> violations;
  bool ok() const { return injective && edge_preserving; }
};

SubisometryReport verify_subisometry(const Digraph& g, const Subisometry& tau, const VertexSet& probe);

struct SpeedEstimate {
  std::vector<int> n;
  std::vector<Distance> distances;
  // d(v, tau^n v)/n, absent when the distance exceeded the cap.
  std::vector<std::optional<double>> values;
  std::optional<double> inf_proxy;
};

SpeedEstimate speed_estimate(const Digraph& g, const Subisometry& tau, const VertexId& v, int n_max,
                             std::int64_t cap);

struct EstuaryReport {
  Tri verdict = Tri::True;
  std::vector<std::pair<VertexId, Tri>> per_probe;
};

EstuaryReport is_estuary(const Digraph& g, const VertexSet& U, const VertexSet& probes, int cap);

}  // namespace symdyn
