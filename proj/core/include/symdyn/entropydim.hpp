#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "symdyn/digraph.hpp"
#include "symdyn/netgraph.hpp"
#include "symdyn/symsys.hpp"

namespace symdyn {

// |X_U| for a product space, kept exact as {allowed-set size -> multiplicity}.
struct PatternCount {
  std::map<int, std::size_t> factors;

  double log2() const;
  PatternCount& operator*=(const PatternCount& o);
  friend bool operator==(const PatternCount&, const PatternCount&) = default;
};

PatternCount pattern_count(const PatternSpace& space, const VertexSet& U);
double pattern_log_count(const PatternSpace& space, const VertexSet& U);

struct EntropyEstimate {
  std::vector<int> radii;
  std::vector<double> log2_counts;
  std::vector<std::size_t> ball_sizes;
  std::vector<double> ratios;
  double lower_proxy = 0;
  double upper_proxy = 0;
};

EntropyEstimate ball_entropy(const PatternSpace& space, const Digraph& g, const VertexId& v, int r_min, int r_max);

struct BallSpec {
  VertexId center;
  int radius = 0;
};

struct WeakIndependenceReport {
  // Per family: log2|X_union| / sum log2|X_ball| (1 when the sum is 0).
  std::vector<double> ratios;
  // Per family: |X_union| equals the product of the per-ball counts exactly.
  std::vector<bool> additive;
  double epsilon_lower = 1;
};

// Throws NonDisjointBalls if balls within one family intersect.
WeakIndependenceReport weak_independence_report(const PatternSpace& space, const Digraph& g,
                                                const std::vector<std::vector<BallSpec>>& families);

struct TauEntropyProfile {
  std::vector<int> n;
  std::vector<std::size_t> set_sizes;  // |F(N)|
  std::vector<double> log2_counts;
  std::vector<double> values;  // log2|X_F(N)| / N
};

TauEntropyProfile tau_entropy_profile(const PatternSpace& space, const Subisometry& tau, const VertexSet& F,
                                      int N_max);

}  // namespace symdyn
