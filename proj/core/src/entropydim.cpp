#include "symdyn/entropydim.hpp"

#include <algorithm>
#include <cmath>

#include "symdyn/error.hpp"

namespace symdyn {

double PatternCount::log2() const {
  double s = 0;
  for (const auto& [k, m] : factors) s += static_cast<double>(m) * std::log2(static_cast<double>(k));
  return s;
}

PatternCount& PatternCount::operator*=(const PatternCount& o) {
  for (const auto& [k, m] : o.factors) factors[k] += m;
  return *this;
}

PatternCount pattern_count(const PatternSpace& space, const VertexSet& U) {
  PatternCount c;
  for (const auto& u : make_set(U)) {
    const int k = space.count(u);
    if (k > 1) ++c.factors[k];
  }
  return c;
}

double pattern_log_count(const PatternSpace& space, const VertexSet& U) { return pattern_count(space, U).log2(); }

EntropyEstimate ball_entropy(const PatternSpace& space, const Digraph& g, const VertexId& v, int r_min, int r_max) {
  if (r_min < 0 || r_min >= r_max) throw InvalidArgument("ball_entropy needs 0 <= r_min < r_max");
  BallExpansion e(g, {v});
  EntropyEstimate est;
  for (int r = r_min; r <= r_max; ++r) {
    const VertexSet ball = e.members(r);
    const double lc = pattern_log_count(space, ball);
    est.radii.push_back(r);
    est.ball_sizes.push_back(ball.size());
    est.log2_counts.push_back(lc);
    est.ratios.push_back(lc / static_cast<double>(ball.size()));
  }
  est.lower_proxy = *std::min_element(est.ratios.begin(), est.ratios.end());
  est.upper_proxy = *std::max_element(est.ratios.begin(), est.ratios.end());
  return est;
}

WeakIndependenceReport weak_independence_report(const PatternSpace& space, const Digraph& g,
                                                const std::vector<std::vector<BallSpec>>& families) {
  WeakIndependenceReport rep;
  for (std::size_t f = 0; f < families.size(); ++f) {
    VertexHashSet owner;
    VertexSet all;
    PatternCount product;
    double sum = 0;
    for (const auto& b : families[f]) {
      const VertexSet members = in_ball(g, b.center, b.radius).members;
      for (const auto& u : members)
        if (!owner.insert(u).second)
          throw NonDisjointBalls("family " + std::to_string(f) + ": balls overlap at " + u.to_string());
      const PatternCount c = pattern_count(space, members);
      product *= c;
      sum += c.log2();
      all.insert(all.end(), members.begin(), members.end());
    }
    const PatternCount joint = pattern_count(space, all);
    const double ratio = sum == 0 ? 1.0 : joint.log2() / sum;
    rep.ratios.push_back(ratio);
    rep.additive.push_back(joint == product);
    rep.epsilon_lower = std::min(rep.epsilon_lower, ratio);
  }
  return rep;
}

TauEntropyProfile tau_entropy_profile(const PatternSpace& space, const Subisometry& tau, const VertexSet& F,
                                      int N_max) {
  if (N_max < 1) throw InvalidArgument("tau_entropy_profile needs N_max >= 1");
  TauEntropyProfile prof;
  VertexSet current = make_set(F);
  VertexHashSet seen(current.begin(), current.end());
  PatternCount count = pattern_count(space, current);
  for (int N = 1; N <= N_max; ++N) {
    VertexSet next;
    for (const auto& v : current) next.push_back(tau(v));
    canonicalize(next);
    VertexSet fresh;
    for (const auto& v : next)
      if (seen.insert(v).second) fresh.push_back(v);
    count *= pattern_count(space, fresh);
    current = std::move(next);
    prof.n.push_back(N);
    prof.set_sizes.push_back(seen.size());
    prof.log2_counts.push_back(count.log2());
    prof.values.push_back(count.log2() / N);
  }
  return prof;
}

}  // namespace symdyn
