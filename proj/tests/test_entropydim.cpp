#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "symdyn/counterexample.hpp"
#include "symdyn/entropydim.hpp"
#include "symdyn/error.hpp"

using namespace symdyn;

namespace {

PatternSpace singleton_space(int alphabet) {
  return PatternSpace(alphabet, [](const VertexId&) { return SymbolSet{1}; }, "singleton");
}

// Allowed sets that depend only on the second coordinate, so horizontal
// translation preserves the space.
PatternSpace row_space() {
  return PatternSpace(4, [](const VertexId& v) { return SymbolSet((v[1] & 3) + 1) | SymbolSet{1}; }, "rows");
}

VertexSet range(int lo, int hi) {
  VertexSet s;
  for (int i = lo; i <= hi; ++i) s.push_back(VertexId(i));
  return s;
}

double oracle_log_count(const PatternSpace& space, const std::set<VertexId>& U) {
  double s = 0;
  for (const auto& u : U) s += std::log2(static_cast<double>(space.allowed_symbols(u).size()));
  return s;
}

}  // namespace

TEST(PatternLogCount, Examples) {
  EXPECT_DOUBLE_EQ(pattern_log_count(full_space(2), range(0, 6)), 7.0);
  // Seven a-bits plus b-bits at the boxes 0, 2 and 6.
  EXPECT_DOUBLE_EQ(pattern_log_count(cex_space(), range(0, 6)), 10.0);
  EXPECT_DOUBLE_EQ(pattern_log_count(singleton_space(3), range(0, 6)), 0.0);
  EXPECT_DOUBLE_EQ(pattern_log_count(full_space(3), range(0, 1)), 2 * std::log2(3.0));
}

TEST(PatternLogCount, AdditiveOnDisjointSets) {
  std::mt19937_64 rng(2);
  const auto space = row_space();
  for (int trial = 0; trial < 100; ++trial) {
    VertexSet U, W;
    for (int i = 0; i < 12; ++i) {
      const VertexId v{static_cast<std::int64_t>(rng() % 9), static_cast<std::int64_t>(rng() % 9)};
      (rng() & 1 ? U : W).push_back(v);
    }
    canonicalize(U);
    canonicalize(W);
    W = set_difference(W, U);
    const auto both = set_union(U, W);
    EXPECT_NEAR(pattern_log_count(space, both), pattern_log_count(space, U) + pattern_log_count(space, W), 1e-9);
    auto joint = pattern_count(space, U);
    joint *= pattern_count(space, W);
    EXPECT_EQ(joint, pattern_count(space, both));
  }
}

TEST(PatternLogCount, InvariantUnderSubsymmetry) {
  std::mt19937_64 rng(4);
  const auto space = row_space();
  const auto tau = translation({1, 0});
  for (int trial = 0; trial < 50; ++trial) {
    VertexSet F;
    for (int i = 0; i < 8; ++i)
      F.push_back(VertexId{static_cast<std::int64_t>(rng() % 7) - 3, static_cast<std::int64_t>(rng() % 7) - 3});
    canonicalize(F);
    const int k = static_cast<int>(rng() % 10);
    VertexSet moved;
    for (const auto& v : F) moved.push_back(tau.power(v, k));
    canonicalize(moved);
    EXPECT_EQ(pattern_count(space, F), pattern_count(space, moved));
  }
}

TEST(BallEntropy, FullShiftIsOne) {
  const auto est = ball_entropy(full_space(2), *cayley_zd(2), VertexId{0, 0}, 2, 12);
  for (double r : est.ratios) EXPECT_DOUBLE_EQ(r, 1.0);
  EXPECT_DOUBLE_EQ(est.lower_proxy, 1.0);
  EXPECT_DOUBLE_EQ(est.upper_proxy, 1.0);
  const auto four = ball_entropy(full_space(4), *cayley_zd(2), VertexId{0, 0}, 2, 6);
  for (double r : four.ratios) EXPECT_DOUBLE_EQ(r, 2.0);
}

TEST(BallEntropy, SingletonSpaceIsZero) {
  const auto est = ball_entropy(singleton_space(2), *cayley_zd(2), VertexId{0, 0}, 2, 8);
  for (double r : est.ratios) EXPECT_DOUBLE_EQ(r, 0.0);
}

TEST(BallEntropy, CounterexampleMatchesBoxCount) {
  const auto g = cex_network();
  const auto est = ball_entropy(cex_space(), *g, VertexId(0), 2, 30);
  for (std::size_t i = 0; i < est.radii.size(); ++i) {
    const auto ball = oracle::matrix_ball(*g, {VertexId(0)}, est.radii[i]);
    std::size_t boxes = 0;
    for (const auto& v : ball) boxes += oracle::cex_is_box(v.index());
    EXPECT_EQ(est.ball_sizes[i], ball.size());
    EXPECT_NEAR(est.ratios[i], static_cast<double>(ball.size() + boxes) / static_cast<double>(ball.size()), 1e-12);
    EXPECT_GT(est.ratios[i], 1.0);
    EXPECT_LE(est.ratios[i], 2.0);
  }
  // Boxes thin out: the ratio drifts down toward 1.
  EXPECT_LT(est.ratios.back(), est.ratios.front());
  EXPECT_LT(est.ratios.back(), 1.5);
  EXPECT_DOUBLE_EQ(est.ratios.front(), 8.0 / 5.0);
}

TEST(BallEntropy, RatiosBoundedByAlphabet) {
  std::mt19937_64 rng(5);
  const auto space = row_space();
  for (int trial = 0; trial < 10; ++trial) {
    const VertexId v{static_cast<std::int64_t>(rng() % 11) - 5, static_cast<std::int64_t>(rng() % 11) - 5};
    const auto est = ball_entropy(space, *cayley_zd(2), v, 2, 8);
    for (double r : est.ratios) {
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 2.0);
    }
  }
}

TEST(BallEntropy, RejectsBadRadii) {
  EXPECT_THROW(ball_entropy(full_space(2), *cayley_zd(1), VertexId{0}, 5, 5), InvalidArgument);
}

TEST(WeakIndependence, ProductSpacesAreAdditive) {
  const auto g = cayley_zd(2);
  const std::vector<std::vector<BallSpec>> families{
      {{VertexId{0, 0}, 2}, {VertexId{10, 0}, 3}},
      {{VertexId{0, 0}, 1}, {VertexId{3, 0}, 1}, {VertexId{0, 3}, 1}},
  };
  const auto rep = weak_independence_report(full_space(2), *g, families);
  for (double r : rep.ratios) EXPECT_DOUBLE_EQ(r, 1.0);
  for (bool a : rep.additive) EXPECT_TRUE(a);
  EXPECT_DOUBLE_EQ(rep.epsilon_lower, 1.0);

  const auto cx = weak_independence_report(cex_space(), *cex_network(), {{{VertexId(0), 2}, {VertexId(7), 1}}});
  EXPECT_DOUBLE_EQ(cx.ratios[0], 1.0);
  EXPECT_TRUE(cx.additive[0]);

  const auto single = weak_independence_report(full_space(2), *g, {{{VertexId{0, 0}, 4}}});
  EXPECT_DOUBLE_EQ(single.ratios[0], 1.0);
}

TEST(WeakIndependence, OverlappingBallsThrow) {
  EXPECT_THROW(weak_independence_report(full_space(2), *cayley_zd(2), {{{VertexId{0, 0}, 2}, {VertexId{3, 0}, 1}}}),
               NonDisjointBalls);
}

TEST(TauEntropy, ShiftOnZ) {
  const auto prof = tau_entropy_profile(full_space(2), translation({1}), {VertexId{0}}, 40);
  for (std::size_t i = 0; i < prof.n.size(); ++i) {
    const double N = prof.n[i];
    EXPECT_EQ(prof.set_sizes[i], static_cast<std::size_t>(N + 1));
    EXPECT_NEAR(prof.values[i], (N + 1) / N, 1e-12);
  }
}

TEST(TauEntropy, PeriodicOrbitDecays) {
  const VertexSet F{VertexId(0), VertexId(1), VertexId(2)};
  const auto prof = tau_entropy_profile(full_space(2), identity_map(), F, 30);
  for (std::size_t i = 0; i < prof.n.size(); ++i) {
    EXPECT_EQ(prof.set_sizes[i], 3u);
    EXPECT_NEAR(prof.values[i], 3.0 / prof.n[i], 1e-12);
  }
}

TEST(TauEntropy, BallSweptAcrossZ2MatchesExplicitUnion) {
  const auto B = in_ball(*cayley_zd(2), VertexId{0, 0}, 2).members;
  const auto prof = tau_entropy_profile(full_space(2), translation({1, 0}), B, 20);
  std::set<VertexId> U(B.begin(), B.end());
  for (int N = 1; N <= 20; ++N) {
    for (const auto& v : B) U.insert(VertexId{v[0] + N, v[1]});
    EXPECT_EQ(prof.set_sizes[N - 1], U.size());
    EXPECT_NEAR(prof.values[N - 1], oracle_log_count(full_space(2), U) / N, 1e-12);
  }
  // 13 cells in the diamond, 5 new cells per step.
  EXPECT_NEAR(prof.values.back(), (13.0 + 5 * 20) / 20, 1e-12);
}

TEST(TauEntropy, DominatesTheBallEntropyBound) {
  // Unit-speed translation on Z^2: the profile beats (S eps / 4r) log|X_B|
  // with S = eps = 1.
  for (int r = 2; r <= 5; ++r) {
    const auto B = in_ball(*cayley_zd(2), VertexId{0, 0}, r).members;
    const auto prof = tau_entropy_profile(full_space(2), translation({1, 0}), B, 40);
    const double bound = pattern_log_count(full_space(2), B) / (4.0 * r);
    EXPECT_GT(prof.values.back(), bound) << "r=" << r;
  }
}
