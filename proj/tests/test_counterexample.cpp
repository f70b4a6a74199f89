#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>

#include "json.hpp"
#include "oracles.hpp"
#include "symdyn/counterexample.hpp"
#include "symdyn/error.hpp"

using namespace symdyn;

namespace {

std::int64_t m(int k) { return static_cast<std::int64_t>(k) * (k + 1); }

Trace oracle_trace(const Configuration& x0, int J) {
  oracle::CexForward fw;
  fw.x0 = [&](std::int64_t n) {
    const Symbol s = x0.at(VertexId(n));
    return std::pair<int, int>{cex_a(s), cex_b(s)};
  };
  Trace tr;
  tr.horizon = static_cast<int>(m(J));
  for (int t = 0; t <= tr.horizon; ++t) {
    const auto [a, b] = fw.at(t, 0);
    tr.a.push_back(static_cast<std::uint8_t>(a));
    tr.b.push_back(static_cast<std::uint8_t>(b));
  }
  return tr;
}

DecodeResult read_off(const Configuration& x0, int J) {
  DecodeResult r;
  for (std::int64_t n = 0; n <= m(J); ++n) r.a0.push_back(static_cast<std::uint8_t>(cex_a(x0.at(VertexId(n)))));
  for (int k = 0; k <= J; ++k) r.b0_boxes.push_back(static_cast<std::uint8_t>(cex_b(x0.at(VertexId(m(k))))));
  return r;
}

Configuration constant(int J, int a, int b) {
  Configuration x;
  for (const auto& v : cex_cone(J)) x.set(v, cex_symbol(a, is_box(v.index()) ? b : 0));
  return x;
}

Symbol apply(const VertexId& v, std::vector<Symbol> in) { return cex_rules()->rule_at(v).apply(in, 4); }

}  // namespace

TEST(CexNetwork, Examples) {
  const auto g = cex_network();
  EXPECT_EQ(g->in_neighbors(VertexId(0)), (VertexSet{VertexId(1), VertexId(2)}));
  EXPECT_EQ(g->in_neighbors(VertexId(4)), (VertexSet{VertexId(5)}));
  EXPECT_EQ(g->in_neighbors(VertexId(6)), (VertexSet{VertexId(7), VertexId(12)}));
  for (int k = 0; k < 6; ++k) EXPECT_TRUE(is_box(m(k)));
  EXPECT_EQ(box_index(4), 20);
  EXPECT_EQ(box_rank(12), 3);
  EXPECT_EQ(box_rank(13), -1);
}

TEST(CexNetwork, NoSelfLoopsAndOutMirrorsIn) {
  const auto g = cex_network();
  for (std::int64_t n = 0; n < 200; ++n) {
    const VertexId v(n);
    for (const auto& u : g->in_neighbors(v)) {
      EXPECT_NE(u, v);
      const auto out = g->out_neighbors(u);
      EXPECT_NE(std::find(out.begin(), out.end(), v), out.end());
    }
    EXPECT_EQ(g->in_neighbors(v).size(), oracle::cex_is_box(n) ? 2u : 1u);
  }
}

TEST(CexRules, Examples) {
  EXPECT_EQ(apply(VertexId(0), {cex_symbol(1, 0), cex_symbol(1, 1)}), cex_symbol(1, 0));
  EXPECT_EQ(apply(VertexId(4), {cex_symbol(1, 1)}), cex_symbol(1, 0));
  EXPECT_EQ(apply(VertexId(0), {cex_symbol(0, 0), cex_symbol(0, 0)}), cex_symbol(0, 0));
  EXPECT_EQ(apply(VertexId(2), {cex_symbol(0, 0), cex_symbol(1, 0)}), cex_symbol(0, 1));
}

TEST(CexRules, ExhaustiveAgainstDefinition) {
  for (Symbol s1 = 0; s1 < 4; ++s1) {
    EXPECT_EQ(apply(VertexId(5), {s1}), cex_symbol(cex_a(s1), 0));
    for (Symbol s2 = 0; s2 < 4; ++s2)
      EXPECT_EQ(apply(VertexId(12), {s1, s2}), cex_symbol(cex_a(s1), cex_a(s2) ^ cex_b(s2)));
  }
}

TEST(CexSpace, CirclesCarryNoB) {
  const auto space = cex_space();
  EXPECT_EQ(space.allowed_symbols(VertexId(3)), (std::vector<Symbol>{0, 1}));
  EXPECT_EQ(space.allowed_symbols(VertexId(6)).size(), 4u);
}

TEST(CexTrace, ZeroAndOnes) {
  for (int J = 1; J <= 4; ++J) {
    const auto zero = simulate_trace(constant(J, 0, 0), J);
    EXPECT_EQ(zero.horizon, m(J));
    for (int t = 0; t <= zero.horizon; ++t) {
      EXPECT_EQ(zero.a[t], 0);
      EXPECT_EQ(zero.b[t], 0);
    }
    const auto dz = decode_trace(zero, J);
    EXPECT_EQ(dz.a0, std::vector<std::uint8_t>(m(J) + 1, 0));
    EXPECT_EQ(dz.b0_boxes, std::vector<std::uint8_t>(J + 1, 0));

    const auto ones = constant(J, 1, 0);
    const auto tr = simulate_trace(ones, J);
    const auto want = oracle_trace(ones, J);
    EXPECT_EQ(tr.a, want.a);
    EXPECT_EQ(tr.b, want.b);
    for (auto a : tr.a) EXPECT_EQ(a, 1);
    // b at time 0 is the initial b = 0; afterwards the box sums a + b = 1.
    EXPECT_EQ(tr.b[0], 0);
    if (tr.horizon >= 1) EXPECT_EQ(tr.b[1], 1);
  }
}

TEST(CexTrace, MatchesForwardOracle) {
  for (int J = 1; J <= 5; ++J)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto x0 = random_cex_configuration(J, seed);
      const auto tr = simulate_trace(x0, J);
      const auto want = oracle_trace(x0, J);
      EXPECT_EQ(tr.a, want.a) << "J=" << J << " seed=" << seed;
      EXPECT_EQ(tr.b, want.b) << "J=" << J << " seed=" << seed;
    }
}

TEST(CexTrace, RejectsInvalidInput) {
  auto x0 = constant(1, 0, 0);
  x0.set(VertexId(3), cex_symbol(0, 1));
  EXPECT_THROW(simulate_trace(x0, 1), InvalidArgument);
  Configuration partial;
  partial.set(VertexId(0), 0);
  EXPECT_THROW(simulate_trace(partial, 1), InsufficientDomain);
}

TEST(CexDecode, ExhaustiveRoundTripSmallJ) {
  // Every valid pattern on the cone for J = 1. The J = 2 cone already has
  // 2^28 patterns; it is sampled densely below.
  const auto space = cex_space();
  for (int J = 1; J <= 1; ++J) {
    const auto cone = cex_cone(J);
    std::vector<std::vector<Symbol>> choices;
    for (const auto& v : cone) choices.push_back(space.allowed_symbols(v));
    std::vector<std::size_t> digit(cone.size(), 0);
    std::size_t count = 0;
    for (bool more = true; more; ++count) {
      Configuration x0;
      for (std::size_t i = 0; i < cone.size(); ++i) x0.set(cone[i], choices[i][digit[i]]);
      const auto got = decode_trace(simulate_trace(x0, J), J);
      ASSERT_EQ(got, read_off(x0, J)) << "J=" << J << " pattern " << count;
      std::size_t i = 0;
      while (i < digit.size() && ++digit[i] == choices[i].size()) digit[i++] = 0;
      more = i < digit.size();
    }
    EXPECT_GT(count, 1u);
  }
}

TEST(CexDecode, DenseSampleAtJ2) {
  for (std::uint64_t seed = 0; seed < 5000; ++seed) {
    const auto x0 = random_cex_configuration(2, seed);
    ASSERT_EQ(decode_trace(simulate_trace(x0, 2), 2), read_off(x0, 2)) << "seed " << seed;
  }
}

TEST(CexDecode, RandomRoundTripAgainstOracleTraces) {
  for (int J = 3; J <= 6; ++J)
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
      const auto x0 = random_cex_configuration(J, seed);
      // Decode the oracle's trace, so the decoder is checked independently
      // of the library's simulation.
      EXPECT_EQ(decode_trace(oracle_trace(x0, J), J), read_off(x0, J)) << "J=" << J << " seed=" << seed;
    }
}

TEST(CexDecode, IsLinearOverZ2) {
  std::mt19937_64 rng(9);
  for (int J = 2; J <= 5; ++J)
    for (int trial = 0; trial < 10; ++trial) {
      const int h = static_cast<int>(m(J));
      Trace t1{h, {}, {}}, t2{h, {}, {}}, sum{h, {}, {}};
      for (int t = 0; t <= h; ++t) {
        t1.a.push_back(rng() & 1);
        t1.b.push_back(rng() & 1);
        t2.a.push_back(rng() & 1);
        t2.b.push_back(rng() & 1);
        sum.a.push_back(t1.a[t] ^ t2.a[t]);
        sum.b.push_back(t1.b[t] ^ t2.b[t]);
      }
      const auto d1 = decode_trace(t1, J), d2 = decode_trace(t2, J), ds = decode_trace(sum, J);
      for (std::size_t i = 0; i < ds.a0.size(); ++i) EXPECT_EQ(ds.a0[i], d1.a0[i] ^ d2.a0[i]);
      for (std::size_t i = 0; i < ds.b0_boxes.size(); ++i) EXPECT_EQ(ds.b0_boxes[i], d1.b0_boxes[i] ^ d2.b0_boxes[i]);
    }
}

TEST(CexDecode, CorruptedTraceIsLocated) {
  const int J = 3;
  const auto x0 = random_cex_configuration(J, 5);
  auto tr = simulate_trace(x0, J);
  tr.b[1] ^= 1;
  const auto mismatches = compare_decode(project(x0, J), decode_trace(tr, J), J);
  ASSERT_FALSE(mismatches.empty());
  // b at time 1 feeds the first box b-value recovered from it, at m_1 = 2.
  EXPECT_EQ(mismatches.front().field, "b");
  EXPECT_EQ(mismatches.front().cell, 2);

  auto ta = simulate_trace(x0, J);
  ta.a[4] ^= 1;
  const auto ma = compare_decode(project(x0, J), decode_trace(ta, J), J);
  ASSERT_FALSE(ma.empty());
  EXPECT_EQ(ma.front().field, "a");
  EXPECT_EQ(ma.front().cell, 4);
}

TEST(CexDecode, ShortTraceThrows) {
  Trace tr{2, {0, 0, 0}, {0, 0, 0}};
  EXPECT_THROW(decode_trace(tr, 2), HorizonTooShort);
}

TEST(CexRoundtrip, Examples) {
  const auto rep = cex_roundtrip(4, 200, 1);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.passed, 200);
  EXPECT_TRUE(rep.failing_seeds.empty());

  const auto zero = constant(1, 0, 0);
  EXPECT_EQ(decode_trace(simulate_trace(zero, 1), 1), project(zero, 1));

  EXPECT_THROW(cex_roundtrip(0, 1, 1), InvalidArgument);
}

TEST(CexRoundtrip, TrialSeedsAreDeterministic) {
  EXPECT_EQ(trial_seed(5, 3), trial_seed(5, 3));
  EXPECT_NE(trial_seed(5, 3), trial_seed(5, 4));
  EXPECT_NE(trial_seed(5, 3), trial_seed(6, 3));
}

TEST(CexPropagation, Examples) {
  const auto prof = cex_propagation_profile(12);
  EXPECT_EQ(prof.rho[1], 3u);
  EXPECT_EQ(prof.rho[2], 5u);
  EXPECT_EQ(prof.lower_bound[10], 56);
  EXPECT_EQ(prof.rho, (std::vector<std::size_t>{1, 3, 5, 8, 12, 16, 21, 27, 33, 40, 48, 56, 65}));
  // rho(t) = |Phi^[0..t]_in(0)|: grow the cone by whole-layer in-neighbourhoods.
  std::set<VertexId> layer{VertexId(0)}, cone = layer;
  for (int t = 0; t <= 12; ++t) {
    EXPECT_EQ(prof.rho[t], cone.size()) << "t=" << t;
    EXPECT_EQ(prof.rho[t] >= static_cast<std::size_t>(prof.lower_bound[t]), t < 6) << "t=" << t;
    std::set<VertexId> next;
    for (const auto& v : layer)
      for (const auto& u : cex_network()->in_neighbors(v)) next.insert(u);
    layer = next;
    cone.insert(next.begin(), next.end());
  }
  // The cone really does fall short of (T+1) + T(T-1)/2 from T = 6 on.
  EXPECT_FALSE(prof.lower_bound_ok);
  EXPECT_EQ(prof.first_violation, 6);
}

class CexGolden : public ::testing::TestWithParam<const char*> {};

TEST_P(CexGolden, MatchesFrozenFixture) {
  std::ifstream in(std::string(SYMDYN_FIXTURE_DIR) + "/" + GetParam());
  ASSERT_TRUE(in) << GetParam();
  const auto j = nlohmann::json::parse(in);
  const int J = j.at("J");
  const std::uint64_t seed = j.at("seed");
  const auto x0 = random_cex_configuration(J, seed);
  for (const auto& cell : j.at("x0")) {
    const Symbol s = x0.at(VertexId(cell[0].get<std::int64_t>()));
    EXPECT_EQ(cex_a(s), cell[1].get<int>());
    EXPECT_EQ(cex_b(s), cell[2].get<int>());
  }
  const auto tr = simulate_trace(x0, J);
  EXPECT_EQ(tr.a, j.at("trace").at("a").get<std::vector<std::uint8_t>>());
  EXPECT_EQ(tr.b, j.at("trace").at("b").get<std::vector<std::uint8_t>>());
  const auto d = decode_trace(tr, J);
  EXPECT_EQ(d.a0, j.at("decode").at("a0").get<std::vector<std::uint8_t>>());
  EXPECT_EQ(d.b0_boxes, j.at("decode").at("b0_boxes").get<std::vector<std::uint8_t>>());
}

INSTANTIATE_TEST_SUITE_P(Fixtures, CexGolden, ::testing::Values("cex_J1_seed42.json", "cex_J2_seed7.json"));
