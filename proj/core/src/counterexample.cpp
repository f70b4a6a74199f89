#include "symdyn/counterexample.hpp"

#include <random>

#include "symdyn/error.hpp"
#include "symdyn/parallel.hpp"

namespace symdyn {

DigraphPtr cex_network() { return counterexample_graph(); }

SystemPtr cex_rules() {
  static const SystemPtr sys = [] {
    auto graph = cex_network();
    auto factory = [](const VertexId& v) {
      const std::int64_t n = v.index();
      const std::int64_t k = box_rank(n);
      LocalRule rule;
      if (k < 0) {
        rule.inputs = {VertexId(n + 1)};
        for (Symbol s = 0; s < 4; ++s) rule.table.push_back(cex_symbol(cex_a(s), 0));
      } else {
        rule.inputs = {VertexId(n + 1), VertexId(box_index(k + 1))};
        for (Symbol s1 = 0; s1 < 4; ++s1)
          for (Symbol s2 = 0; s2 < 4; ++s2) rule.table.push_back(cex_symbol(cex_a(s1), cex_a(s2) ^ cex_b(s2)));
      }
      return rule;
    };
    return std::make_shared<SymbolicSystem>(Alphabet{4, {"(0,0)", "(1,0)", "(0,1)", "(1,1)"}}, graph, factory,
                                            "counterexample");
  }();
  return sys;
}

PatternSpace cex_space() {
  return PatternSpace(
      4, [](const VertexId& v) -> SymbolSet { return is_box(v.index()) ? 0xF : 0x3; }, "counterexample");
}

VertexSet cex_cone(int J) {
  if (J < 0) throw InvalidArgument("J must be >= 0");
  return light_cone(*cex_rules(), {VertexId(0)}, static_cast<int>(box_index(J))).cone;
}

Trace simulate_trace(const Configuration& x0, int J) {
  if (J < 0) throw InvalidArgument("J must be >= 0");
  for (const auto& [v, s] : x0.values())
    if (!is_box(v.index()) && cex_b(s) != 0)
      throw InvalidArgument("circle " + v.to_string() + " carries b = 1");
  const int horizon = static_cast<int>(box_index(J));
  const Trajectory traj = evaluate(*cex_rules(), x0, {VertexId(0)}, horizon);
  Trace tr;
  tr.horizon = horizon;
  for (const auto& step : traj.steps) {
    tr.a.push_back(static_cast<std::uint8_t>(cex_a(step[0])));
    tr.b.push_back(static_cast<std::uint8_t>(cex_b(step[0])));
  }
  return tr;
}

DecodeResult decode_trace(const Trace& tr, int J) {
  if (J < 0) throw InvalidArgument("J must be >= 0");
  const std::int64_t mJ = box_index(J);
  if (tr.horizon < mJ || static_cast<std::int64_t>(tr.a.size()) < mJ + 1 ||
      static_cast<std::int64_t>(tr.b.size()) < mJ + 1)
    throw HorizonTooShort("decoding J=" + std::to_string(J) + " needs horizon " + std::to_string(mJ) +
                          ", trace has " + std::to_string(tr.horizon));
  DecodeResult out;
  out.a0.assign(tr.a.begin(), tr.a.begin() + mJ + 1);

  // b[t] holds b at box m_j, time t, for t in [0, mJ - m_j].
  std::vector<std::uint8_t> b(tr.b.begin(), tr.b.begin() + mJ + 1);
  out.b0_boxes.push_back(b[0]);
  for (int j = 0; j < J; ++j) {
    const std::int64_t next = box_index(j + 1);
    std::vector<std::uint8_t> nb(static_cast<std::size_t>(mJ - next + 1));
    for (std::int64_t t = 0; t <= mJ - next; ++t) nb[t] = b[t + 1] ^ tr.a[t + next];
    b = std::move(nb);
    out.b0_boxes.push_back(b[0]);
  }
  return out;
}

DecodeResult project(const Configuration& x0, int J) {
  const std::int64_t mJ = box_index(J);
  DecodeResult out;
  for (std::int64_t n = 0; n <= mJ; ++n) out.a0.push_back(static_cast<std::uint8_t>(cex_a(x0.at(VertexId(n)))));
  for (int j = 0; j <= J; ++j)
    out.b0_boxes.push_back(static_cast<std::uint8_t>(cex_b(x0.at(VertexId(box_index(j))))));
  return out;
}

std::vector<DecodeMismatch> compare_decode(const DecodeResult& expected, const DecodeResult& got, int J) {
  std::vector<DecodeMismatch> out;
  for (std::size_t n = 0; n < expected.a0.size(); ++n)
    if (n >= got.a0.size() || got.a0[n] != expected.a0[n]) out.push_back({"a", static_cast<std::int64_t>(n)});
  for (int j = 0; j <= J && j < static_cast<int>(expected.b0_boxes.size()); ++j)
    if (j >= static_cast<int>(got.b0_boxes.size()) || got.b0_boxes[j] != expected.b0_boxes[j])
      out.push_back({"b", box_index(j)});
  return out;
}

std::uint64_t trial_seed(std::uint64_t master, int trial) {
  return derive_seed(master, static_cast<std::uint64_t>(trial));
}

Configuration random_cex_configuration(int J, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const PatternSpace space = cex_space();
  return random_configuration(space, cex_cone(J), rng);
}

RoundtripReport cex_roundtrip(int J, int trials, std::uint64_t seed) {
  if (J < 1) throw InvalidArgument("cex_roundtrip needs J >= 1");
  if (trials < 0) throw InvalidArgument("trials must be >= 0");
  const VertexSet cone = cex_cone(J);
  const PatternSpace space = cex_space();
  std::vector<char> ok(static_cast<std::size_t>(trials), 0);
  parallel_chunks(static_cast<std::size_t>(trials), [&](std::size_t i) {
    std::mt19937_64 rng(trial_seed(seed, static_cast<int>(i)));
    const Configuration x0 = random_configuration(space, cone, rng);
    ok[i] = decode_trace(simulate_trace(x0, J), J) == project(x0, J);
  });
  RoundtripReport rep;
  rep.J = J;
  rep.trials = trials;
  for (int i = 0; i < trials; ++i) {
    if (ok[i])
      ++rep.passed;
    else
      rep.failing_seeds.push_back(trial_seed(seed, i));
  }
  return rep;
}

CexPropagationProfile cex_propagation_profile(int T) {
  if (T < 1) throw InvalidArgument("T must be >= 1");
  CexPropagationProfile prof;
  prof.rho = propagation(*cex_rules(), VertexId(0), T);
  for (int t = 0; t <= T; ++t) {
    const std::int64_t bound = (t + 1) + static_cast<std::int64_t>(t) * (t - 1) / 2;
    prof.lower_bound.push_back(bound);
    if (static_cast<std::int64_t>(prof.rho[t]) < bound && prof.lower_bound_ok) {
      prof.lower_bound_ok = false;
      prof.first_violation = t;
    }
  }
  return prof;
}

}  // namespace symdyn
