// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code
// is 0 only when every requested criterion passes.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symdyn/counterexample.hpp"
#include "symdyn/entropydim.hpp"
#include "symdyn/error.hpp"
#include "symdyn/metricspace.hpp"
#include "symdyn/netgraph.hpp"
#include "symdyn/stats.hpp"
#include "symdyn/symsys.hpp"

using namespace symdyn;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(prec) << x;
  return s.str();
}

VertexSet range(int lo, int hi) {
  VertexSet s;
  for (int i = lo; i <= hi; ++i) s.push_back(VertexId(i));
  return s;
}

std::vector<double> eps_grid(int k_min, int k_max) {
  std::vector<double> out;
  for (int k = k_min; k <= k_max; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

// 1. Counterexample round-trip at J = 4.
void criterion1(Outcome& o) {
  const auto cone = cex_cone(4);
  const auto rep = cex_roundtrip(4, 200, 1);
  o.detail << "J=4 horizon=" << box_index(4) << " cone=" << cone.size() << " recovered " << rep.passed << "/"
           << rep.trials;
  o.require(rep.pass(), "every trial recovers a and box b exactly");
}

// 2. Quadratic propagation of box 0.
void criterion2(Outcome& o) {
  const auto prof = cex_propagation_profile(40);
  std::vector<double> x, y;
  for (int t = 10; t <= 40; ++t) {
    x.push_back(std::log(static_cast<double>(t)));
    y.push_back(std::log(static_cast<double>(prof.rho[t])));
  }
  const double slope = ols_slope(x, y);
  o.detail << "rho(40)=" << prof.rho[40] << " slope[10,40]=" << fmt(slope);
  if (!prof.lower_bound_ok) {
    const int t = prof.first_violation;
    o.detail << " first bound violation at T=" << t << " (rho=" << prof.rho[t] << " < " << prof.lower_bound[t] << ")";
  }
  o.require(prof.lower_bound_ok, "rho(T) >= (T+1)+T(T-1)/2 for all T <= 40");
  o.require(slope >= 1.8 && slope <= 2.1, "slope in [1.8, 2.1]");
}

// 3. Connectivity dimensions over r in [16, 64].
void criterion3(Outcome& o) {
  for (int d = 1; d <= 3; ++d) {
    const auto est = dim_estimate(*cayley_zd(d), VertexId::from_span(std::vector<std::int64_t>(d, 0)), 16, 64);
    o.detail << "Z" << d << " slope=" << fmt(est.fit_slope) << " pointwise=[" << fmt(est.lower_proxy) << ","
             << fmt(est.upper_proxy) << "]; ";
    o.require(std::fabs(est.fit_slope - d) <= 0.15, "Z" + std::to_string(d) + " within 0.15 of " + std::to_string(d));
  }
  const auto od = dim_estimate(*odometer_graph(), VertexId(0), 16, 64);
  const double od64 = od.pointwise_exponents.back();
  o.detail << "odometer v=0 exponent(64)=" << fmt(od64) << "; ";
  o.require(od64 <= 0.25, "odometer exponent <= 0.25 at r=64");
  const auto cx = dim_estimate(*cex_network(), VertexId(0), 16, 64);
  o.detail << "counterexample slope=" << fmt(cx.fit_slope);
  o.require(cx.fit_slope >= 1.7 && cx.fit_slope <= 2.2, "counterexample proxy in [1.7, 2.2]");
}

// 4. Panorama oracle suite.
void criterion4(Outcome& o) {
  const auto fs = panorama(*full_shift(2, 0, 1), full_space(2), {VertexId(0)}, 6);
  bool fs_ok = true;
  for (int t = 0; t <= 6; ++t) fs_ok = fs_ok && fs.layers[t] == range(0, t);
  o.detail << "full shift W^6=" << to_string(fs.layers[6]) << "; ";
  o.require(fs_ok, "full shift W^T = [0..T] for T <= 6");

  const auto od = panorama(*odometer_system({2}), odometer_space({2}), {VertexId(0)}, 10);
  bool od_ok = true;
  for (const auto& layer : od.layers) od_ok = od_ok && layer == VertexSet{VertexId(0)};
  o.detail << "odometer W^10=" << to_string(od.layers[10]) << "; ";
  o.require(od_ok, "odometer W^T = {0} for T <= 10");

  // The cone at T = 6 has 28 free bits.
  const auto cx = posexpansive_window_check(*cex_rules(), cex_space(), {VertexId(0)}, 6, range(0, 6),
                                            std::uint64_t{1} << 28);
  o.detail << "counterexample covers [0..6] at T=" << cx.first_T;
  o.require(cx.covered && cx.first_T <= 6, "counterexample covers [0..6] by T=6");
}

// 5. Binary odometer bundle.
void criterion5(Outcome& o) {
  const std::vector<VertexSet> windows{range(0, 0), range(0, 1), range(0, 2)};
  const auto chain = odometer_factor_chain(*odometer_system({2}), odometer_space({2}), windows, {4, 8, 16});
  for (std::size_t n = 0; n < chain.size(); ++n) {
    const auto& e = chain[n];
    o.detail << to_string(e.window) << ": |Y|=" << e.orbit_count << " h=" << e.horizon
             << (e.sigma_is_permutation ? " perm" : " not-perm") << "; ";
    o.require(e.envelope == windows[n], "envelope equals window " + std::to_string(n));
    o.require(e.orbit_count == (std::size_t{1} << (n + 1)), "|Y_n| = 2^(n+1)");
    o.require(e.sigma_is_permutation, "sigma_n is a permutation");
  }
}

// 6. Speed.
void criterion6(Outcome& o) {
  const auto z2 = speed_estimate(*cayley_zd(2), translation({1, 0}), VertexId{0, 0}, 8, 64);
  o.detail << "Z2 (1,0) inf_proxy=" << (z2.inf_proxy ? fmt(*z2.inf_proxy) : "none") << "; ";
  o.require(z2.inf_proxy && *z2.inf_proxy == 1.0, "Z2 inf_proxy = 1");
  const auto sc = speed_estimate(*shortcut_graph(), translation({1, 0}), VertexId{0, 0}, 16, 64);
  const auto& v16 = sc.values.back();
  o.detail << "shortcut value(16)=" << (v16 ? fmt(*v16) : "none");
  o.require(v16 && *v16 <= 9.0 / 16, "shortcut value at n=16 <= 9/16");
}

// 7. Lipschitz bound for a cellular automaton on Z^2.
void criterion7(Outcome& o) {
  std::vector<Symbol> table(16);
  std::mt19937_64 rng(7);
  for (auto& s : table) s = static_cast<Symbol>(rng() & 1);
  const auto sys = ca_on_zd(2, 2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, table);
  const auto m = single_estuary_metric(sys->graph_ptr(), VertexId{0, 0}, 2);
  const auto rep = lipschitz_report(*sys, full_space(2), m, 10000, 1);
  o.detail << "samples=" << rep.samples << " skipped=" << rep.skipped << " max_ratio=" << fmt(rep.max_ratio)
           << " exceeding=" << rep.exceeding;
  o.require(rep.ok() && rep.max_ratio <= 2.0, "no ratio above lambda = 2");
}

// 8. Metric dimension by cylinder covers.
void criterion8(Outcome& o) {
  const auto grid = eps_grid(8, 32);
  const auto z2 = metric_dim_estimate(full_space(2), single_estuary_metric(cayley_zd(2), VertexId{0, 0}, 2), grid);
  o.detail << "A^Z2 slopes=[" << fmt(z2.lower_slope) << "," << fmt(z2.upper_slope) << "]; ";
  o.require(z2.lower_slope >= 1.8 && z2.lower_slope <= 2.1, "A^Z2 lower slope in [1.8, 2.1]");
  o.require(z2.upper_slope >= 1.8 && z2.upper_slope <= 2.1, "A^Z2 upper slope in [1.8, 2.1]");
  const auto an = metric_dim_estimate(full_space(2), single_estuary_metric(unit_shift_graph(0, 1), VertexId(0), 2), grid);
  o.detail << "A^N slopes=[" << fmt(an.lower_slope) << "," << fmt(an.upper_slope) << "]";
  o.require(an.lower_slope >= 0.9 && an.lower_slope <= 1.1, "A^N lower slope in [0.9, 1.1]");
  o.require(an.upper_slope >= 0.9 && an.upper_slope <= 1.1, "A^N upper slope in [0.9, 1.1]");
}

// 9. Weak independence and tau-entropy.
void criterion9(Outcome& o) {
  const auto g = cayley_zd(2);
  const PatternSpace space(
      3, [](const VertexId& v) { return (v[0] + v[1]) % 2 == 0 ? SymbolSet{0x7} : SymbolSet{0x3}; }, "checker");
  std::mt19937_64 rng(9);
  std::vector<std::vector<BallSpec>> families;
  while (families.size() < 100) {
    // Balls on a coarse grid with radii small enough to stay disjoint.
    std::vector<BallSpec> fam;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) {
      const VertexId c{static_cast<std::int64_t>(20 * i + rng() % 5), static_cast<std::int64_t>(rng() % 11) - 5};
      fam.push_back({c, static_cast<int>(rng() % 6)});
    }
    families.push_back(fam);
  }
  const auto wi = weak_independence_report(space, *g, families);
  // Counts are compared exactly; the log ratio only up to rounding.
  bool additive = true;
  for (bool a : wi.additive) additive = additive && a;
  for (double r : wi.ratios) additive = additive && std::fabs(r - 1.0) < 1e-12;
  o.detail << "weak independence eps=" << fmt(wi.epsilon_lower) << " over " << families.size() << " families; ";
  o.require(additive, "ratio exactly 1 with exact count additivity");

  const auto F = in_ball(*g, VertexId{0, 0}, 2).members;
  const auto prof = tau_entropy_profile(full_space(2), translation({1, 0}), F, 20);
  bool increasing = true;
  for (std::size_t i = 1; i < prof.values.size(); ++i) increasing = increasing && prof.values[i] > prof.values[i - 1];
  o.detail << "tau-entropy N=1:" << fmt(prof.values.front()) << " N=20:" << fmt(prof.values.back())
           << (increasing ? " increasing" : " not increasing");
  o.require(increasing, "profile strictly increasing for N <= 20");
  o.require(prof.values.back() > 4.0, "value at N=20 exceeds 4");
}

struct Criterion {
  std::function<void(Outcome&)> run;
  double budget_s;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {criterion1, 1},  {criterion2, 1},  {criterion3, 30}, {criterion4, 10}, {criterion5, 5},
      {criterion6, 5},  {criterion7, 10}, {criterion8, 10}, {criterion9, 5},
  };
  return all;
}

bool run_one(int n) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    criteria()[n - 1].run(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [error: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double budget = criteria()[n - 1].budget_s;
  o.require(secs < budget, "runtime under " + fmt(budget, 0) + " s");
  std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " (" << fmt(secs, 2) << " s) "
            << o.detail.str() << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  bool ok = true;
  for (int n = 1; n <= static_cast<int>(criteria().size()); ++n)
    if (only == 0 || only == n) ok = run_one(n) && ok;
  return ok ? 0 : 1;
}
