#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "symdyn/counterexample.hpp"
#include "symdyn/descriptors.hpp"
#include "symdyn/entropydim.hpp"
#include "symdyn/error.hpp"
#include "symdyn/metricspace.hpp"
#include "symdyn/netgraph.hpp"
#include "symdyn/symsys.hpp"

namespace symdyn::cli {

namespace {

using Json = nlohmann::ordered_json;

// Every numeric table row carries the vertex/window it was computed over, so
// columns are fixed per command.
struct Report {
  std::string command;
  Json config = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json summary = Json::object();
  int exit_code = kOk;
};

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_cell(const Json& j) {
  std::string s;
  if (j.is_null()) return "";
  if (j.is_string()) s = j.get<std::string>();
  else if (j.is_number_float()) s = format_double(j.get<double>());
  else s = j.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return s;
}

void render_csv(const Report& r, std::ostream& os) {
  os << "# command: " << r.command << "\n";
  os << "# config: " << r.config.dump() << "\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
  for (const auto& [k, v] : r.summary.items()) os << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

void render_json(const Report& r, std::ostream& os) {
  Json j;
  j["command"] = r.command;
  j["config"] = r.config;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json o = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) o[r.columns[i]] = row[i];
    rows.push_back(o);
  }
  j["rows"] = rows;
  j["summary"] = r.summary;
  os << j.dump(2) << "\n";
}

Json num(double v) {
  if (!std::isfinite(v)) return format_double(v);
  return v;
}

Json opt_num(const std::optional<double>& v) { return v ? num(*v) : Json(); }

std::string distance_text(const Distance& d) { return is_finite(d) ? std::to_string(std::get<std::int64_t>(d)) : "inf"; }

// "0,1,2", "0;1;2", "(0,0);(1,0)" or "(0,0) (1,0)". Parenthesised groups are
// tuples. Bare numbers are grouped `arity` at a time, so on Z^2 "0,0,1,0"
// means (0,0) and (1,0).
VertexSet parse_vertex_list(const std::string& text, std::size_t arity = 1) {
  std::vector<VertexId> out;
  std::vector<std::int64_t> bare;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) {
      const VertexId v = parse_vertex(token);
      if (v.arity() != 1) throw InvalidArgument("bad vertex token: " + token);
      bare.push_back(v.index());
    }
    token.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') {
      flush();
      const auto close = text.find(')', i);
      if (close == std::string::npos) throw InvalidArgument("unbalanced parentheses in vertex list: " + text);
      out.push_back(parse_vertex(text.substr(i, close - i + 1)));
      i = close;
    } else if (c == ',' || c == ';' || c == ' ') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  if (arity == 0) arity = 1;
  if (bare.size() % arity != 0)
    throw InvalidArgument("vertex list '" + text + "' does not split into " + std::to_string(arity) + "-tuples");
  for (std::size_t i = 0; i < bare.size(); i += arity)
    out.push_back(VertexId::from_span(std::span<const std::int64_t>(bare.data() + i, arity)));
  return make_set(std::move(out));
}

std::vector<std::int64_t> parse_ints(const std::string& text) {
  std::vector<std::int64_t> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    try {
      out.push_back(std::stoll(token));
    } catch (const std::exception&) {
      throw InvalidArgument("not an integer: " + token);
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Params {
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 1;

  // graph selection
  std::string family = "cayley_zd";
  int D = -1;
  int E = -1;
  std::string graph_file;

  // graph for balls and metrics when it differs from the system network
  std::string graph_family;

  // system selection
  std::string system;
  std::string system_file;
  std::vector<int> moduli{2};
  int alphabet = 2;

  std::string v;
  std::string window = "0";
  std::string windows;
  std::string target;
  std::string tau = "1";
  std::string F;
  int F_radius = -1;
  std::string horizons;

  int r = 4;
  int rmin = 16;
  int rmax = 64;
  int T = 4;
  int T_probe = 16;
  int R_cap = 64;
  int n_max = 8;
  std::int64_t cap = 64;
  int N_max = 20;
  int J = 4;
  int trials = 200;
  int trace_trial = -1;
  int samples = 10000;
  int radius = 6;
  std::uint64_t pattern_cap = kDefaultPatternCap;
  bool members = false;

  // metric
  std::string metric_file;
  std::string estuary;
  double lambda = 2;
  double lambda_prime = 2;
  std::string scheme = "finite";
  int k_min = 8;
  int k_max = 32;
  std::string map = "system";
  double eta = 1;
  double C = 1;
};

DigraphPtr build_graph(const Params& p) {
  if (!p.graph_file.empty()) return graph_from_json(read_file(p.graph_file));
  Json j;
  j["family"] = p.family;
  if (p.D >= 0) j["D"] = p.D;
  if (p.E >= 0) j["E"] = p.E;
  return graph_from_json(j.dump());
}

LoadedSystem build_system(const Params& p) {
  if (!p.system_file.empty()) return load_system_file(p.system_file);
  if (p.system.empty()) throw InvalidArgument("give --system or --system-file");
  Json j;
  j["system"] = p.system;
  if (p.system == "odometer") j["moduli"] = p.moduli;
  if (p.system == "full_shift") {
    j["alphabet"] = p.alphabet;
    j["D"] = p.D >= 0 ? p.D : 0;
    j["E"] = p.E >= 0 ? p.E : 1;
  }
  if (p.system == "ca_on_zd") throw InvalidArgument("ca_on_zd needs a table; use --system-file");
  return system_from_json(j.dump());
}

DigraphPtr ball_graph(const Params& p, const LoadedSystem& ls) {
  if (p.graph_family.empty()) return ls.system->graph_ptr();
  Json j;
  j["family"] = p.graph_family;
  if (p.D >= 0) j["D"] = p.D;
  if (p.E >= 0) j["E"] = p.E;
  return graph_from_json(j.dump());
}

VertexId default_vertex(const Digraph& g) {
  if (const auto* lat = dynamic_cast<const LatticeDigraph*>(&g)) return lat->origin();
  if (dynamic_cast<const ShortcutDigraph*>(&g)) return VertexId{0, 0};
  if (const auto* se = dynamic_cast<const ShiftExtensionDigraph*>(&g)) return default_vertex(se->base()).appended(0);
  if (const auto* ex = dynamic_cast<const ExplicitDigraph*>(&g)) {
    if (ex->vertices().empty()) throw InvalidArgument("explicit graph has no vertices");
    return ex->vertices().front();
  }
  return VertexId(0);
}

std::size_t arity_of(const Digraph& g) { return default_vertex(g).arity(); }

VertexId vertex_or_default(const std::string& text, const Digraph& g) {
  return text.empty() ? default_vertex(g) : parse_vertex(text);
}

Subisometry build_tau(const std::string& text) {
  if (text == "identity") return identity_map();
  return translation(parse_ints(text));
}

BasedMetric build_metric(const Params& p, DigraphPtr graph) {
  if (!p.metric_file.empty()) return metric_from_json(read_file(p.metric_file), graph);
  Json j;
  Json est = Json::array();
  if (p.estuary.empty()) {
    const auto v = default_vertex(*graph);
    Json c = Json::array();
    for (auto x : v.coords()) c.push_back(x);
    est.push_back(v.arity() == 1 ? Json(v.index()) : c);
  } else {
    for (const auto& v : parse_vertex_list(p.estuary, arity_of(*graph))) {
      Json c = Json::array();
      for (auto x : v.coords()) c.push_back(x);
      est.push_back(v.arity() == 1 ? Json(v.index()) : c);
    }
  }
  j["estuary"] = est;
  j["lambda"] = p.lambda;
  j["scheme"] = p.scheme;
  return metric_from_json(j.dump(), graph);
}

// --- subcommands ------------------------------------------------------------

void graph_ball(const Params& p, Report& rep) {
  auto g = build_graph(p);
  const VertexSet centers = p.v.empty() ? VertexSet{default_vertex(*g)} : parse_vertex_list(p.v, arity_of(*g));
  if (p.r < 0) throw InvalidArgument("--r must be >= 0");
  BallExpansion ball(*g, centers);
  ball.expand_to(p.r);
  rep.columns = {"center", "r", "size", "layer_size"};
  for (int r = 0; r <= p.r; ++r)
    rep.rows.push_back({to_string(centers), r, ball.size_at(r), ball.layer(r).size()});
  rep.summary["graph"] = g->describe();
  rep.summary["saturated"] = ball.saturated();
  if (p.members) rep.summary["members"] = to_string(ball.members(p.r));
}

void graph_dim(const Params& p, Report& rep) {
  auto g = build_graph(p);
  const VertexId v = vertex_or_default(p.v, *g);
  const auto est = dim_estimate(*g, v, p.rmin, p.rmax);
  rep.columns = {"vertex", "r", "ball_size", "pointwise_exponent"};
  for (std::size_t i = 0; i < est.radii.size(); ++i)
    rep.rows.push_back({v.to_string(), est.radii[i], est.ball_sizes[i], num(est.pointwise_exponents[i])});
  rep.summary["graph"] = g->describe();
  rep.summary["fit_slope"] = num(est.fit_slope);
  rep.summary["lower_proxy"] = num(est.lower_proxy);
  rep.summary["upper_proxy"] = num(est.upper_proxy);
  rep.summary["tail_from"] = est.tail_from;
}

void graph_speed(const Params& p, Report& rep) {
  auto g = build_graph(p);
  const VertexId v = vertex_or_default(p.v, *g);
  const auto tau = build_tau(p.tau);
  const auto sp = speed_estimate(*g, tau, v, p.n_max, p.cap);
  rep.columns = {"vertex", "n", "distance", "value"};
  for (std::size_t i = 0; i < sp.n.size(); ++i)
    rep.rows.push_back({v.to_string(), sp.n[i], distance_text(sp.distances[i]), opt_num(sp.values[i])});
  rep.summary["graph"] = g->describe();
  rep.summary["tau"] = tau.label;
  rep.summary["inf_proxy"] = opt_num(sp.inf_proxy);
}

void sys_propagation(const Params& p, Report& rep) {
  const auto ls = build_system(p);
  const auto& sys = *ls.system;
  const VertexId v = vertex_or_default(p.v, sys.graph());
  const auto rho = propagation(sys, v, p.T);
  BallExpansion ball(sys.graph(), {v});
  ball.expand_to(p.T);
  rep.columns = {"vertex", "t", "rho", "ball_size"};
  bool bounded = true;
  for (int t = 0; t <= p.T; ++t) {
    const auto b = ball.size_at(t);
    bounded = bounded && rho[t] <= b;
    rep.rows.push_back({v.to_string(), t, rho[t], b});
  }
  rep.summary["system"] = sys.name();
  rep.summary["rho_within_ball"] = bounded;
  if (!bounded) rep.exit_code = kViolation;
}

void sys_panorama(const Params& p, Report& rep) {
  const auto ls = build_system(p);
  const VertexSet W = parse_vertex_list(p.window, arity_of(ls.system->graph()));
  const auto res = panorama(*ls.system, ls.space, W, p.T, p.pattern_cap);
  rep.columns = {"window", "t", "layer", "size"};
  for (int t = 0; t <= p.T; ++t)
    rep.rows.push_back({to_string(W), t, to_string(res.layers[t]), res.layers[t].size()});
  rep.summary["system"] = ls.system->name();
  rep.summary["cone"] = to_string(res.cone);
  rep.summary["patterns_enumerated"] = res.patterns_enumerated;
  if (!p.target.empty()) {
    const VertexSet target = parse_vertex_list(p.target, arity_of(ls.system->graph()));
    int first = -1;
    for (int t = 0; t <= p.T && first < 0; ++t)
      if (is_subset(target, res.layers[t])) first = t;
    rep.summary["target"] = to_string(target);
    rep.summary["covered"] = first >= 0;
    rep.summary["first_T"] = first;
    if (first < 0) {
      rep.summary["missing"] = to_string(set_difference(target, res.layers.back()));
      rep.exit_code = kViolation;
    }
  }
}

void sys_equicontinuity(const Params& p, Report& rep) {
  const auto ls = build_system(p);
  const VertexSet W = parse_vertex_list(p.window, arity_of(ls.system->graph()));
  const auto env = equicontinuity_envelope(*ls.system, ls.space, W, p.T_probe, p.R_cap, p.pattern_cap);
  rep.columns = {"window", "t", "cone_size"};
  for (std::size_t t = 0; t < env.cone_sizes.size(); ++t) rep.rows.push_back({to_string(W), t, env.cone_sizes[t]});
  rep.summary["system"] = ls.system->name();
  rep.summary["stable"] = env.stable;
  rep.summary["envelope"] = to_string(env.envelope);
  rep.summary["certified_horizon"] = env.certified_horizon;
  rep.summary["reach"] = env.reach;
  rep.summary["report"] = env.report;
  if (!env.stable) rep.exit_code = kViolation;
}

void sys_odometer_chain(const Params& p, Report& rep) {
  const auto ls = build_system(p);
  std::vector<VertexSet> windows;
  {
    std::istringstream in(p.windows.empty() ? p.window : p.windows);
    std::string w;
    while (std::getline(in, w, '|'))
      if (!w.empty()) windows.push_back(parse_vertex_list(w, arity_of(ls.system->graph())));
  }
  if (windows.empty()) throw InvalidArgument("no windows given");
  std::vector<int> horizons;
  for (auto h : parse_ints(p.horizons)) horizons.push_back(static_cast<int>(h));
  if (horizons.empty())
    for (std::size_t i = 0; i < windows.size(); ++i) horizons.push_back(1 << (i + 2));
  if (horizons.size() == 1) horizons.resize(windows.size(), horizons[0]);
  if (horizons.size() != windows.size()) throw InvalidArgument("give one horizon per window, or one for all");
  rep.columns = {"window", "horizon", "envelope", "orbit_count", "sigma_is_permutation"};
  rep.summary["system"] = ls.system->name();
  try {
    const auto chain = odometer_factor_chain(*ls.system, ls.space, windows, horizons, p.pattern_cap);
    bool ok = true;
    for (const auto& e : chain) {
      rep.rows.push_back({to_string(e.window), e.horizon, to_string(e.envelope), e.orbit_count,
                          e.sigma_is_permutation});
      ok = ok && e.sigma_is_permutation;
    }
    rep.summary["all_permutations"] = ok;
    if (!ok) rep.exit_code = kViolation;
  } catch (const NotEquicontinuous& e) {
    rep.summary["not_equicontinuous"] = e.what();
    rep.exit_code = kViolation;
  }
}

void entropy_ball(const Params& p, Report& rep) {
  const auto ls = build_system(p);
  const auto gp = ball_graph(p, ls);
  const auto& g = *gp;
  const VertexId v = vertex_or_default(p.v, g);
  const auto est = ball_entropy(ls.space, g, v, p.rmin, p.rmax);
  rep.columns = {"vertex", "r", "log2_count", "ball_size", "ratio"};
  for (std::size_t i = 0; i < est.radii.size(); ++i)
    rep.rows.push_back({v.to_string(), est.radii[i], num(est.log2_counts[i]), est.ball_sizes[i], num(est.ratios[i])});
  rep.summary["space"] = ls.space.name();
  rep.summary["lower_proxy"] = num(est.lower_proxy);
  rep.summary["upper_proxy"] = num(est.upper_proxy);
}

void entropy_tau(const Params& p, Report& rep) {
  const auto ls = build_system(p);
  const auto gp = ball_graph(p, ls);
  const auto& g = *gp;
  VertexSet F;
  if (p.F_radius >= 0) F = in_ball(g, vertex_or_default(p.v, g), p.F_radius).members;
  else if (!p.F.empty()) F = parse_vertex_list(p.F, arity_of(g));
  else F = {vertex_or_default(p.v, g)};
  const auto tau = build_tau(p.tau);
  const auto prof = tau_entropy_profile(ls.space, tau, F, p.N_max);
  rep.columns = {"F_size", "N", "set_size", "log2_count", "value"};
  bool increasing = true;
  for (std::size_t i = 0; i < prof.n.size(); ++i) {
    rep.rows.push_back({F.size(), prof.n[i], prof.set_sizes[i], num(prof.log2_counts[i]), num(prof.values[i])});
    if (i > 0 && !(prof.values[i] > prof.values[i - 1])) increasing = false;
  }
  rep.summary["space"] = ls.space.name();
  rep.summary["tau"] = tau.label;
  rep.summary["strictly_increasing"] = increasing;
}

std::string bits(const std::vector<std::uint8_t>& v) {
  std::string s;
  for (auto b : v) s += static_cast<char>('0' + b);
  return s;
}

void cex_roundtrip_cmd(const Params& p, Report& rep) {
  if (p.J < 1) throw InvalidArgument("--J must be >= 1");
  if (p.trials < 1) throw InvalidArgument("--trials must be >= 1");
  if (p.trace_trial >= 0) {
    // Trace of one trial: CSV (t, a, b) plus the decoded values.
    const auto s = trial_seed(p.seed, p.trace_trial);
    const auto x0 = random_cex_configuration(p.J, s);
    const auto tr = simulate_trace(x0, p.J);
    const auto dec = decode_trace(tr, p.J);
    const auto expect = project(x0, p.J);
    rep.columns = {"J", "t", "a", "b"};
    for (int t = 0; t <= tr.horizon; ++t) rep.rows.push_back({p.J, t, tr.a[t], tr.b[t]});
    rep.summary["trial_seed"] = s;
    rep.summary["decoded_a0"] = bits(dec.a0);
    rep.summary["decoded_b0_boxes"] = bits(dec.b0_boxes);
    rep.summary["match"] = dec == expect;
    if (!(dec == expect)) rep.exit_code = kViolation;
    return;
  }
  const auto res = cex_roundtrip(p.J, p.trials, p.seed);
  rep.columns = {"J", "trials", "passed", "failing_seeds"};
  std::string failing;
  for (auto s : res.failing_seeds) failing += (failing.empty() ? "" : " ") + std::to_string(s);
  rep.rows.push_back({p.J, res.trials, res.passed, failing});
  rep.summary["pass"] = res.pass();
  if (!res.pass()) rep.exit_code = kViolation;
}

void cex_propagation_cmd(const Params& p, Report& rep) {
  if (p.T < 1) throw InvalidArgument("--T must be >= 1");
  const auto prof = cex_propagation_profile(p.T);
  rep.columns = {"vertex", "T", "rho", "lower_bound", "bound_holds"};
  for (int t = 0; t <= p.T; ++t)
    rep.rows.push_back({"0", t, prof.rho[t], prof.lower_bound[t],
                        static_cast<std::int64_t>(prof.rho[t]) >= prof.lower_bound[t]});
  rep.summary["lower_bound_ok"] = prof.lower_bound_ok;
  rep.summary["first_violation"] = prof.first_violation;
  if (!prof.lower_bound_ok) rep.exit_code = kViolation;
}

std::vector<double> eps_grid(const Params& p) {
  if (p.k_min < 1 || p.k_max < p.k_min) throw InvalidArgument("need 1 <= --k-min <= --k-max");
  std::vector<double> eps;
  for (int k = p.k_min; k <= p.k_max; ++k) eps.push_back(std::ldexp(1.0, -k));
  return eps;
}

void metric_dim(const Params& p, Report& rep) {
  const auto ls = build_system(p);
  const auto m = build_metric(p, ball_graph(p, ls));
  const auto est = metric_dim_estimate(ls.space, m, eps_grid(p));
  rep.columns = {"estuary", "eps", "inner", "lower_log_cover", "upper_log_cover", "lower_radius", "upper_radius", "J"};
  for (std::size_t i = 0; i < est.eps.size(); ++i)
    rep.rows.push_back({m.scheme.name(), num(est.eps[i]), num(est.inner[i]), num(est.lower_log_cover[i]),
                        num(est.upper_log_cover[i]), est.lower_radius[i], est.upper_radius[i], est.J[i]});
  rep.summary["space"] = ls.space.name();
  rep.summary["lower_slope"] = num(est.lower_slope);
  rep.summary["upper_slope"] = num(est.upper_slope);
}

void metric_lipschitz(const Params& p, Report& rep) {
  const auto ls = build_system(p);
  const auto m = build_metric(p, ball_graph(p, ls));
  const auto r = lipschitz_report(*ls.system, ls.space, m, p.samples, p.seed, p.radius);
  rep.columns = {"estuary", "samples", "skipped", "exceeding", "max_ratio", "lambda", "worst_sample", "worst_seed"};
  rep.rows.push_back({m.scheme.name(), r.samples, r.skipped, r.exceeding, num(r.max_ratio), num(r.lambda),
                      r.worst_sample, r.worst_seed});
  rep.summary["ok"] = r.ok();
  if (!r.ok()) rep.exit_code = kViolation;
}

void holder_check(const Params& p, Report& rep) {
  const auto ls = build_system(p);
  const auto d = build_metric(p, ball_graph(p, ls));
  BasedMetric d_prime = d;
  d_prime.lambda = p.lambda_prime;
  if (!(p.lambda_prime > 1)) throw InvalidArgument("--lambda-prime must exceed 1");
  ConfigMap gamma;
  if (p.map == "system") gamma = as_config_map(*ls.system);
  else if (p.map == "identity") gamma = identity_config_map();
  else throw InvalidArgument("--map is system or identity");
  const auto r = holder_report(gamma, d, d_prime, p.eta, p.C, ls.space, p.samples, p.seed, p.radius);
  rep.columns = {"estuary", "eta", "C", "samples", "skipped", "worst_ratio", "worst_sample", "worst_seed"};
  rep.rows.push_back({d.scheme.name(), num(p.eta), num(p.C), r.samples, r.skipped, num(r.worst_ratio), r.worst_sample,
                      r.worst_seed});
  rep.summary["passed"] = r.passed;
  if (!r.passed) rep.exit_code = kViolation;
}

// --- option wiring ------------------------------------------------------------

void add_common(CLI::App* sub, Params& p) {
  sub->add_option("--format", p.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output,-o", p.output, "write results here instead of stdout");
  sub->add_option("--seed", p.seed, "master seed");
}

void add_graph(CLI::App* sub, Params& p) {
  sub->add_option("--family", p.family, "cayley_zd, cayley_zdne, unit_shift, odometer, shortcut, counterexample");
  sub->add_option("--D", p.D, "free axes");
  sub->add_option("--E", p.E, "one-sided axes");
  sub->add_option("--graph-file", p.graph_file, "JSON graph descriptor");
}

void add_system(CLI::App* sub, Params& p) {
  sub->add_option("--system", p.system, "odometer, full_shift, counterexample");
  sub->add_option("--system-file", p.system_file, "JSON system definition");
  sub->add_option("--moduli", p.moduli, "odometer moduli; the last repeats")->delimiter(',');
  sub->add_option("--alphabet", p.alphabet, "full_shift alphabet size");
  sub->add_option("--D", p.D, "full_shift free axes");
  sub->add_option("--E", p.E, "full_shift one-sided axes");
  sub->add_option("--graph-family", p.graph_family,
                  "take balls in this graph family (with --D/--E) instead of the system network");
}

void add_metric(CLI::App* sub, Params& p) {
  sub->add_option("--metric-file", p.metric_file, "JSON metric descriptor");
  sub->add_option("--estuary", p.estuary, "estuary vertices (default: the base vertex)");
  sub->add_option("--lambda", p.lambda, "metric base, > 1");
  sub->add_option("--scheme", p.scheme, "finite or doubleexp")->check(CLI::IsMember({"finite", "doubleexp"}));
}

Json resolved_config(const CLI::App* sub) {
  Json cfg = Json::object();
  for (const CLI::Option* o : sub->get_options()) {
    if (o->get_lnames().empty()) continue;
    const std::string name = o->get_lnames().front();
    if (name == "help") continue;
    std::string value;
    if (o->count() > 0) {
      for (const auto& s : o->results()) value += (value.empty() ? "" : ",") + s;
    } else {
      value = o->get_default_str();
      // Vector defaults come back as "[a,b]"; print them like given values.
      if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
      if (value.empty() && o->get_expected_min() == 0) value = "false";
    }
    cfg[name] = value;
  }
  return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Params p;
  CLI::App app{"symdyn: symbolic dynamics on countable digraphs"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    std::function<void(const Params&, Report&)> fn;
  };
  std::vector<Command> commands;
  auto add = [&](const std::string& name, const std::string& help, std::function<void(const Params&, Report&)> fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, p);
    commands.push_back({sub, std::move(fn)});
    return sub;
  };

  {
    auto* s = add("graph-ball", "ball sizes B(U, r) for r = 0..R", graph_ball);
    add_graph(s, p);
    s->add_option("--center,--v", p.v, "centre vertex or vertex list");
    s->add_option("--r", p.r, "radius");
    s->add_flag("--members", p.members, "list the members of the final ball");
  }
  {
    auto* s = add("graph-dim", "connectivity-dimension proxies", graph_dim);
    add_graph(s, p);
    s->add_option("--v", p.v, "base vertex (default: origin)");
    s->add_option("--rmin", p.rmin, "smallest radius");
    s->add_option("--rmax", p.rmax, "largest radius");
  }
  {
    auto* s = add("graph-speed", "speed proxies d(v, tau^n v)/n", graph_speed);
    add_graph(s, p);
    s->add_option("--v", p.v, "base vertex");
    s->add_option("--tau", p.tau, "translation vector, or identity");
    s->add_option("--n-max", p.n_max, "largest n");
    s->add_option("--cap", p.cap, "distance search cap");
  }
  {
    auto* s = add("sys-propagation", "light-cone sizes rho_v(0..T)", sys_propagation);
    add_system(s, p);
    s->add_option("--v", p.v, "vertex");
    s->add_option("--T", p.T, "horizon");
  }
  {
    auto* s = add("sys-panorama", "exhaustive panorama W^0..W^T", sys_panorama);
    add_system(s, p);
    s->add_option("--window", p.window, "window vertices");
    s->add_option("--T", p.T, "horizon");
    s->add_option("--target", p.target, "cells that must be covered (exit 1 otherwise)");
    s->add_option("--pattern-cap", p.pattern_cap, "largest cone pattern count enumerated");
  }
  {
    auto* s = add("sys-equicontinuity", "equicontinuity envelope of a window", sys_equicontinuity);
    add_system(s, p);
    s->add_option("--window", p.window, "window vertices");
    s->add_option("--T-probe", p.T_probe, "probe horizon");
    s->add_option("--R-cap", p.R_cap, "largest ball radius examined");
    s->add_option("--pattern-cap", p.pattern_cap, "largest pattern count enumerated");
  }
  {
    auto* s = add("sys-odometer-chain", "odometer-bundle factor chain", sys_odometer_chain);
    add_system(s, p);
    s->add_option("--windows", p.windows, "nested windows separated by |, e.g. 0|0,1");
    s->add_option("--horizons", p.horizons, "one horizon per window, or one for all (default 2^(i+2))");
    s->add_option("--pattern-cap", p.pattern_cap, "largest pattern count enumerated");
  }
  {
    auto* s = add("entropy-ball", "ball entropy ratios", entropy_ball);
    add_system(s, p);
    s->add_option("--v", p.v, "base vertex");
    s->add_option("--rmin", p.rmin, "smallest radius");
    s->add_option("--rmax", p.rmax, "largest radius");
  }
  {
    auto* s = add("entropy-tau", "tau-entropy profile", entropy_tau);
    add_system(s, p);
    s->add_option("--tau", p.tau, "translation vector, or identity");
    s->add_option("--F", p.F, "finite set F");
    s->add_option("--v", p.v, "ball centre when --F-radius is given");
    s->add_option("--F-radius", p.F_radius, "use F = B(v, radius)");
    s->add_option("--N-max", p.N_max, "largest N");
  }
  {
    auto* s = add("cex-roundtrip", "simulate and decode random counterexample cones", cex_roundtrip_cmd);
    s->add_option("--J", p.J, "decode depth; horizon m_J = J(J+1)");
    s->add_option("--trials", p.trials, "number of random trials");
    s->add_option("--trace-trial", p.trace_trial, "emit the (t, a, b) trace of this trial instead");
  }
  {
    auto* s = add("cex-propagation", "exact propagation of the counterexample at box 0", cex_propagation_cmd);
    s->add_option("--T", p.T, "horizon");
  }
  {
    auto* s = add("metric-dim", "cylinder-cover metric dimension proxies", metric_dim);
    add_system(s, p);
    add_metric(s, p);
    s->add_option("--k-min", p.k_min, "eps from 2^-k-min");
    s->add_option("--k-max", p.k_max, "eps down to 2^-k-max");
  }
  {
    auto* s = add("metric-lipschitz", "sampled Lipschitz ratios of the system map", metric_lipschitz);
    add_system(s, p);
    add_metric(s, p);
    s->add_option("--samples", p.samples, "sampled pairs");
    s->add_option("--radius", p.radius, "sampling domain radius");
  }
  {
    auto* s = add("holder-check", "sampled Holder inequality d'(Gx, Gy) <= C d(x, y)^eta", holder_check);
    add_system(s, p);
    add_metric(s, p);
    s->add_option("--lambda-prime", p.lambda_prime, "base of d'");
    s->add_option("--map", p.map, "system or identity");
    s->add_option("--eta", p.eta, "exponent");
    s->add_option("--C", p.C, "constant");
    s->add_option("--samples", p.samples, "sampled pairs");
    s->add_option("--radius", p.radius, "sampling domain radius");
  }

  // CLI11 wants argv order with the program name in front.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  for (const auto& c : commands) {
    if (!c.app->parsed()) continue;
    Report rep;
    rep.command = c.app->get_name();
    rep.config = resolved_config(c.app);
    try {
      c.fn(p, rep);
    } catch (const CapExceeded& e) {
      err << "error: " << e.what() << " (needs 2^" << format_double(e.required_log2()) << " patterns)\n";
      return kUsage;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
    std::ostringstream buf;
    if (p.format == "json") render_json(rep, buf);
    else render_csv(rep, buf);
    if (p.output.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(p.output);
      if (!f) {
        err << "error: cannot write " << p.output << "\n";
        return kUsage;
      }
      f << buf.str();
    }
    return rep.exit_code;
  }
  return kUsage;
}

}  // namespace symdyn::cli
