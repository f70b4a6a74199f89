#include "symdyn/metricspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <random>

#include "symdyn/entropydim.hpp"
#include "symdyn/error.hpp"
#include "symdyn/parallel.hpp"
#include "symdyn/stats.hpp"

namespace symdyn {

namespace {

constexpr double kSnap = 1e-9;
constexpr std::size_t kMaxTerms = 1'000'000;

int floor_snap(double x) { return static_cast<int>(std::floor(x + kSnap)); }
int ceil_snap(double x) { return static_cast<int>(std::ceil(x - kSnap)); }

double log_base(double x, double base) { return std::log(x) / std::log(base); }

bool same_domain(const Configuration& x, const Configuration& y) {
  if (x.size() != y.size()) return false;
  for (const auto& [v, _] : x.values())
    if (!y.has(v)) return false;
  return true;
}

}  // namespace

std::string to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::FiniteSupport:
      return "finite";
    case SchemeKind::DoubleExponential:
      return "doubleexp";
    default:
      return "custom";
  }
}

CoefficientScheme::CoefficientScheme(SchemeKind kind, std::optional<std::size_t> support, VertexFn vertex,
                                     CoeffFn coeff, TailFn tail, std::string name)
    : kind_(kind),
      support_(support),
      vertex_(std::move(vertex)),
      coeff_(std::move(coeff)),
      tail_(std::move(tail)),
      name_(std::move(name)) {
  if (support_ && *support_ == 0) throw InvalidArgument("estuary must be nonempty");
}

double CoefficientScheme::tail(std::size_t J) const {
  if (support_ && J + 1 >= *support_) return 0;
  return tail_(J);
}

std::size_t CoefficientScheme::J(double eps) const {
  if (!(eps > 0)) throw ToleranceUnreachable("epsilon must be positive");
  for (std::size_t j = 0; j < kMaxTerms; ++j)
    if (tail(j) < eps / 2) return j;
  throw ToleranceUnreachable("coefficient tail stays above " + std::to_string(eps / 2));
}

CoefficientScheme::Decay CoefficientScheme::decay_profile(int k_min, int k_max) const {
  Decay d;
  for (int k = k_min; k <= k_max; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const std::size_t j = J(eps);
    d.k.push_back(k);
    d.J.push_back(j);
    d.ratio.push_back(j <= 1 ? 0.0 : std::log(static_cast<double>(j)) / std::log(std::fabs(std::log(eps))));
  }
  const double last = d.ratio.back();
  const double mid = d.ratio[d.ratio.size() / 2];
  d.precipitous = last < 0.5 && last <= mid + 1e-12;
  return d;
}

CoefficientScheme finite_scheme(std::vector<VertexId> estuary, std::vector<double> coeffs) {
  if (estuary.size() != coeffs.size()) throw InvalidArgument("one coefficient per estuary vertex");
  for (double c : coeffs)
    if (!(c > 0)) throw InvalidArgument("coefficients must be positive");
  // suffix[j] = sum_{i >= j} c_i.
  std::vector<double> suffix(coeffs.size() + 1, 0.0);
  for (std::size_t j = coeffs.size(); j-- > 0;) suffix[j] = suffix[j + 1] + coeffs[j];
  const std::size_t n = estuary.size();
  return CoefficientScheme(
      SchemeKind::FiniteSupport, n, [estuary](std::size_t j) { return estuary.at(j); },
      [coeffs](std::size_t j) { return coeffs.at(j); },
      [suffix](std::size_t J) { return J + 1 < suffix.size() ? suffix[J + 1] : 0.0; },
      "finite(" + std::to_string(n) + ")");
}

double double_exponential_coeff(std::size_t j) {
  const double e = std::exp(static_cast<double>(j));
  return std::exp(-e) * e;
}

namespace {

// sum_{j > J} c_j <= c_{J+1} + integral_{J+1}^inf exp(x - e^x) dx, since the
// summand decreases for x > 0.
double double_exponential_tail(std::size_t J) {
  return double_exponential_coeff(J + 1) + std::exp(-std::exp(static_cast<double>(J + 1)));
}

}  // namespace

CoefficientScheme double_exponential_scheme(CoefficientScheme::VertexFn vertex, std::string label) {
  return CoefficientScheme(SchemeKind::DoubleExponential, std::nullopt, std::move(vertex), double_exponential_coeff,
                           double_exponential_tail, "doubleexp(" + label + ")");
}

CoefficientScheme double_exponential_scheme(std::vector<VertexId> estuary) {
  std::vector<double> c;
  for (std::size_t j = 0; j < estuary.size(); ++j) c.push_back(double_exponential_coeff(j));
  std::vector<double> suffix(c.size() + 1, 0.0);
  for (std::size_t j = c.size(); j-- > 0;) suffix[j] = suffix[j + 1] + c[j];
  const std::size_t n = estuary.size();
  return CoefficientScheme(
      SchemeKind::DoubleExponential, n, [estuary](std::size_t j) { return estuary.at(j); },
      double_exponential_coeff, [suffix](std::size_t J) { return J + 1 < suffix.size() ? suffix[J + 1] : 0.0; },
      "doubleexp(" + std::to_string(n) + ")");
}

BasedMetric single_estuary_metric(DigraphPtr graph, const VertexId& v, double lambda) {
  if (!(lambda > 1)) throw InvalidArgument("lambda must exceed 1");
  return BasedMetric{finite_scheme({v}, {1.0}), lambda, std::move(graph)};
}

// ---------------------------------------------------------------------------

PseudoDistance pseudo_dist(const Digraph& g, double lambda, const VertexId& v, const Configuration& x,
                           const Configuration& y, std::optional<int> r_cap) {
  if (!(lambda > 1)) throw InvalidArgument("lambda must exceed 1");
  if (!same_domain(x, y)) throw DomainMismatch("configurations have different domains");
  if (!x.has(v)) throw InsufficientDomain("domain does not contain the base vertex " + v.to_string());
  PseudoDistance pd;
  BallExpansion e(g, {v});
  const int cap = r_cap.value_or(std::numeric_limits<int>::max());
  for (int r = 0;; ++r) {
    if (r > cap) {
      pd.r_cap = cap;
      break;
    }
    const auto& layer = e.layer(r);
    if (r > 0 && layer.empty()) {
      pd.saturated = true;
      pd.R = r - 1;
      pd.r_cap = r - 1;
      pd.bound = {0, 0};
      return pd;
    }
    bool missing = false;
    for (const auto& u : layer) {
      const auto a = x.get(u);
      if (!a) {
        missing = true;
        continue;
      }
      if (*a != *y.get(u)) {
        pd.R = r - 1;
        pd.r_cap = r - 1;
        const double d = std::min(1.0, std::pow(lambda, -static_cast<double>(pd.R)));
        pd.bound = {d, d};
        return pd;
      }
    }
    if (missing) {
      pd.r_cap = r - 1;
      break;
    }
    pd.R = r;
  }
  pd.R = pd.r_cap;
  pd.bound = {0, std::min(1.0, std::pow(lambda, -static_cast<double>(pd.r_cap)))};
  return pd;
}

DistanceBound pseudo_dist(const BasedMetric& m, const VertexId& v, const Configuration& x, const Configuration& y) {
  return pseudo_dist(*m.graph, m.lambda, v, x, y).bound;
}

DistanceBound dist(const BasedMetric& m, const Configuration& x, const Configuration& y, double tolerance) {
  if (!same_domain(x, y)) throw DomainMismatch("configurations have different domains");
  const std::size_t J = m.scheme.J(2 * tolerance);
  DistanceBound b;
  for (std::size_t j = 0; j <= J; ++j) {
    const VertexId u = m.scheme.vertex(j);
    if (!x.has(u))
      throw ToleranceUnreachable("tolerance " + std::to_string(tolerance) + " needs estuary vertex " +
                                 u.to_string() + ", which is outside the domain");
    const DistanceBound p = pseudo_dist(*m.graph, m.lambda, u, x, y).bound;
    const double c = m.scheme.coeff(j);
    b.lo += c * p.lo;
    b.hi += c * p.hi;
  }
  b.hi += m.scheme.tail(J);
  return b;
}

// ---------------------------------------------------------------------------

PairSampler::PairSampler(DigraphPtr graph, const PatternSpace& space, VertexSet centers, int radius)
    : graph_(std::move(graph)), space_(space) {
  if (radius < 0) throw InvalidArgument("sampling radius must be >= 0");
  BallExpansion e(*graph_, std::move(centers));
  for (int r = 0; r <= radius; ++r) layers_.push_back(e.layer(r));
  domain_ = e.members(radius);
}

std::pair<Configuration, Configuration> PairSampler::draw(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Configuration x = random_configuration(space_, domain_, rng);
  Configuration y = x;
  const int top = static_cast<int>(layers_.size()) - 1;
  int rho = static_cast<int>(rng() % static_cast<std::uint64_t>(top + 1));
  while (rho > 0 && layers_[rho].empty()) --rho;
  for (int r = rho; r <= top; ++r)
    for (const auto& u : layers_[r])
      if (rng() & 1) {
        const auto syms = space_.allowed_symbols(u);
        y.set(u, syms[rng() % syms.size()]);
      }
  const auto& layer = layers_[rho];
  const VertexId& u = layer[rng() % layer.size()];
  const auto syms = space_.allowed_symbols(u);
  if (syms.size() > 1) {
    Symbol s = x.at(u);
    while (s == x.at(u)) s = syms[rng() % syms.size()];
    y.set(u, s);
  }
  return {std::move(x), std::move(y)};
}

namespace {

VertexSet estuary_prefix(const BasedMetric& m, double tolerance) {
  VertexSet out;
  const std::size_t J = m.scheme.J(2 * tolerance);
  for (std::size_t j = 0; j <= J; ++j) out.push_back(m.scheme.vertex(j));
  return make_set(out);
}

}  // namespace

LipschitzReport lipschitz_report(const SymbolicSystem& sys, const PatternSpace& space, const BasedMetric& m,
                                 int samples, std::uint64_t seed, int domain_radius) {
  const PairSampler sampler(m.graph, space, estuary_prefix(m, 1e-12), domain_radius);
  LipschitzReport rep;
  rep.lambda = m.lambda;
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    const auto [x, y] = sampler.draw(s);
    ++rep.samples;
    const DistanceBound before = dist(m, x, y);
    if (before.lo <= 0) {
      ++rep.skipped;
      continue;
    }
    const Configuration fx = apply_once(sys, x, sampler.domain());
    const Configuration fy = apply_once(sys, y, sampler.domain());
    const DistanceBound after = dist(m, fx, fy);
    const double ratio = after.hi / before.lo;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_seed = s;
      rep.worst_sample = i;
    }
    if (ratio > m.lambda * (1 + 1e-12)) ++rep.exceeding;
  }
  return rep;
}

ConfigMap as_config_map(const SymbolicSystem& sys) {
  return [&sys](const Configuration& x) { return apply_once(sys, x, x.domain()); };
}

ConfigMap identity_config_map() {
  return [](const Configuration& x) { return x; };
}

HolderReport holder_report(const ConfigMap& gamma, const BasedMetric& d, const BasedMetric& d_prime, double eta,
                           double C, const PatternSpace& space, int samples, std::uint64_t seed, int domain_radius) {
  if (!(eta > 0) || !(C > 0)) throw InvalidArgument("eta and C must be positive");
  const PairSampler sampler(d.graph, space, estuary_prefix(d, 1e-12), domain_radius);
  HolderReport rep;
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    const auto [x, y] = sampler.draw(s);
    ++rep.samples;
    const DistanceBound before = dist(d, x, y);
    if (before.lo <= 0) {
      ++rep.skipped;
      continue;
    }
    const DistanceBound after = dist(d_prime, gamma(x), gamma(y));
    const double scale = std::pow(before.lo, eta);
    const double ratio = after.hi / scale;
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_seed = s;
      rep.worst_sample = i;
    }
    if (after.hi > C * scale * (1 + 1e-9)) rep.passed = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------

MetricDimEstimate metric_dim_estimate(const PatternSpace& space, const BasedMetric& m,
                                      const std::vector<double>& eps_grid) {
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0 && eps_grid[i] < 1)) throw InvalidArgument("epsilon values must lie in (0, 1)");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw InvalidArgument("epsilon grid must be decreasing");
  }
  const double lambda = m.lambda;
  const double S = m.scheme.total();
  std::map<std::size_t, std::unique_ptr<BallExpansion>> balls;
  auto ball = [&](std::size_t j, int r) {
    auto& b = balls[j];
    if (!b) b = std::make_unique<BallExpansion>(*m.graph, VertexSet{m.scheme.vertex(j)});
    return b->members(r);
  };

  MetricDimEstimate est;
  std::vector<double> lx, ly, ux, uy;
  for (double eps : eps_grid) {
    VertexSet lower;
    int r0 = -1;
    for (std::size_t j = 0; j < kMaxTerms; ++j) {
      if (m.scheme.support() && j >= *m.scheme.support()) break;
      const double c = m.scheme.coeff(j);
      if (!(c > eps)) {
        if (!m.scheme.support()) break;
        continue;
      }
      const int r = floor_snap(log_base(c / eps, lambda));
      if (j == 0) r0 = r;
      lower = set_union(lower, ball(j, r));
    }
    const std::size_t J = m.scheme.J(eps);
    const int r_up = ceil_snap(log_base(2 * S / eps, lambda));
    VertexSet upper;
    for (std::size_t j = 0; j <= J; ++j) upper = set_union(upper, ball(j, r_up));

    const double inner = -log_base(eps, lambda);
    const double lo = pattern_log_count(space, lower);
    const double hi = pattern_log_count(space, upper);
    est.eps.push_back(eps);
    est.inner.push_back(inner);
    est.lower_log_cover.push_back(lo);
    est.upper_log_cover.push_back(hi);
    est.lower_radius.push_back(r0);
    est.upper_radius.push_back(r_up);
    est.J.push_back(J);
    if (lo > 0) {
      lx.push_back(std::log(inner));
      ly.push_back(std::log(lo));
    }
    if (hi > 0) {
      ux.push_back(std::log(inner));
      uy.push_back(std::log(hi));
    }
  }
  if (lx.size() >= 2) est.lower_slope = ols_slope(lx, ly);
  if (ux.size() >= 2) est.upper_slope = ols_slope(ux, uy);
  return est;
}

UniformDimProfile uniform_dim_profile(const Digraph& g, const VertexSet& U, const std::vector<int>& r_grid) {
  const VertexSet centers = make_set(U);
  if (centers.empty()) throw InvalidArgument("U must be nonempty");
  std::vector<std::unique_ptr<BallExpansion>> balls;
  for (const auto& u : centers) balls.push_back(std::make_unique<BallExpansion>(g, VertexSet{u}));
  UniformDimProfile prof;
  for (int r : r_grid) {
    if (r < 2) throw InvalidArgument("radii must be >= 2");
    double best = -1;
    VertexId arg;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double v = std::log(static_cast<double>(balls[i]->size_at(r))) / std::log(static_cast<double>(r));
      if (v > best) {
        best = v;
        arg = centers[i];
      }
    }
    prof.radii.push_back(r);
    prof.values.push_back(best);
    prof.argmax.push_back(arg);
  }
  return prof;
}

}  // namespace symdyn
