#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/digraph.hpp"
#include "symdyn/netgraph.hpp"
#include "symdyn/symsys.hpp"

namespace symdyn {

enum class SchemeKind { FiniteSupport, DoubleExponential, Custom };
std::string to_string(SchemeKind k);

// Coefficients c_j > 0 attached to an enumerated estuary u_0, u_1, ...
class CoefficientScheme {
 public:
  using VertexFn = std::function<VertexId(std::size_t)>;
  using CoeffFn = std::function<double(std::size_t)>;
  using TailFn = std::function<double(std::size_t)>;

  // support: number of estuary vertices, or nullopt when infinite. tail(J)
  // must bound sum_{j > J} c_j from above.
  CoefficientScheme(SchemeKind kind, std::optional<std::size_t> support, VertexFn vertex, CoeffFn coeff, TailFn tail,
                    std::string name);

  SchemeKind kind() const { return kind_; }
  std::optional<std::size_t> support() const { return support_; }
  VertexId vertex(std::size_t j) const { return vertex_(j); }
  double coeff(std::size_t j) const { return coeff_(j); }
  double tail(std::size_t J) const;
  // Upper bound on the total mass S.
  double total() const { return coeff(0) + tail(0); }
  const std::string& name() const { return name_; }

  // min J with tail(J) < eps / 2.
  std::size_t J(double eps) const;

  // J(eps) on eps = 2^-k, k in [k_min, k_max], and the ratio ln J / |ln ln eps|.
  struct Decay {
    std::vector<int> k;
    std::vector<std::size_t> J;
    std::vector<double> ratio;
    bool precipitous = false;
  };
  Decay decay_profile(int k_min = 4, int k_max = 64) const;

 private:
  SchemeKind kind_;
  std::optional<std::size_t> support_;
  VertexFn vertex_;
  CoeffFn coeff_;
  TailFn tail_;
  std::string name_;
};

CoefficientScheme finite_scheme(std::vector<VertexId> estuary, std::vector<double> coeffs);
// c_j = exp(-e^j) e^j on an enumerated estuary.
CoefficientScheme double_exponential_scheme(CoefficientScheme::VertexFn vertex, std::string label);
// Double-exponential coefficients on a finite list.
CoefficientScheme double_exponential_scheme(std::vector<VertexId> estuary);
double double_exponential_coeff(std::size_t j);

struct BasedMetric {
  CoefficientScheme scheme;
  double lambda = 2;
  DigraphPtr graph;
};

BasedMetric single_estuary_metric(DigraphPtr graph, const VertexId& v, double lambda);

struct DistanceBound {
  double lo = 0;
  double hi = 0;
};

struct PseudoDistance {
  DistanceBound bound;
  // Agreement radius: max r with agreement on B(v,r), -1 when v disagrees.
  int R = -1;
  // Largest radius whose ball lies inside the domain.
  int r_cap = -1;
  bool saturated = false;
};

// d_{v,lambda}(x, y). Values are capped to 1 when x and y differ at v.
PseudoDistance pseudo_dist(const Digraph& g, double lambda, const VertexId& v, const Configuration& x,
                           const Configuration& y, std::optional<int> r_cap = std::nullopt);
DistanceBound pseudo_dist(const BasedMetric& m, const VertexId& v, const Configuration& x, const Configuration& y);

// d_{c,lambda}(x, y), summing the prefix whose tail mass is below tolerance.
DistanceBound dist(const BasedMetric& m, const Configuration& x, const Configuration& y, double tolerance = 1e-12);

// Draws (x, y) on a ball around a centre set: y is x resampled from a random
// radius outward, with a forced change at that radius.
class PairSampler {
 public:
  PairSampler(DigraphPtr graph, const PatternSpace& space, VertexSet centers, int radius);

  const VertexSet& domain() const { return domain_; }
  std::pair<Configuration, Configuration> draw(std::uint64_t seed) const;

 private:
  DigraphPtr graph_;
  PatternSpace space_;
  VertexSet domain_;
  std::vector<VertexSet> layers_;
};

struct LipschitzReport {
  int samples = 0;
  int skipped = 0;
  int exceeding = 0;
  double max_ratio = 0;
  std::uint64_t worst_seed = 0;
  int worst_sample = -1;
  double lambda = 0;
  bool ok() const { return exceeding == 0; }
};

LipschitzReport lipschitz_report(const SymbolicSystem& sys, const PatternSpace& space, const BasedMetric& m,
                                 int samples, std::uint64_t seed, int domain_radius = 6);

using ConfigMap = std::function<Configuration(const Configuration&)>;

// Gamma applied to a finite configuration, keeping every cell whose inputs
// are present.
ConfigMap as_config_map(const SymbolicSystem& sys);
ConfigMap identity_config_map();

struct HolderReport {
  bool passed = true;
  int samples = 0;
  int skipped = 0;
  double worst_ratio = 0;  // hi(d') / lo(d)^eta
  std::uint64_t worst_seed = 0;
  int worst_sample = -1;
};

// Checks d'(Gx, Gy) <= C d(x, y)^eta on sampled pairs.
HolderReport holder_report(const ConfigMap& gamma, const BasedMetric& d, const BasedMetric& d_prime, double eta,
                           double C, const PatternSpace& space, int samples, std::uint64_t seed,
                           int domain_radius = 6);

struct MetricDimEstimate {
  std::vector<double> eps;
  std::vector<double> inner;  // -log_lambda eps
  std::vector<double> lower_log_cover;
  std::vector<double> upper_log_cover;
  std::vector<int> lower_radius;  // r_u for u_0
  std::vector<int> upper_radius;  // r(eps)
  std::vector<std::size_t> J;
  double lower_slope = 0;
  double upper_slope = 0;
};

MetricDimEstimate metric_dim_estimate(const PatternSpace& space, const BasedMetric& m, const std::vector<double>& eps_grid);

struct UniformDimProfile {
  std::vector<int> radii;
  std::vector<double> values;
  std::vector<VertexId> argmax;
};

UniformDimProfile uniform_dim_profile(const Digraph& g, const VertexSet& U, const std::vector<int>& r_grid);

}  // namespace symdyn
