#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symdyn/symsys.hpp"

namespace symdyn {

// Cell state (a, b) in Z2 x Z2, packed as a | b << 1.
inline Symbol cex_symbol(int a, int b) { return static_cast<Symbol>((a & 1) | (b & 1) << 1); }
inline int cex_a(Symbol s) { return s & 1; }
inline int cex_b(Symbol s) { return (s >> 1) & 1; }

DigraphPtr cex_network();
SystemPtr cex_rules();
// Circles carry b = 0; boxes are unconstrained.
PatternSpace cex_space();

// Light cone of the box at 0 up to horizon m_J.
VertexSet cex_cone(int J);

struct Trace {
  int horizon = 0;
  std::vector<std::uint8_t> a;
  std::vector<std::uint8_t> b;
};

struct DecodeResult {
  std::vector<std::uint8_t> a0;        // a at cells 0..m_J
  std::vector<std::uint8_t> b0_boxes;  // b at boxes m_0..m_J
  friend bool operator==(const DecodeResult&, const DecodeResult&) = default;
};

Trace simulate_trace(const Configuration& x0, int J);
DecodeResult decode_trace(const Trace& tr, int J);
// What decoding should return for x0.
DecodeResult project(const Configuration& x0, int J);

struct DecodeMismatch {
  std::string field;  // "a" or "b"
  std::int64_t cell = 0;
};

std::vector<DecodeMismatch> compare_decode(const DecodeResult& expected, const DecodeResult& got, int J);

struct RoundtripReport {
  int J = 0;
  int trials = 0;
  int passed = 0;
  std::vector<std::uint64_t> failing_seeds;
  bool pass() const { return passed == trials; }
};

// Seed of trial i, derived from the master seed only.
std::uint64_t trial_seed(std::uint64_t master, int trial);
Configuration random_cex_configuration(int J, std::uint64_t seed);
RoundtripReport cex_roundtrip(int J, int trials, std::uint64_t seed);

struct CexPropagationProfile {
  std::vector<std::size_t> rho;
  std::vector<std::int64_t> lower_bound;  // (T+1) + T(T-1)/2
  bool lower_bound_ok = true;
  int first_violation = -1;
};

CexPropagationProfile cex_propagation_profile(int T);

}  // namespace symdyn
