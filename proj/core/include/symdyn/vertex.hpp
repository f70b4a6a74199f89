#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace symdyn {

// Opaque vertex identifier: a short tuple of integers. Lattice points use one
// coordinate per axis; odometer, shortcut and counterexample vertices use a
// single index (or an (index, level) pair).
//
// Ordering is by arity first, then lexicographic on coordinates. This is the
// canonical order used for every deterministic output.
class VertexId {
 public:
  static constexpr std::size_t kMaxCoords = 4;

  constexpr VertexId() = default;
  constexpr explicit VertexId(std::int64_t index) : arity_(1), coords_{index, 0, 0, 0} {}
  VertexId(std::initializer_list<std::int64_t> coords);
  static VertexId from_span(std::span<const std::int64_t> coords);

  std::size_t arity() const { return arity_; }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t index() const { return coords_[0]; }
  std::span<const std::int64_t> coords() const { return {coords_.data(), arity_}; }

  // Appends one coordinate; used by the shift-extension construction.
  VertexId appended(std::int64_t c) const;
  // Drops the last coordinate.
  VertexId truncated() const;
  VertexId with(std::size_t i, std::int64_t c) const;

  std::string to_string() const;

  friend constexpr auto operator<=>(const VertexId&, const VertexId&) = default;
  friend constexpr bool operator==(const VertexId&, const VertexId&) = default;

 private:
  std::uint8_t arity_ = 0;
  std::array<std::int64_t, kMaxCoords> coords_{};
};

struct VertexHash {
  std::size_t operator()(const VertexId& v) const noexcept;
};

// Sorted, duplicate-free vertex list.
using VertexSet = std::vector<VertexId>;
using VertexHashSet = std::unordered_set<VertexId, VertexHash>;
template <class T>
using VertexMap = std::unordered_map<VertexId, T, VertexHash>;

// Sorts and deduplicates in place.
void canonicalize(VertexSet& s);
VertexSet make_set(std::vector<VertexId> v);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
bool is_subset(const VertexSet& a, const VertexSet& b);
bool contains(const VertexSet& s, const VertexId& v);

std::string to_string(const VertexSet& s);

// Parses "3", "(1,-2)" or "1,-2".
VertexId parse_vertex(const std::string& text);

}  // namespace symdyn
