#include "symdyn/digraph.hpp"

#include <algorithm>
#include <cmath>

#include "symdyn/error.hpp"

namespace symdyn {

std::vector<VertexId> Digraph::out_neighbors(const VertexId& v) const {
  throw MissingOutNeighbors(describe() + " does not enumerate out-neighbours (asked at " +
                            v.to_string() + ")");
}

bool Digraph::has_edge(const VertexId& from, const VertexId& to) const {
  const auto in = in_neighbors(to);
  return std::find(in.begin(), in.end(), from) != in.end();
}

// ---------------------------------------------------------------------------

LatticeDigraph::LatticeDigraph(int d, int e, std::vector<std::vector<std::int64_t>> offsets,
                               std::string name)
    : d_(d), e_(e), offsets_(std::move(offsets)), name_(std::move(name)) {
  if (d < 0 || e < 0 || d + e < 1 || d + e > static_cast<int>(VertexId::kMaxCoords))
    throw InvalidArgument("lattice dimension must be in [1, 4]");
  for (const auto& o : offsets_)
    if (static_cast<int>(o.size()) != d + e) throw InvalidArgument("offset has wrong dimension");
}

bool LatticeDigraph::in_orthant(const VertexId& v) const {
  for (int i = d_; i < d_ + e_; ++i)
    if (v[i] < 0) return false;
  return true;
}

VertexId LatticeDigraph::shifted(const VertexId& v, const std::vector<std::int64_t>& o,
                                 int sign) const {
  std::array<std::int64_t, VertexId::kMaxCoords> c{};
  for (int i = 0; i < dims(); ++i) c[i] = v[i] + sign * o[i];
  return VertexId::from_span({c.data(), static_cast<std::size_t>(dims())});
}

std::vector<VertexId> LatticeDigraph::in_neighbors(const VertexId& v) const {
  std::vector<VertexId> out;
  out.reserve(offsets_.size());
  for (const auto& o : offsets_) {
    VertexId w = shifted(v, o, +1);
    if (in_orthant(w)) out.push_back(w);
  }
  return out;
}

std::vector<VertexId> LatticeDigraph::out_neighbors(const VertexId& v) const {
  std::vector<VertexId> out;
  out.reserve(offsets_.size());
  for (const auto& o : offsets_) {
    VertexId w = shifted(v, o, -1);
    if (in_orthant(w)) out.push_back(w);
  }
  return out;
}

bool LatticeDigraph::contains(const VertexId& v) const {
  return static_cast<int>(v.arity()) == dims() && in_orthant(v);
}

VertexId LatticeDigraph::origin() const {
  std::array<std::int64_t, VertexId::kMaxCoords> c{};
  return VertexId::from_span({c.data(), static_cast<std::size_t>(dims())});
}

// ---------------------------------------------------------------------------

std::vector<VertexId> OdometerDigraph::in_neighbors(const VertexId& v) const {
  std::vector<VertexId> out;
  out.reserve(static_cast<std::size_t>(v.index()) + 1);
  for (std::int64_t n = 0; n <= v.index(); ++n) out.emplace_back(n);
  return out;
}

bool OdometerDigraph::contains(const VertexId& v) const {
  return v.arity() == 1 && v.index() >= 0;
}

// ---------------------------------------------------------------------------

std::vector<VertexId> ShortcutDigraph::in_neighbors(const VertexId& v) const {
  const std::int64_t z = v[0], n = v[1];
  std::vector<VertexId> out;
  if (n >= 1) out.push_back(VertexId{z, n - 1});
  if (n + 1 <= kMaxLevel) out.push_back(VertexId{z, n + 1});
  out.push_back(VertexId{z - (std::int64_t{1} << n), n});
  return out;
}

std::vector<VertexId> ShortcutDigraph::out_neighbors(const VertexId& v) const {
  const std::int64_t z = v[0], n = v[1];
  std::vector<VertexId> out;
  if (n >= 1) out.push_back(VertexId{z, n - 1});
  if (n + 1 <= kMaxLevel) out.push_back(VertexId{z, n + 1});
  out.push_back(VertexId{z + (std::int64_t{1} << n), n});
  return out;
}

bool ShortcutDigraph::contains(const VertexId& v) const {
  return v.arity() == 2 && v[1] >= 0 && v[1] <= kMaxLevel;
}

// ---------------------------------------------------------------------------

std::int64_t box_index(std::int64_t k) { return k * (k + 1); }

std::int64_t box_rank(std::int64_t n) {
  if (n < 0) return -1;
  auto k = static_cast<std::int64_t>((std::sqrt(4.0 * static_cast<double>(n) + 1.0) - 1.0) / 2.0);
  while (box_index(k) > n) --k;
  while (box_index(k + 1) <= n) ++k;
  return box_index(k) == n ? k : -1;
}

bool is_box(std::int64_t n) { return box_rank(n) >= 0; }

std::vector<VertexId> CexDigraph::in_neighbors(const VertexId& v) const {
  const std::int64_t n = v.index();
  const std::int64_t k = box_rank(n);
  if (k < 0) return {VertexId(n + 1)};
  return {VertexId(n + 1), VertexId(box_index(k + 1))};
}

std::vector<VertexId> CexDigraph::out_neighbors(const VertexId& v) const {
  const std::int64_t n = v.index();
  std::vector<VertexId> out;
  if (n >= 1) out.emplace_back(n - 1);
  const std::int64_t k = box_rank(n);
  if (k >= 1) out.emplace_back(box_index(k - 1));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool CexDigraph::contains(const VertexId& v) const { return v.arity() == 1 && v.index() >= 0; }

// ---------------------------------------------------------------------------

ExplicitDigraph::ExplicitDigraph(std::vector<std::pair<VertexId, VertexId>> edges,
                                 std::vector<VertexId> extra_vertices)
    : vertices_(std::move(extra_vertices)) {
  for (const auto& [v, w] : edges) {
    vertices_.push_back(v);
    vertices_.push_back(w);
  }
  canonicalize(vertices_);
  for (const auto& v : vertices_) {
    in_[v];
    out_[v];
  }
  for (const auto& [v, w] : edges) {
    auto& in = in_[w];
    if (std::find(in.begin(), in.end(), v) != in.end()) continue;
    in.push_back(v);
    out_[v].push_back(w);
    ++edge_count_;
  }
  for (auto& [_, l] : in_) std::sort(l.begin(), l.end());
  for (auto& [_, l] : out_) std::sort(l.begin(), l.end());
}

std::vector<VertexId> ExplicitDigraph::in_neighbors(const VertexId& v) const {
  auto it = in_.find(v);
  if (it == in_.end())
    throw UniverseExhausted("vertex " + v.to_string() + " is outside the explicit universe");
  return it->second;
}

std::vector<VertexId> ExplicitDigraph::out_neighbors(const VertexId& v) const {
  auto it = out_.find(v);
  if (it == out_.end())
    throw UniverseExhausted("vertex " + v.to_string() + " is outside the explicit universe");
  return it->second;
}

bool ExplicitDigraph::contains(const VertexId& v) const { return in_.count(v) > 0; }

std::string ExplicitDigraph::describe() const {
  return "explicit(V=" + std::to_string(vertices_.size()) + ",E=" + std::to_string(edge_count_) +
         ")";
}

// ---------------------------------------------------------------------------

ShiftExtensionDigraph::ShiftExtensionDigraph(DigraphPtr base) : base_(std::move(base)) {}

std::vector<VertexId> ShiftExtensionDigraph::in_neighbors(const VertexId& v) const {
  const VertexId b = v.truncated();
  const std::int64_t n = v[v.arity() - 1];
  std::vector<VertexId> out;
  for (const auto& u : base_->in_neighbors(b)) out.push_back(u.appended(n));
  out.push_back(b.appended(n + 1));
  return out;
}

std::vector<VertexId> ShiftExtensionDigraph::out_neighbors(const VertexId& v) const {
  const VertexId b = v.truncated();
  const std::int64_t n = v[v.arity() - 1];
  std::vector<VertexId> out;
  for (const auto& u : base_->out_neighbors(b)) out.push_back(u.appended(n));
  out.push_back(b.appended(n - 1));
  return out;
}

bool ShiftExtensionDigraph::contains(const VertexId& v) const {
  return v.arity() >= 2 && base_->contains(v.truncated());
}

// ---------------------------------------------------------------------------

std::shared_ptr<const LatticeDigraph> cayley_zd(int d) { return cayley_zdne(d, 0); }

std::shared_ptr<const LatticeDigraph> cayley_zdne(int d, int e) {
  const int n = d + e;
  std::vector<std::vector<std::int64_t>> offsets;
  for (int i = 0; i < n; ++i) {
    std::vector<std::int64_t> o(n, 0);
    o[i] = 1;
    offsets.push_back(o);
    if (i < d) {
      o[i] = -1;
      offsets.push_back(o);
    }
  }
  std::string name = e == 0 ? "cayley_zd(D=" + std::to_string(d) + ")"
                            : "cayley_zdne(D=" + std::to_string(d) + ",E=" + std::to_string(e) + ")";
  return std::make_shared<LatticeDigraph>(d, e, std::move(offsets), std::move(name));
}

std::shared_ptr<const LatticeDigraph> unit_shift_graph(int d, int e) {
  std::vector<std::int64_t> o(d + e, 0);
  o[0] = 1;
  return std::make_shared<LatticeDigraph>(
      d, e, std::vector<std::vector<std::int64_t>>{o},
      "unit_shift(D=" + std::to_string(d) + ",E=" + std::to_string(e) + ")");
}

DigraphPtr odometer_graph() { return std::make_shared<OdometerDigraph>(); }
DigraphPtr shortcut_graph() { return std::make_shared<ShortcutDigraph>(); }
DigraphPtr counterexample_graph() { return std::make_shared<CexDigraph>(); }
DigraphPtr explicit_graph(std::vector<std::pair<VertexId, VertexId>> edges) {
  return std::make_shared<ExplicitDigraph>(std::move(edges));
}

}  // namespace symdyn
