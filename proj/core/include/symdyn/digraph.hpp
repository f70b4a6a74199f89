#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "symdyn/vertex.hpp"

namespace symdyn {

// A countable digraph given by lazy neighbour enumeration. The edge relation
// reads "v ->• w iff v is an input of w", so in_neighbors(w) lists the cells
// that feed w. in_neighbors must be finite for every vertex; out_neighbors is
// optional because some networks (the odometer) have infinite out-degree.
class Digraph {
 public:
  virtual ~Digraph() = default;

  virtual std::vector<VertexId> in_neighbors(const VertexId& v) const = 0;

  virtual bool has_out_neighbors() const { return false; }
  // Throws MissingOutNeighbors unless has_out_neighbors().
  virtual std::vector<VertexId> out_neighbors(const VertexId& v) const;

  // Universe membership.
  virtual bool contains(const VertexId& v) const = 0;

  // Family name plus parameters, e.g. "cayley_zd(D=2)".
  virtual std::string describe() const = 0;

  bool has_edge(const VertexId& from, const VertexId& to) const;
};

using DigraphPtr = std::shared_ptr<const Digraph>;

// Z^D x N^E with in_neighbors(w) = { w + o : o in offsets } restricted to the
// nonnegative orthant on the last E axes.
class LatticeDigraph final : public Digraph {
 public:
  LatticeDigraph(int d, int e, std::vector<std::vector<std::int64_t>> offsets, std::string name);

  std::vector<VertexId> in_neighbors(const VertexId& v) const override;
  bool has_out_neighbors() const override { return true; }
  std::vector<VertexId> out_neighbors(const VertexId& v) const override;
  bool contains(const VertexId& v) const override;
  std::string describe() const override { return name_; }

  int dims() const { return d_ + e_; }
  const std::vector<std::vector<std::int64_t>>& offsets() const { return offsets_; }
  VertexId origin() const;

 private:
  bool in_orthant(const VertexId& v) const;
  VertexId shifted(const VertexId& v, const std::vector<std::int64_t>& o, int sign) const;

  int d_;
  int e_;
  std::vector<std::vector<std::int64_t>> offsets_;
  std::string name_;
};

// Network of the m-ary odometer on N: in_neighbors(n) = [0..n].
class OdometerDigraph final : public Digraph {
 public:
  std::vector<VertexId> in_neighbors(const VertexId& v) const override;
  bool contains(const VertexId& v) const override;
  std::string describe() const override { return "odometer"; }
};

// Z x N with (z,n) ->• (z,n±1) and (z,n) ->• (z+2^n,n). Translation along z
// by one is a subisometry of speed zero.
class ShortcutDigraph final : public Digraph {
 public:
  static constexpr std::int64_t kMaxLevel = 60;

  std::vector<VertexId> in_neighbors(const VertexId& v) const override;
  bool has_out_neighbors() const override { return true; }
  std::vector<VertexId> out_neighbors(const VertexId& v) const override;
  bool contains(const VertexId& v) const override;
  std::string describe() const override { return "shortcut"; }
};

// The expansive two-dimensional network on N: circles copy their successor,
// the box at m_k = k(k+1) reads m_k + 1 and m_{k+1}.
class CexDigraph final : public Digraph {
 public:
  std::vector<VertexId> in_neighbors(const VertexId& v) const override;
  bool has_out_neighbors() const override { return true; }
  std::vector<VertexId> out_neighbors(const VertexId& v) const override;
  bool contains(const VertexId& v) const override;
  std::string describe() const override { return "counterexample"; }
};

// Finite digraph from an explicit edge list; each edge (v, w) means v ->• w.
class ExplicitDigraph final : public Digraph {
 public:
  explicit ExplicitDigraph(std::vector<std::pair<VertexId, VertexId>> edges,
                           std::vector<VertexId> extra_vertices = {});

  std::vector<VertexId> in_neighbors(const VertexId& v) const override;
  bool has_out_neighbors() const override { return true; }
  std::vector<VertexId> out_neighbors(const VertexId& v) const override;
  bool contains(const VertexId& v) const override;
  std::string describe() const override;

  const VertexSet& vertices() const { return vertices_; }

 private:
  VertexSet vertices_;
  VertexMap<std::vector<VertexId>> in_;
  VertexMap<std::vector<VertexId>> out_;
  std::size_t edge_count_ = 0;
};

// Lifts a base network to V x Z: (v,n) reads (u,n) for u in in(v) and (v,n+1).
class ShiftExtensionDigraph final : public Digraph {
 public:
  explicit ShiftExtensionDigraph(DigraphPtr base);

  std::vector<VertexId> in_neighbors(const VertexId& v) const override;
  bool has_out_neighbors() const override { return base_->has_out_neighbors(); }
  std::vector<VertexId> out_neighbors(const VertexId& v) const override;
  bool contains(const VertexId& v) const override;
  std::string describe() const override { return "shift_extension(" + base_->describe() + ")"; }

  const Digraph& base() const { return *base_; }

 private:
  DigraphPtr base_;
};

// Cayley digraph of Z^D with generators ±e_i.
std::shared_ptr<const LatticeDigraph> cayley_zd(int d);
// Z^D x N^E: ±e_i on the first D axes, +e_j on the last E axes.
std::shared_ptr<const LatticeDigraph> cayley_zdne(int d, int e);
// Network of the unit shift x -> (x_{v+1}) on Z^D x N^E along axis 0.
std::shared_ptr<const LatticeDigraph> unit_shift_graph(int d, int e);
DigraphPtr odometer_graph();
DigraphPtr shortcut_graph();
DigraphPtr counterexample_graph();
DigraphPtr explicit_graph(std::vector<std::pair<VertexId, VertexId>> edges);

// Box indices m_k = k(k+1).
std::int64_t box_index(std::int64_t k);
// k with m_k = n, or -1 when n is a circle.
std::int64_t box_rank(std::int64_t n);
bool is_box(std::int64_t n);

}  // namespace symdyn
