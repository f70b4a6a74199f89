#pragma once

#include <cstdint>
#include <vector>

#include "symdyn/symsys.hpp"

namespace symdyn::detail {

// Flattened evaluation of Phi^0..Phi^T on the light cone of W. Entry (u, s)
// holds Phi^s(x)_u and exists iff u is within T - s layers of W, which is
// exactly what the window trajectory needs.
struct EvalPlan {
  struct Entry {
    std::uint32_t cell = 0;
    std::uint32_t time = 0;
    const LocalRule* rule = nullptr;
    // rule->table.data() when the rule is tabulated.
    const Symbol* table = nullptr;
    std::uint32_t in_begin = 0;
    std::uint32_t in_count = 0;
  };

  int alphabet = 2;
  // log2(alphabet) when it is a power of two, else -1.
  int alphabet_shift = -1;
  int horizon = 0;
  VertexSet window;
  // Cone cells.
  std::vector<VertexId> cells;
  std::vector<int> depth;
  std::vector<Entry> entries;
  std::vector<std::uint32_t> inputs;
  // entries index of (cells[i], 0).
  std::vector<std::uint32_t> base;
  // entries index of (window[j], s), s-major.
  std::vector<std::uint32_t> observed;

  void compute(std::vector<Symbol>& vals, std::uint32_t e) const {
    const Entry& en = entries[e];
    const std::uint32_t* in = inputs.data() + en.in_begin;
    if (en.table != nullptr) {
      std::size_t idx = 0;
      if (alphabet_shift >= 0) {
        for (std::uint32_t k = 0; k < en.in_count; ++k) idx = (idx << alphabet_shift) | vals[in[k]];
      } else {
        for (std::uint32_t k = 0; k < en.in_count; ++k) idx = idx * alphabet + vals[in[k]];
      }
      vals[e] = en.table[idx];
    } else {
      std::vector<Symbol> buf(en.in_count);
      for (std::uint32_t k = 0; k < en.in_count; ++k) buf[k] = vals[in[k]];
      vals[e] = en.rule->fn(buf);
    }
  }

  void run_all(std::vector<Symbol>& vals) const {
    for (std::uint32_t e = 0; e < entries.size(); ++e)
      if (entries[e].time > 0) compute(vals, e);
  }

  // Entries with time > 0 downstream of each cell's base entry, in
  // evaluation order.
  std::vector<std::vector<std::uint32_t>> downstream() const;
  // Entry j: everything downstream of cells order[0..j], in evaluation order.
  std::vector<std::vector<std::uint32_t>> cumulative_affected(const std::vector<std::uint32_t>& order) const;
};

// Cells are ordered deepest first, ties by id.
EvalPlan compile_plan(const SymbolicSystem& sys, const VertexSet& W, int T);

}  // namespace symdyn::detail
