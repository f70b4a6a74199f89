#include "eval_plan.hpp"

#include <algorithm>
#include <map>

#include "symdyn/error.hpp"

namespace symdyn::detail {

EvalPlan compile_plan(const SymbolicSystem& sys, const VertexSet& W, int T) {
  const LightCone lc = light_cone(sys, W, T);
  EvalPlan plan;
  plan.alphabet = sys.alphabet();
  plan.horizon = T;
  for (int b = 0; b < 7; ++b)
    if ((1 << b) == plan.alphabet) plan.alphabet_shift = b;
  plan.window = lc.window;

  VertexMap<int> min_depth;
  for (int t = 0; t <= T; ++t)
    for (const auto& u : lc.layers[t]) min_depth.emplace(u, t);

  plan.cells.assign(lc.cone.begin(), lc.cone.end());
  std::stable_sort(plan.cells.begin(), plan.cells.end(), [&](const VertexId& a, const VertexId& b) {
    const int da = min_depth.at(a), db = min_depth.at(b);
    if (da != db) return da > db;
    return b < a;
  });
  VertexMap<std::uint32_t> cell_index;
  for (std::uint32_t i = 0; i < plan.cells.size(); ++i) {
    cell_index[plan.cells[i]] = i;
    plan.depth.push_back(min_depth.at(plan.cells[i]));
  }

  // entry_of[s][cell] for cells alive at time s.
  std::vector<std::map<std::uint32_t, std::uint32_t>> entry_of(T + 1);
  for (int s = 0; s <= T; ++s) {
    for (std::uint32_t i = 0; i < plan.cells.size(); ++i) {
      if (plan.depth[i] > T - s) continue;
      EvalPlan::Entry en;
      en.cell = i;
      en.time = static_cast<std::uint32_t>(s);
      const auto idx = static_cast<std::uint32_t>(plan.entries.size());
      if (s > 0) {
        const LocalRule& rule = sys.rule_at(plan.cells[i]);
        en.rule = &rule;
        if (rule.tabulated()) en.table = rule.table.data();
        en.in_begin = static_cast<std::uint32_t>(plan.inputs.size());
        en.in_count = static_cast<std::uint32_t>(rule.inputs.size());
        for (const auto& u : rule.inputs) plan.inputs.push_back(entry_of[s - 1].at(cell_index.at(u)));
      } else {
        plan.base.push_back(idx);
      }
      entry_of[s][i] = idx;
      plan.entries.push_back(en);
    }
  }
  for (int s = 0; s <= T; ++s)
    for (const auto& w : plan.window) plan.observed.push_back(entry_of[s].at(cell_index.at(w)));
  return plan;
}

std::vector<std::vector<std::uint32_t>> EvalPlan::downstream() const {
  const std::size_t n = entries.size();
  std::vector<std::vector<std::uint32_t>> users(n);
  for (std::uint32_t e = 0; e < n; ++e)
    for (std::uint32_t k = 0; k < entries[e].in_count; ++k) users[inputs[entries[e].in_begin + k]].push_back(e);

  std::vector<std::vector<std::uint32_t>> out(cells.size());
  std::vector<char> mark(n, 0);
  std::vector<std::uint32_t> stack;
  for (std::size_t d = 0; d < cells.size(); ++d) {
    std::fill(mark.begin(), mark.end(), 0);
    stack.push_back(base[d]);
    while (!stack.empty()) {
      const auto e = stack.back();
      stack.pop_back();
      for (auto u : users[e])
        if (!mark[u]) {
          mark[u] = 1;
          stack.push_back(u);
        }
    }
    for (std::uint32_t e = 0; e < n; ++e)
      if (mark[e]) out[d].push_back(e);
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> EvalPlan::cumulative_affected(const std::vector<std::uint32_t>& order) const {
  const auto down = downstream();
  std::vector<std::vector<std::uint32_t>> cum;
  std::vector<char> mark(entries.size(), 0);
  for (auto d : order) {
    for (auto e : down[d]) mark[e] = 1;
    std::vector<std::uint32_t> list;
    for (std::uint32_t e = 0; e < entries.size(); ++e)
      if (mark[e]) list.push_back(e);
    cum.push_back(std::move(list));
  }
  return cum;
}

}  // namespace symdyn::detail
