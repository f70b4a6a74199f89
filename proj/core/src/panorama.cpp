#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "eval_plan.hpp"
#include "symdyn/error.hpp"
#include "symdyn/parallel.hpp"
#include "symdyn/symsys.hpp"

namespace symdyn {

namespace {

// For each observed trajectory: the first pattern that produced it and the OR
// of (pattern XOR first) over all later ones. A cell is determined iff its bit
// field is clear in every mask.
struct Slot {
  std::uint64_t first = 0;
  std::uint64_t mask = 0;
};

constexpr int kDenseKeyBits = 20;

class KeyTable {
 public:
  explicit KeyTable(int key_bits) : dense_(key_bits <= kDenseKeyBits), wide_(key_bits > 64) {
    if (dense_) {
      slots_.resize(std::size_t{1} << key_bits);
      used_.resize(std::size_t{1} << key_bits, 0);
    }
  }

  void record_narrow(std::uint64_t key, std::uint64_t pattern) {
    if (dense_) {
      if (!used_[key]) {
        used_[key] = 1;
        slots_[key].first = pattern;
      } else {
        slots_[key].mask |= pattern ^ slots_[key].first;
      }
      return;
    }
    auto [it, fresh] = narrow_.try_emplace(key, Slot{pattern, 0});
    if (!fresh) it->second.mask |= pattern ^ it->second.first;
  }

  void record_wide(const std::string& key, std::uint64_t pattern) {
    auto [it, fresh] = wide_map_.try_emplace(key, Slot{pattern, 0});
    if (!fresh) it->second.mask |= pattern ^ it->second.first;
  }

  bool wide() const { return wide_; }

  void merge_from(const KeyTable& o) {
    auto fold = [](Slot& into, const Slot& s) { into.mask |= s.mask | (s.first ^ into.first); };
    if (dense_) {
      for (std::size_t k = 0; k < slots_.size(); ++k) {
        if (!o.used_[k]) continue;
        if (!used_[k]) {
          used_[k] = 1;
          slots_[k] = o.slots_[k];
        } else {
          fold(slots_[k], o.slots_[k]);
        }
      }
    } else if (!wide_) {
      for (const auto& [k, s] : o.narrow_) {
        auto [it, fresh] = narrow_.try_emplace(k, s);
        if (!fresh) fold(it->second, s);
      }
    } else {
      for (const auto& [k, s] : o.wide_map_) {
        auto [it, fresh] = wide_map_.try_emplace(k, s);
        if (!fresh) fold(it->second, s);
      }
    }
  }

  std::uint64_t combined_mask() const {
    std::uint64_t m = 0;
    if (dense_) {
      for (std::size_t k = 0; k < slots_.size(); ++k)
        if (used_[k]) m |= slots_[k].mask;
    }
    for (const auto& [_, s] : narrow_) m |= s.mask;
    for (const auto& [_, s] : wide_map_) m |= s.mask;
    return m;
  }

 private:
  bool dense_;
  bool wide_;
  std::vector<Slot> slots_;
  std::vector<std::uint8_t> used_;
  std::unordered_map<std::uint64_t, Slot> narrow_;
  std::unordered_map<std::string, Slot> wide_map_;
};

int bits_for(std::size_t values) {
  int b = 0;
  while ((std::size_t{1} << b) < values) ++b;
  return b;
}

// One recomputation step with its inputs resolved to value slots. Arity 1
// and 2 tabulated rules over power-of-two alphabets take the fast path.
struct Op {
  const Symbol* table = nullptr;
  std::uint32_t out = 0;
  std::uint32_t in0 = 0;
  std::uint32_t in1 = 0;
  std::uint8_t arity = 0;
  bool generic = false;
  // Bit offset of this entry in the trajectory key, or -1.
  int key_pos = -1;
};

struct Enumeration {
  const detail::EvalPlan* plan = nullptr;
  // Digit i enumerates plan cell order[i]; digit 0 is the fastest.
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> base_entry;
  std::vector<std::vector<Symbol>> choices;
  std::vector<int> shift;
  std::vector<std::vector<Op>> affected;
  // Key offset of each digit's base entry, or -1.
  std::vector<int> base_key_pos;
  int sym_bits = 1;
  int key_bits = 0;
  int alphabet_shift = -1;
};

void compile_ops(Enumeration& en) {
  const detail::EvalPlan& plan = *en.plan;
  std::vector<int> key_pos(plan.entries.size(), -1);
  const std::size_t obs_n = plan.observed.size();
  for (std::size_t k = 0; k < obs_n; ++k)
    key_pos[plan.observed[k]] = static_cast<int>((obs_n - 1 - k) * en.sym_bits);
  for (auto b : en.base_entry) en.base_key_pos.push_back(key_pos[b]);
  for (const auto& list : plan.cumulative_affected(en.order)) {
    std::vector<Op> ops;
    for (auto e : list) {
      const auto& entry = plan.entries[e];
      Op op;
      op.out = e;
      op.key_pos = key_pos[e];
      op.table = entry.table;
      op.arity = static_cast<std::uint8_t>(entry.in_count);
      op.generic = entry.table == nullptr || en.alphabet_shift < 0 || entry.in_count < 1 || entry.in_count > 2;
      if (entry.in_count >= 1) op.in0 = plan.inputs[entry.in_begin];
      if (entry.in_count >= 2) op.in1 = plan.inputs[entry.in_begin + 1];
      ops.push_back(op);
    }
    en.affected.push_back(std::move(ops));
  }
}

inline void set_key(std::uint64_t& key, int pos, int sym_bits, Symbol v) {
  const std::uint64_t field = ((std::uint64_t{1} << sym_bits) - 1) << pos;
  key = (key & ~field) | (static_cast<std::uint64_t>(v) << pos);
}

// Enumerates every pattern whose slowest digit equals `top`, calling
// record(vals, key, pattern). The key is maintained incrementally and is
// only meaningful for narrow tables.
template <class Record>
void enumerate_with(const Enumeration& en, std::size_t top, Record&& record) {
  const detail::EvalPlan& plan = *en.plan;
  const std::size_t n = en.choices.size();
  const int sym_bits = en.sym_bits;
  const int ashift = en.alphabet_shift;
  const bool narrow = en.key_bits <= 64;
  std::vector<Symbol> vals(plan.entries.size(), 0);
  std::vector<std::size_t> digit(n, 0);
  digit[n - 1] = top;
  std::uint64_t pattern = static_cast<std::uint64_t>(top) << en.shift[n - 1];
  for (std::size_t i = 0; i < n; ++i) vals[en.base_entry[i]] = en.choices[i][digit[i]];
  plan.run_all(vals);
  std::uint64_t key = 0;
  if (narrow)
    for (std::uint32_t o : plan.observed) key = (key << sym_bits) | vals[o];

  auto run = [&](const std::vector<Op>& ops) {
    Symbol* v = vals.data();
    for (const Op& op : ops) {
      if (op.generic) {
        plan.compute(vals, op.out);
      } else if (op.arity == 1) {
        v[op.out] = op.table[v[op.in0]];
      } else {
        v[op.out] = op.table[(static_cast<std::size_t>(v[op.in0]) << ashift) | v[op.in1]];
      }
      if (narrow && op.key_pos >= 0) set_key(key, op.key_pos, sym_bits, v[op.out]);
    }
  };
  auto set_base = [&](std::size_t i, Symbol s) {
    vals[en.base_entry[i]] = s;
    if (narrow && en.base_key_pos[i] >= 0) set_key(key, en.base_key_pos[i], sym_bits, s);
  };

  const std::size_t active = n - 1;
  if (active == 0) {
    record(vals, key, pattern);
    return;
  }
  // Digit 0 is swept in a tight inner loop; the carry logic only runs when
  // it wraps.
  const std::vector<Symbol>& inner = en.choices[0];
  const std::vector<Op>& inner_ops = en.affected[0];
  for (;;) {
    for (std::size_t c = 0; c < inner.size(); ++c) {
      if (c > 0) {
        set_base(0, inner[c]);
        run(inner_ops);
      }
      record(vals, key, pattern | c);
    }
    std::size_t j = 1;
    while (j < active && digit[j] + 1 == en.choices[j].size()) {
      digit[j] = 0;
      set_base(j, en.choices[j][0]);
      ++j;
    }
    if (j == active) break;
    ++digit[j];
    set_base(j, en.choices[j][digit[j]]);
    set_base(0, inner[0]);
    const std::uint64_t low = (std::uint64_t{1} << en.shift[j]) - 1;
    pattern = (pattern & ~low) + (std::uint64_t{1} << en.shift[j]);
    run(en.affected[j]);
  }
}

void enumerate_chunk(const Enumeration& en, std::size_t top, KeyTable& table) {
  if (table.wide()) {
    const std::uint32_t* obs = en.plan->observed.data();
    const std::size_t obs_n = en.plan->observed.size();
    std::string key(obs_n, '\0');
    enumerate_with(en, top, [&](const std::vector<Symbol>& vals, std::uint64_t, std::uint64_t pattern) {
      for (std::size_t k = 0; k < obs_n; ++k) key[k] = static_cast<char>(vals[obs[k]]);
      table.record_wide(key, pattern);
    });
  } else {
    enumerate_with(en, top, [&](const std::vector<Symbol>&, std::uint64_t key, std::uint64_t pattern) {
      table.record_narrow(key, pattern);
    });
  }
}

}  // namespace

VertexSet panorama_layer(const SymbolicSystem& sys, const PatternSpace& space, const VertexSet& W, int t,
                         std::uint64_t pattern_cap, std::uint64_t* patterns_enumerated) {
  if (space.alphabet() != sys.alphabet()) throw InvalidArgument("space and system alphabets differ");
  const detail::EvalPlan plan = detail::compile_plan(sys, W, t);

  Enumeration en;
  en.plan = &plan;
  // Cells feeding the fewest entries change fastest.
  {
    const auto down = plan.downstream();
    en.order.resize(plan.cells.size());
    for (std::uint32_t i = 0; i < en.order.size(); ++i) en.order[i] = i;
    std::stable_sort(en.order.begin(), en.order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return down[a].size() < down[b].size(); });
  }
  double log2_total = 0;
  int pattern_bits = 0;
  for (auto i : en.order) {
    en.base_entry.push_back(plan.base[i]);
    en.choices.push_back(space.allowed_symbols(plan.cells[i]));
    en.shift.push_back(pattern_bits);
    pattern_bits += bits_for(en.choices.back().size());
    log2_total += std::log2(static_cast<double>(en.choices.back().size()));
  }
  if (log2_total > std::log2(static_cast<double>(pattern_cap)) + 1e-9)
    throw CapExceeded("panorama enumeration at horizon " + std::to_string(t), log2_total);
  if (pattern_bits > 64) throw CapExceeded("panorama pattern packing (more than 64 bits)", log2_total);
  en.sym_bits = std::max(1, bits_for(static_cast<std::size_t>(sys.alphabet())));
  en.key_bits = en.sym_bits * static_cast<int>(plan.observed.size());
  en.alphabet_shift = plan.alphabet_shift;
  compile_ops(en);

  const std::size_t n = en.choices.size();
  const std::size_t chunks = en.choices[n - 1].size();
  std::vector<KeyTable> tables;
  tables.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) tables.emplace_back(en.key_bits);
  parallel_chunks(chunks, [&](std::size_t c) { enumerate_chunk(en, c, tables[c]); });
  for (std::size_t c = 1; c < chunks; ++c) tables[0].merge_from(tables[c]);
  const std::uint64_t mask = tables[0].combined_mask();

  if (patterns_enumerated) *patterns_enumerated += static_cast<std::uint64_t>(std::llround(std::exp2(log2_total)));

  VertexSet determined;
  for (std::size_t i = 0; i < n; ++i) {
    const int width = bits_for(en.choices[i].size());
    const std::uint64_t field = width == 0 ? 0 : (((std::uint64_t{1} << width) - 1) << en.shift[i]);
    if ((mask & field) == 0) determined.push_back(plan.cells[en.order[i]]);
  }
  std::sort(determined.begin(), determined.end());
  return determined;
}

PanoramaResult panorama(const SymbolicSystem& sys, const PatternSpace& space, const VertexSet& W, int T,
                        std::uint64_t pattern_cap) {
  if (T < 0) throw InvalidArgument("horizon must be >= 0");
  PanoramaResult res;
  res.window = make_set(W);
  res.horizon = T;
  res.cone = light_cone(sys, W, T).cone;
  for (int t = 0; t <= T; ++t)
    res.layers.push_back(panorama_layer(sys, space, W, t, pattern_cap, &res.patterns_enumerated));
  return res;
}

WindowCheck posexpansive_window_check(const SymbolicSystem& sys, const PatternSpace& space, const VertexSet& W,
                                      int T_max, const VertexSet& target, std::uint64_t pattern_cap) {
  WindowCheck res;
  const VertexSet goal = make_set(target);
  for (int t = 0; t <= T_max; ++t) {
    res.layers.push_back(panorama_layer(sys, space, W, t, pattern_cap));
    res.missing = set_difference(goal, res.layers.back());
    if (res.missing.empty()) {
      res.covered = true;
      res.first_T = t;
      return res;
    }
  }
  return res;
}

}  // namespace symdyn
