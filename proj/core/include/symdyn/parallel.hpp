#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace symdyn {

// Independent stream seed for item `index` of a run seeded with `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Worker count: SYMDYN_THREADS if set and positive, else 1.
unsigned worker_count();

// Runs fn(chunk) for chunk in [0, chunks) on up to worker_count() threads.
// Callers merge per-chunk results themselves, in chunk order, so the outcome
// does not depend on scheduling.
void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& fn);

}  // namespace symdyn
