#pragma once

#include <cstddef>
#include <functional>

namespace horndelta {

// Worker count from HORN_DELTA_WORKERS if set, else hardware concurrency.
unsigned default_worker_count();

// Dynamic scheduling over [0, n): workers pull blocks of items from a shared
// counter. fn(worker, index) must be safe to call concurrently for distinct
// indices. Deterministic results require the caller to aggregate
// order-insensitively (per-worker sinks merged by commutative ops).
void parallel_items(std::size_t n, unsigned workers,
                    const std::function<void(unsigned, std::size_t)>& fn);

// Static contiguous split of [0, n) into at most `workers` ranges;
// fn(worker, begin, end) once per range.
void parallel_ranges(std::size_t n, unsigned workers,
                     const std::function<void(unsigned, std::size_t, std::size_t)>& fn);

}  // namespace horndelta
