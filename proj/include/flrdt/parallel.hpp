#pragma once

#include <cstddef>
#include <functional>

namespace flrdt {

// Thread count from FLRDT_THREADS, else the hardware concurrency.
int default_threads();

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = default).
// Each index writes only its own output slot, so results never depend on the schedule.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int threads = 0);

} // namespace flrdt
