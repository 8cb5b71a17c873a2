#pragma once

#include <cstddef>
#include <functional>

namespace rmtlab {

// Run fn(i) for i in [0, count) across up to `threads` workers. Work items are
// handed out through an atomic counter; results must be written to
// index-addressed slots so the outcome is independent of scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

int hardware_threads();

}  // namespace rmtlab
