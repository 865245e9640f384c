#pragma once

#include <cstddef>
#include <functional>

namespace pi_forge {

/// Worker count: PI_FORGE_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t thread_budget();

/// Runs body(i) for i in [0, count) on up to thread_budget() threads. Each
/// index runs exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace pi_forge
