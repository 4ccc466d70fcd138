#pragma once

#include <cstddef>
#include <functional>

namespace hopf {

/// Worker count: HOPF_TWISTOR_THREADS if set to a positive integer, else
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(i) for every i in [0, count). Indices are claimed from a
/// shared counter by up to worker_count() threads; callers write results
/// into slot i so the outcome does not depend on scheduling. The first
/// exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hopf
