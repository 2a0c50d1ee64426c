#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace posmod {

/// Worker count used by the analysis routines; 1 by default.
int parallelism();
void set_parallelism(int jobs);

/// Runs body(i) for i in [0, n). Work is handed out in index order; callers
/// write results into per-index slots so the outcome does not depend on the
/// worker count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace posmod
