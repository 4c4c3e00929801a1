#pragma once

#include <cstddef>
#include <functional>

namespace bindiag {

/// Sets the worker count used by every parallel section. 0 selects all cores.
void setThreadCount(int threads);
int threadCount();

/// Runs body(i) for i in [0, n). Each index must write only to its own
/// output slot so results do not depend on scheduling.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bindiag
