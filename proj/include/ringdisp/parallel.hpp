#pragma once

#include <cstddef>
#include <functional>

namespace ringdisp {

/// Worker count from RINGDISP_WORKERS, else the hardware concurrency (at least 1).
unsigned workerCount();

/// Runs body(i) for i in [0, count) on `workers` threads. Each index runs exactly once;
/// callers write results into slot i so the output order does not depend on scheduling.
void parallelFor(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace ringdisp
