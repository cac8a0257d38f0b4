#pragma once

#include <cstddef>
#include <functional>

namespace qit {

// Runs body(k) for k in [0, count) on up to `threads` workers (0 = hardware
// concurrency). Each index is written by exactly one worker, so results never
// depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace qit
