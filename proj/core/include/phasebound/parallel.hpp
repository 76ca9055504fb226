#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace phasebound {

/// 0 means std::thread::hardware_concurrency().
unsigned resolve_threads(unsigned requested);

/// Calls fn(i) for i in [0, n) on up to `threads` workers. The first
/// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Results are stored by index, so the output does not depend on scheduling.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned threads, F&& fn) {
    std::vector<T> out(n);
    parallel_for(n, threads, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

} // namespace phasebound
