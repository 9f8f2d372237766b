#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace daybt::par {

// Process-wide switch between the OpenMP path and the serial reference path.
// Both paths perform the same floating-point operations in the same order
// per work item, so results are bit-identical either way; the switch exists
// for testing that contract and for benchmarking.
bool enabled();
void set_enabled(bool on);

int max_threads();

// Static-scheduled parallel loop over [0, n). The body must only write state
// owned by its own index.
template <typename Body>
void parallel_for(std::size_t n, const Body& body) {
#ifdef _OPENMP
    if (enabled() && n > 1) {
        const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

} // namespace daybt::par
