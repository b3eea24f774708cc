#pragma once

#include <cstddef>
#include <functional>

namespace tvgl {

/// Caps the number of worker threads used by parallel_for.
/// 0 restores the default (hardware concurrency).
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs fn(i) for every i in [0, count), splitting the range into
/// contiguous blocks across workers. fn must be safe to call concurrently
/// for distinct i; results must not depend on execution order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace tvgl
