#pragma once

#include <cstddef>
#include <functional>

namespace bikerisk {

/// 0 means "one per hardware thread".
unsigned resolve_threads(unsigned requested);

/// Splits [0, count) into contiguous chunks and runs `body(begin, end)` on up
/// to `threads` workers. The first exception thrown by any chunk is rethrown.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace bikerisk
