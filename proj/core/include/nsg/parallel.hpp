#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace nsg {

/// Worker count used when a caller passes 0.
unsigned default_threads();

/// Splits [0, count) into contiguous chunks and runs `body(begin, end)` on up
/// to `threads` workers. Callers write results into per-index slots so the
/// outcome does not depend on the thread count.
void parallel_for(std::uint64_t count, unsigned threads,
                  const std::function<void(std::uint64_t, std::uint64_t)>& body);

}  // namespace nsg
