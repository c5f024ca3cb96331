#ifndef CURVED_PARALLEL_HPP
#define CURVED_PARALLEL_HPP

#include <functional>

namespace curved {

/// Worker cap for internal fan-out; reads CURVED_NBODY_THREADS (min 1),
/// falling back to the hardware count.
int max_threads();

/// Run fn(i) for i in [0, n) on up to max_threads() workers. Work items
/// must be independent; results should be written to pre-sized slots so
/// the outcome does not depend on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace curved

#endif
