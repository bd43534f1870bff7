#ifndef HDGRES_PARALLEL_HPP
#define HDGRES_PARALLEL_HPP

#include <functional>

namespace hdgres {

// Worker count from HDG_THREADS (0 or unset = hardware concurrency).
int worker_count();

// Runs fn(i) for i in [0, n). Work items must be independent; results must
// be written to disjoint, preallocated slots so the outcome is identical
// for any worker count.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace hdgres

#endif  // HDGRES_PARALLEL_HPP
