#pragma once

namespace sc {

// Sets the OpenMP thread count used by the parallel kernels.
// n <= 0 restores the runtime default (all available cores).
void set_worker_count(int n);

// Thread count the next parallel region will use.
int worker_count();

}  // namespace sc
