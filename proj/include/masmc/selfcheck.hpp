#pragma once

#include <ostream>

namespace masmc {

// Fast invariant sweep: share round-trips, seal round-trips and tamper
// detection, all-honest correctness over random scenarios, the
// inclusion-exclusion identity, and a determinism double-run. Prints one
// PASS/FAIL line per group; returns the number of failing groups.
int run_selfcheck(std::ostream& out);

} // namespace masmc
