#pragma once

#include <functional>

namespace gridnav::parallel {

/// Worker-thread count used by the row-parallel grid loops. Results are
/// bit-identical for any count: rows are partitioned into contiguous,
/// disjoint chunks and no kernel reassociates arithmetic across rows.
void set_threads(int n);
int threads();

/// Runs fn(begin, end) over a static partition of [0, count) rows.
void for_rows(int count, const std::function<void(int, int)>& fn);

}  // namespace gridnav::parallel
