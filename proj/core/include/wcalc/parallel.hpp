#pragma once

#include <functional>
#include <span>
#include <vector>

namespace wcalc {

/// Worker cap: min(hardware threads, WF_THREADS when set). At least 1.
int worker_count();

/// Runs body(0..n-1) across workers. Bodies must write to disjoint slots;
/// results are then reduced sequentially so the outcome does not depend on
/// the thread count.
void parallel_for(int n, const std::function<void(int)>& body);

/// Deterministic pairwise (cascade) summation.
double pairwise_sum(std::span<const double> xs);

}  // namespace wcalc
