#pragma once

#include <span>

namespace billiards {

// 0 selects the OpenMP default team size.
int resolve_workers(int requested);

// Fixed-tree pairwise summation: the association order depends only on the
// length of the input, never on how the values were produced.
double pairwise_sum(std::span<const double> values);

}  // namespace billiards
