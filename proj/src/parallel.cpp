#include "billiards/parallel.hpp"

#include <omp.h>

namespace billiards {

int resolve_workers(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kLeaf = 64;
    if (values.size() <= kLeaf) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace billiards
