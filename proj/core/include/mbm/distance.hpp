#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "mbm/constellation.hpp"

namespace mbm {

struct DistanceReport {
    double d_min = 0.0;
    std::pair<std::size_t, std::size_t> argmin_pair{0, 0};
    std::size_t all_pairs_count = 0;
};

// Exact minimum over all unordered point pairs. Ties resolve to the
// lexicographically lowest (i, j). Requires at least two points.
DistanceReport min_pairwise_distance(std::span<const cplx> points);
DistanceReport min_pairwise_distance(const Constellation& c);

// Objective used by the weight optimizer: d_min of a candidate point set.
double min_distance(std::span<const cplx> points);

// Surrogate statistic: minimum over the disjoint pairs (0,1), (2,3), ...
// only. These pair distances are mutually independent for i.i.d. states,
// which is what makes the closed-form distribution tractable.
double paired_min_distance(std::span<const cplx> points);
double paired_min_distance(const Constellation& c);

}  // namespace mbm
