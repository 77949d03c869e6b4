#include "mbm/distance.hpp"

#include <cmath>
#include <limits>

#include "mbm/errors.hpp"

namespace mbm {

DistanceReport min_pairwise_distance(std::span<const cplx> points) {
    const std::size_t n = points.size();
    if (n < 2) throw ParameterError("minimum distance needs at least 2 points");
    DistanceReport report;
    report.all_pairs_count = n * (n - 1) / 2;
    double best_sq = std::numeric_limits<double>::infinity();
    // Strict < keeps the lexicographically lowest (i, j) on ties.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double sq = std::norm(points[i] - points[j]);
            if (sq < best_sq) {
                best_sq = sq;
                report.argmin_pair = {i, j};
            }
        }
    }
    report.d_min = std::sqrt(best_sq);
    return report;
}

DistanceReport min_pairwise_distance(const Constellation& c) {
    c.validate();
    return min_pairwise_distance(std::span<const cplx>(c.points));
}

double min_distance(std::span<const cplx> points) {
    const std::size_t n = points.size();
    if (n < 2) throw ParameterError("minimum distance needs at least 2 points");
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            best_sq = std::min(best_sq, std::norm(points[i] - points[j]));
    return std::sqrt(best_sq);
}

double paired_min_distance(std::span<const cplx> points) {
    const std::size_t n = points.size();
    if (n < 2 || n % 2 != 0)
        throw ParameterError("paired statistic needs an even point count >= 2");
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; i += 2)
        best_sq = std::min(best_sq, std::norm(points[i] - points[i + 1]));
    return std::sqrt(best_sq);
}

double paired_min_distance(const Constellation& c) {
    c.validate();
    return paired_min_distance(std::span<const cplx>(c.points));
}

}  // namespace mbm
