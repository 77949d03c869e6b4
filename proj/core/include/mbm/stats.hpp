#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mbm/constellation.hpp"
#include "mbm/optimizer.hpp"

namespace mbm {

struct Histogram {
    std::vector<double> edges;          // strictly increasing, counts.size() + 1
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;             // includes out-of-range samples

    void validate() const;
    double density(std::size_t bin) const;  // counts[bin] / (total * width)
};

std::vector<double> uniform_edges(double lo, double hi, int bins);

// Bins samples into the given edges; samples outside [front, back) only
// count toward total.
Histogram histogram_from(std::span<const double> samples, std::vector<double> edges);

enum class DminMode { open_loop, closed_loop };

// d_min of `draws` independent open-loop constellations; closed_loop runs
// the weight optimizer on each draw first. Draw d uses substream d of
// `seed`, so values are reproducible bit-exactly and merging is order-free.
std::vector<double> sample_dmin_values(int k, std::int64_t draws, std::uint64_t seed,
                                       DminMode mode,
                                       const PerturbationSchedule& sched = {});

// The disjoint-pair surrogate statistic over independent draws.
std::vector<double> sample_paired_min_values(int k, std::int64_t draws,
                                             std::uint64_t seed);

// Default binning: `bins` uniform bins over [0, ceil(sample max)].
Histogram sample_dmin_distribution(int k, std::int64_t draws, std::uint64_t seed,
                                   DminMode mode, int bins = 100,
                                   const PerturbationSchedule& sched = {});

// Kolmogorov-Smirnov sup-distance between the empirical distribution and a
// closed-form cdf. Requires at least 100 samples.
double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf);

// Histogram variant, evaluated at bin edges (resolution-limited).
double ks_statistic(const Histogram& h, const std::function<double(double)>& cdf);

}  // namespace mbm
