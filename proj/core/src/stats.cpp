#include "mbm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbm/distance.hpp"
#include "mbm/errors.hpp"
#include "mbm/rng.hpp"

namespace mbm {

namespace {

constexpr std::uint64_t stream_constellation = 0;
constexpr std::uint64_t stream_optimizer = 1;

constexpr std::size_t ks_min_samples = 100;

}  // namespace

void Histogram::validate() const {
    if (edges.size() < 2) throw ParameterError("histogram needs at least 2 edges");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (!(edges[i] < edges[i + 1]))
            throw ParameterError("histogram edges must be strictly increasing");
    if (counts.size() != edges.size() - 1)
        throw ParameterError("histogram counts length must be edges length - 1");
    std::int64_t sum = 0;
    for (auto c : counts) {
        if (c < 0) throw ParameterError("histogram counts must be nonnegative");
        sum += c;
    }
    if (sum != total) throw ParameterError("histogram counts must sum to total");
}

double Histogram::density(std::size_t bin) const {
    if (bin >= counts.size()) throw ParameterError("histogram bin out of range");
    if (total == 0) return 0.0;
    const double width = edges[bin + 1] - edges[bin];
    return static_cast<double>(counts[bin]) / (static_cast<double>(total) * width);
}

std::vector<double> uniform_edges(double lo, double hi, int bins) {
    if (bins < 1) throw ParameterError("bins must be >= 1");
    if (!(lo < hi)) throw ParameterError("edge range must satisfy lo < hi");
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / bins;
    edges.front() = lo;
    edges.back() = hi;
    return edges;
}

Histogram histogram_from(std::span<const double> samples, std::vector<double> edges) {
    Histogram h;
    h.edges = std::move(edges);
    h.counts.assign(h.edges.size() - 1, 0);
    h.total = 0;
    // Bins are [e_i, e_{i+1}); the last bin also takes its right edge.
    // Samples outside the edge range are dropped entirely.
    for (double s : samples) {
        if (s < h.edges.front() || s > h.edges.back()) continue;
        auto it = std::upper_bound(h.edges.begin(), h.edges.end(), s);
        std::size_t bin = static_cast<std::size_t>(it - h.edges.begin());
        bin = (bin == 0) ? 0 : bin - 1;
        if (bin >= h.counts.size()) bin = h.counts.size() - 1;
        ++h.counts[bin];
        ++h.total;
    }
    h.validate();
    return h;
}

std::vector<double> sample_dmin_values(int k, std::int64_t draws, std::uint64_t seed,
                                       DminMode mode, const PerturbationSchedule& sched) {
    if (draws < 1) throw ParameterError("draws must be >= 1");
    const std::uint64_t const_base = derive_stream(seed, stream_constellation);
    const std::uint64_t opt_base = derive_stream(seed, stream_optimizer);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(draws));
    for (std::int64_t d = 0; d < draws; ++d) {
        const Constellation c = draw_open_loop(k, derive_stream(const_base, static_cast<std::uint64_t>(d)));
        if (mode == DminMode::open_loop) {
            values.push_back(min_distance(c.points));
        } else {
            const OptimizationTrace t =
                optimize_weights(c, sched, derive_stream(opt_base, static_cast<std::uint64_t>(d)));
            values.push_back(t.final_dmin);
        }
    }
    return values;
}

std::vector<double> sample_paired_min_values(int k, std::int64_t draws, std::uint64_t seed) {
    if (draws < 1) throw ParameterError("draws must be >= 1");
    const std::uint64_t const_base = derive_stream(seed, stream_constellation);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(draws));
    for (std::int64_t d = 0; d < draws; ++d) {
        const Constellation c = draw_open_loop(k, derive_stream(const_base, static_cast<std::uint64_t>(d)));
        values.push_back(paired_min_distance(c.points));
    }
    return values;
}

Histogram sample_dmin_distribution(int k, std::int64_t draws, std::uint64_t seed,
                                   DminMode mode, int bins,
                                   const PerturbationSchedule& sched) {
    const std::vector<double> values = sample_dmin_values(k, draws, seed, mode, sched);
    double hi = std::ceil(*std::max_element(values.begin(), values.end()));
    if (!(hi > 0.0)) hi = 1.0;
    return histogram_from(values, uniform_edges(0.0, hi, bins));
}

double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf) {
    if (samples.size() < ks_min_samples)
        throw ParameterError("KS statistic needs at least " + std::to_string(ks_min_samples) +
                             " samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        sup = std::max(sup, f - static_cast<double>(i) / n);
        sup = std::max(sup, static_cast<double>(i + 1) / n - f);
    }
    return sup;
}

double ks_statistic(const Histogram& h, const std::function<double(double)>& cdf) {
    h.validate();
    if (h.total < static_cast<std::int64_t>(ks_min_samples))
        throw ParameterError("KS statistic needs at least " + std::to_string(ks_min_samples) +
                             " samples");
    double sup = std::abs(cdf(h.edges.front()));
    std::int64_t cum = 0;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        cum += h.counts[b];
        const double ecdf = static_cast<double>(cum) / static_cast<double>(h.total);
        sup = std::max(sup, std::abs(ecdf - cdf(h.edges[b + 1])));
    }
    return sup;
}

}  // namespace mbm
