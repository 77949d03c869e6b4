#include "mbm/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mbm/distance.hpp"
#include "mbm/errors.hpp"
#include "mbm/rng.hpp"

namespace mbm {

void PerturbationSchedule::validate() const {
    if (!(initial_radius > 0.0) || !std::isfinite(initial_radius))
        throw ParameterError("initial_radius must be positive and finite");
    if (!(decay_factor > 0.0) || decay_factor > 1.0)
        throw ParameterError("decay_factor must be in (0, 1]");
    if (decay_every < 1) throw ParameterError("decay_every must be >= 1");
    if (!(min_radius > 0.0) || min_radius > initial_radius)
        throw ParameterError("min_radius must be in (0, initial_radius]");
    if (max_trials < 0) throw ParameterError("max_trials must be >= 0");
    if (stall_limit < 1) throw ParameterError("stall_limit must be >= 1");
}

OptimizationTrace optimize_weights(const Constellation& c,
                                   const PerturbationSchedule& sched,
                                   std::uint64_t seed) {
    c.validate();
    sched.validate();
    if (c.provenance != Provenance::open_loop_draw)
        throw ParameterError("weight optimization starts from an open-loop draw");

    const std::size_t m = c.points.size();
    const double target_power = static_cast<double>(m);

    std::vector<cplx> weights(m, cplx{1.0, 0.0});
    std::vector<cplx> shaped(c.points.begin(), c.points.end());
    double incumbent = min_distance(shaped);

    OptimizationTrace trace;
    trace.initial_dmin = incumbent;
    trace.iterations.reserve(static_cast<std::size_t>(std::min<long>(sched.max_trials, 1 << 20)));

    Rng rng(seed);
    std::vector<cplx> candidate(m);
    double radius = sched.initial_radius;
    long accepted = 0;
    long rejects_in_row = 0;

    for (long trial = 1; trial <= sched.max_trials; ++trial) {
        const std::size_t idx = static_cast<std::size_t>(rng.below(m));
        const cplx delta = rng.uniform_disk(radius);

        std::copy(weights.begin(), weights.end(), candidate.begin());
        candidate[idx] += delta;
        double power = 0.0;
        for (const auto& w : candidate) power += std::norm(w);
        const double alpha = std::sqrt(target_power / power);
        if (!std::isfinite(alpha))
            throw NumericError("non-finite power normalization at trial " + std::to_string(trial));
        for (std::size_t i = 0; i < m; ++i) {
            candidate[i] *= alpha;
            shaped[i] = candidate[i] * c.points[i];
        }

        const double d = min_distance(shaped);
        if (!std::isfinite(d))
            throw NumericError("non-finite distance at trial " + std::to_string(trial));

        const bool accept = d > incumbent;
        trace.iterations.push_back({trial, accept, d});
        if (accept) {
            weights.swap(candidate);
            incumbent = d;
            rejects_in_row = 0;
            if (++accepted % sched.decay_every == 0)
                radius = std::max(sched.min_radius, radius * sched.decay_factor);
        } else if (++rejects_in_row >= sched.stall_limit) {
            break;
        }
    }

    trace.final_dmin = incumbent;
    trace.final_weights.k = c.k;
    trace.final_weights.weights = std::move(weights);
    trace.final_weights.validate();
    return trace;
}

OptimizationTrace optimize_weights_multistart(const Constellation& c,
                                              const PerturbationSchedule& sched,
                                              std::uint64_t seed, int starts) {
    if (starts < 1) throw ParameterError("starts must be >= 1");
    OptimizationTrace best;
    for (int s = 0; s < starts; ++s) {
        OptimizationTrace t = optimize_weights(c, sched, derive_stream(seed, static_cast<std::uint64_t>(s)));
        if (s == 0 || t.final_dmin > best.final_dmin) best = std::move(t);
    }
    return best;
}

BitMapping BitMapping::natural(int k) {
    BitMapping m;
    m.k = k;
    m.label_of.resize(std::size_t{1} << k);
    std::iota(m.label_of.begin(), m.label_of.end(), 0u);
    return m;
}

bool BitMapping::is_permutation() const {
    std::vector<bool> seen(label_of.size(), false);
    for (auto label : label_of) {
        if (label >= label_of.size() || seen[label]) return false;
        seen[label] = true;
    }
    return true;
}

void BitMapping::validate() const {
    if (k < 1 || k > k_max) throw ParameterError("mapping k out of range");
    if (label_of.size() != (std::size_t{1} << k))
        throw ParameterError("mapping must assign 2^k labels");
    if (!is_permutation())
        throw ParameterError("mapping labels are not a bijection");
}

std::vector<std::pair<std::size_t, std::size_t>> nearest_pairs(
    std::span<const cplx> points, std::size_t count) {
    const std::size_t n = points.size();
    if (n < 2) throw ParameterError("nearest pairs need at least 2 points");
    struct Entry {
        double sq;
        std::size_t i, j;
    };
    std::vector<Entry> entries;
    entries.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            entries.push_back({std::norm(points[i] - points[j]), i, j});
    count = std::min(count, entries.size());
    auto order = [](const Entry& a, const Entry& b) {
        return std::tie(a.sq, a.i, a.j) < std::tie(b.sq, b.i, b.j);
    };
    std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(count),
                      entries.end(), order);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(count);
    for (std::size_t p = 0; p < count; ++p) pairs.emplace_back(entries[p].i, entries[p].j);
    return pairs;
}

long mapping_cost(const BitMapping& m,
                  std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    long cost = 0;
    for (const auto& [i, j] : pairs)
        cost += std::popcount(m.label_of[i] ^ m.label_of[j]);
    return cost;
}

MappingTrace optimize_bit_mapping(const Constellation& c,
                                  const PerturbationSchedule& sched,
                                  std::uint64_t seed) {
    c.validate();
    sched.validate();
    const std::size_t m = c.points.size();
    const std::size_t total_pairs = m * (m - 1) / 2;
    const auto pairs = nearest_pairs(c.points, std::min(m, total_pairs));

    MappingTrace trace;
    trace.mapping = BitMapping::natural(c.k);
    long cost = mapping_cost(trace.mapping, pairs);
    trace.initial_cost = cost;

    Rng rng(seed);
    long rejects_in_row = 0;
    auto& labels = trace.mapping.label_of;

    for (long trial = 1; trial <= sched.max_trials; ++trial) {
        // Two distinct indices, uniform over all ordered pairs.
        const std::size_t a = static_cast<std::size_t>(rng.below(m));
        std::size_t b = static_cast<std::size_t>(rng.below(m - 1));
        if (b >= a) ++b;

        std::swap(labels[a], labels[b]);
        const long candidate = mapping_cost(trace.mapping, pairs);
        const bool accept = candidate < cost;
        trace.iterations.push_back({trial, accept, static_cast<double>(candidate)});
        if (accept) {
            cost = candidate;
            rejects_in_row = 0;
        } else {
            std::swap(labels[a], labels[b]);
            if (++rejects_in_row >= sched.stall_limit) break;
        }
    }

    trace.final_cost = cost;
    return trace;
}

}  // namespace mbm
