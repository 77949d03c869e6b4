#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mbm/constellation.hpp"

namespace mbm {

// Controls the shrinking uniform-disk perturbation and both stop rules.
// Radius decays by decay_factor every decay_every *accepted* steps;
// rejected trials do not consume decay steps.
struct PerturbationSchedule {
    double initial_radius = 0.5;
    double decay_factor = 0.9;
    int decay_every = 50;
    double min_radius = 1e-4;
    long max_trials = 20000;
    long stall_limit = 3000;  // consecutive rejections before stopping

    void validate() const;
};

struct TrialRecord {
    long trial = 0;        // 1-based trial counter
    bool accepted = false;
    double d_value = 0.0;  // candidate objective at this trial
};

struct OptimizationTrace {
    std::vector<TrialRecord> iterations;
    WeightVector final_weights;
    double initial_dmin = 0.0;
    double final_dmin = 0.0;
};

// Max-min weight search: start from unit weights, perturb one uniformly
// chosen weight by a uniform-disk increment, renormalize the whole vector
// to sum(|w_i|^2) = 2^k, and accept iff d_min strictly improves. Stops at
// max_trials or after stall_limit consecutive rejections. Deterministic
// in (c, sched, seed).
OptimizationTrace optimize_weights(const Constellation& c,
                                   const PerturbationSchedule& sched,
                                   std::uint64_t seed);

// Best of `starts` independent runs (substreams of `seed`).
OptimizationTrace optimize_weights_multistart(const Constellation& c,
                                              const PerturbationSchedule& sched,
                                              std::uint64_t seed, int starts);

// Bijection from constellation indices to k-bit labels.
struct BitMapping {
    int k = 0;
    std::vector<std::uint32_t> label_of;  // label_of[point index] -> label

    static BitMapping natural(int k);
    bool is_permutation() const;
    void validate() const;
};

// The `count` unordered pairs with smallest Euclidean distance, ordered by
// (distance, i, j); ties at the cut are resolved by index order.
std::vector<std::pair<std::size_t, std::size_t>> nearest_pairs(
    std::span<const cplx> points, std::size_t count);

// Sum of Hamming distances between labels over the given pair set.
long mapping_cost(const BitMapping& m,
                  std::span<const std::pair<std::size_t, std::size_t>> pairs);

struct MappingTrace {
    std::vector<TrialRecord> iterations;  // d_value holds the candidate cost
    BitMapping mapping;
    long initial_cost = 0;
    long final_cost = 0;
};

// Label search with the metric changed to Hamming distance: start from the
// natural mapping, swap the labels of two uniformly chosen points per
// trial, accept iff the summed Hamming cost over the 2^k nearest pairs
// strictly decreases. Swaps preserve bijectivity. Radius fields of the
// schedule are ignored; max_trials and stall_limit apply unchanged.
MappingTrace optimize_bit_mapping(const Constellation& c,
                                  const PerturbationSchedule& sched,
                                  std::uint64_t seed);

}  // namespace mbm
