#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mbm/constellation.hpp"
#include "mbm/optimizer.hpp"

namespace mbm {

enum class Channel {
    rayleigh_mbm_open,    // constellation points are raw channel states
    rayleigh_mbm_closed,  // shaped points, weights fixed to the realized states
    rayleigh_qam,         // y = h*x + n with fresh h ~ CN(0,1) per symbol, known h
    awgn_qam,             // y = x + n
    awgn_mbm_shaped,      // a fixed shaped constellation over AWGN
};

std::string to_string(Channel c);
std::optional<Channel> channel_from_string(std::string_view s);

struct SimConfig {
    std::vector<double> snr_grid_db;     // Es/N0 per point, strictly increasing
    std::int64_t trials_per_point = 100000;
    std::int64_t min_errors = 200;       // early-stop floor; 0 disables early stop
    Channel channel = Channel::awgn_qam;
    std::uint64_t seed = 0;
    int shards = 1;

    // Energy the noise is normalized to (N0 = es_reference / snr_linear).
    // Unset means the realized average energy of the simulated
    // constellation. Averaged open-loop runs set this to 1, the ensemble
    // energy of CN(0,1) states, so a faded realization is not silently
    // granted transmit power it does not have.
    std::optional<double> es_reference;

    void validate() const;
};

struct SerRow {
    double snr_db = 0.0;
    std::int64_t errors = 0;
    std::int64_t trials = 0;
    double rate = 0.0;  // errors / trials
};

struct SerCurve {
    std::vector<SerRow> rows;
    std::string label;
    double es_used = 0.0;  // average symbol energy the noise was normalized to
};

// Monte Carlo SER with maximum-likelihood detection (receiver knows every
// constellation point). Noise is CN(0, N0) with N0 = Es/snr_linear and Es
// the average energy of the simulated constellation. Trials are processed
// in fixed-size blocks, each on its own seeded substream; shards only
// parallelize block evaluation, so results are identical for any shard
// count. Early stop is decided at block boundaries once min_errors is
// reached and at least 10% of trials_per_point have run.
SerCurve simulate_ser(const Constellation& c, const SimConfig& cfg);

// Same trial loop with errors counted in bits: a symbol error (i -> j)
// contributes Hamming(label_i, label_j) bit errors. Rows report bit errors
// over k * symbols transmitted bits; min_errors counts bit errors.
SerCurve simulate_ber_uncoded(const Constellation& c, const BitMapping& mapping,
                              const SimConfig& cfg);

// Ergodic average over `draws` seeded open-loop channel realizations.
// With optimize set, the weight optimizer runs on each draw (the same
// realization is then simulated, mirroring the feedback loop). Rows are
// exact sums of the per-draw error and trial counts.
SerCurve average_over_channels(int k, const SimConfig& cfg, int draws, bool optimize,
                               const PerturbationSchedule& sched = {});

// Substream seeds used for draw d of an averaged run, public so paired
// experiments can reproduce an individual draw.
std::uint64_t channel_draw_seed(std::uint64_t seed, int draw);
std::uint64_t optimizer_draw_seed(std::uint64_t seed, int draw);
std::uint64_t simulation_draw_seed(std::uint64_t seed, int draw);

}  // namespace mbm
