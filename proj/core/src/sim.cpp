#include "mbm/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <string>

#include "mbm/distance.hpp"
#include "mbm/errors.hpp"
#include "mbm/rng.hpp"

namespace mbm {

namespace {

// Trials per substream block. The block grid is fixed, so shard counts
// change scheduling only, never results.
constexpr std::int64_t block_trials = 16384;

// Stream ids for the derived seeds of average_over_channels.
constexpr std::uint64_t stream_constellation = 0;
constexpr std::uint64_t stream_optimizer = 1;
constexpr std::uint64_t stream_simulation = 2;

struct BlockResult {
    std::int64_t errors = 0;   // symbol or bit errors, per mode
    std::int64_t symbols = 0;
};

std::size_t detect_nearest(const std::vector<cplx>& pts, cplx y) {
    std::size_t best = 0;
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const double sq = std::norm(y - pts[j]);
        if (sq < best_sq) {
            best_sq = sq;
            best = j;
        }
    }
    return best;
}

// y = p_i + n. Covers MBM states (open or shaped) and QAM over AWGN.
BlockResult run_block_static(const std::vector<cplx>& pts, double noise_scale,
                             const std::uint32_t* labels, Rng rng, std::int64_t trials) {
    BlockResult r;
    r.symbols = trials;
    const std::size_t m = pts.size();
    for (std::int64_t t = 0; t < trials; ++t) {
        const std::size_t i = static_cast<std::size_t>(rng.below(m));
        const cplx y = pts[i] + noise_scale * rng.gaussian_cn01();
        const std::size_t j = detect_nearest(pts, y);
        if (labels)
            r.errors += std::popcount(labels[i] ^ labels[j]);
        else
            r.errors += (j != i) ? 1 : 0;
    }
    return r;
}

// y = h * x_i + n with fresh h per symbol and coherent detection.
BlockResult run_block_fading(const std::vector<cplx>& pts, double noise_scale,
                             const std::uint32_t* labels, Rng rng, std::int64_t trials) {
    BlockResult r;
    r.symbols = trials;
    const std::size_t m = pts.size();
    std::vector<cplx> faded(m);
    for (std::int64_t t = 0; t < trials; ++t) {
        const std::size_t i = static_cast<std::size_t>(rng.below(m));
        const cplx h = rng.gaussian_cn01();
        for (std::size_t s = 0; s < m; ++s) faded[s] = h * pts[s];
        const cplx y = faded[i] + noise_scale * rng.gaussian_cn01();
        const std::size_t j = detect_nearest(faded, y);
        if (labels)
            r.errors += std::popcount(labels[i] ^ labels[j]);
        else
            r.errors += (j != i) ? 1 : 0;
    }
    return r;
}

SerCurve run_curve(const Constellation& c, const BitMapping* mapping, const SimConfig& cfg) {
    c.validate();
    cfg.validate();
    if (mapping) {
        mapping->validate();
        if (mapping->k != c.k)
            throw ParameterError("mapping k does not match constellation k");
    }

    const double es = cfg.es_reference.value_or(c.average_energy());
    if (!(es > 0.0)) throw ParameterError("noise reference energy must be positive");

    const bool fading = cfg.channel == Channel::rayleigh_qam;
    const std::uint32_t* labels = mapping ? mapping->label_of.data() : nullptr;
    const int bits = c.k;

    SerCurve curve;
    curve.es_used = es;
    curve.label = to_string(cfg.channel);

    const std::int64_t total = cfg.trials_per_point;
    const std::int64_t n_blocks = (total + block_trials - 1) / block_trials;
    const std::int64_t trial_floor = (total + 9) / 10;  // 10% before early stop

    for (std::size_t pi = 0; pi < cfg.snr_grid_db.size(); ++pi) {
        const double snr_linear = std::pow(10.0, cfg.snr_grid_db[pi] / 10.0);
        const double noise_scale = std::sqrt(es / snr_linear);

        auto run_block = [&](std::int64_t b) {
            const std::int64_t first = b * block_trials;
            const std::int64_t count = std::min(block_trials, total - first);
            Rng rng = Rng::stream(cfg.seed, (static_cast<std::uint64_t>(pi) << 32) |
                                                static_cast<std::uint64_t>(b));
            return fading ? run_block_fading(c.points, noise_scale, labels, rng, count)
                          : run_block_static(c.points, noise_scale, labels, rng, count);
        };

        std::int64_t errors = 0;
        std::int64_t symbols = 0;
        bool stopped = false;
        for (std::int64_t b = 0; b < n_blocks && !stopped;) {
            const int window = static_cast<int>(std::min<std::int64_t>(cfg.shards, n_blocks - b));
            if (window == 1) {
                const BlockResult br = run_block(b);
                errors += br.errors;
                symbols += br.symbols;
                stopped = cfg.min_errors > 0 && errors >= cfg.min_errors && symbols >= trial_floor;
                ++b;
            } else {
                std::vector<std::future<BlockResult>> futures;
                futures.reserve(static_cast<std::size_t>(window));
                for (int w = 0; w < window; ++w)
                    futures.push_back(std::async(std::launch::async, run_block, b + w));
                // Fold in block order; blocks computed past the stop point
                // are discarded so any shard count yields the same sums.
                for (int w = 0; w < window; ++w) {
                    const BlockResult br = futures[w].get();
                    if (stopped) continue;
                    errors += br.errors;
                    symbols += br.symbols;
                    stopped = cfg.min_errors > 0 && errors >= cfg.min_errors && symbols >= trial_floor;
                }
                b += window;
            }
        }

        SerRow row;
        row.snr_db = cfg.snr_grid_db[pi];
        row.errors = errors;
        row.trials = mapping ? symbols * bits : symbols;
        row.rate = row.trials > 0 ? static_cast<double>(row.errors) / static_cast<double>(row.trials)
                                  : 0.0;
        curve.rows.push_back(row);
    }
    return curve;
}

}  // namespace

std::string to_string(Channel c) {
    switch (c) {
        case Channel::rayleigh_mbm_open: return "rayleigh_mbm_open";
        case Channel::rayleigh_mbm_closed: return "rayleigh_mbm_closed";
        case Channel::rayleigh_qam: return "rayleigh_qam";
        case Channel::awgn_qam: return "awgn_qam";
        case Channel::awgn_mbm_shaped: return "awgn_mbm_shaped";
    }
    return "unknown";
}

std::optional<Channel> channel_from_string(std::string_view s) {
    if (s == "rayleigh_mbm_open") return Channel::rayleigh_mbm_open;
    if (s == "rayleigh_mbm_closed") return Channel::rayleigh_mbm_closed;
    if (s == "rayleigh_qam") return Channel::rayleigh_qam;
    if (s == "awgn_qam") return Channel::awgn_qam;
    if (s == "awgn_mbm_shaped") return Channel::awgn_mbm_shaped;
    return std::nullopt;
}

void SimConfig::validate() const {
    if (snr_grid_db.empty()) throw ParameterError("snr_grid_db must not be empty");
    for (std::size_t i = 0; i + 1 < snr_grid_db.size(); ++i)
        if (!(snr_grid_db[i] < snr_grid_db[i + 1]))
            throw ParameterError("snr_grid_db must be strictly increasing");
    if (trials_per_point < 1) throw ParameterError("trials_per_point must be >= 1");
    if (min_errors < 0) throw ParameterError("min_errors must be >= 0");
    if (shards < 1) throw ParameterError("shards must be >= 1");
    if (es_reference && !(*es_reference > 0.0))
        throw ParameterError("es_reference must be positive");
}

SerCurve simulate_ser(const Constellation& c, const SimConfig& cfg) {
    return run_curve(c, nullptr, cfg);
}

SerCurve simulate_ber_uncoded(const Constellation& c, const BitMapping& mapping,
                              const SimConfig& cfg) {
    return run_curve(c, &mapping, cfg);
}

std::uint64_t channel_draw_seed(std::uint64_t seed, int draw) {
    return derive_stream(derive_stream(seed, stream_constellation),
                         static_cast<std::uint64_t>(draw));
}

std::uint64_t optimizer_draw_seed(std::uint64_t seed, int draw) {
    return derive_stream(derive_stream(seed, stream_optimizer),
                         static_cast<std::uint64_t>(draw));
}

std::uint64_t simulation_draw_seed(std::uint64_t seed, int draw) {
    return derive_stream(derive_stream(seed, stream_simulation),
                         static_cast<std::uint64_t>(draw));
}

SerCurve average_over_channels(int k, const SimConfig& cfg, int draws, bool optimize,
                               const PerturbationSchedule& sched) {
    cfg.validate();
    if (draws < 1) throw ParameterError("draws must be >= 1");
    if (cfg.channel != Channel::rayleigh_mbm_open && cfg.channel != Channel::rayleigh_mbm_closed)
        throw ParameterError("channel averaging applies to MBM channels only");

    SerCurve sum;
    double es_total = 0.0;
    for (int d = 0; d < draws; ++d) {
        const Constellation open = draw_open_loop(k, channel_draw_seed(cfg.seed, d));
        Constellation simulated = open;
        if (optimize) {
            const OptimizationTrace t =
                optimize_weights(open, sched, optimizer_draw_seed(cfg.seed, d));
            simulated = apply_weights(open, t.final_weights);
        }
        SimConfig per_draw = cfg;
        per_draw.seed = simulation_draw_seed(cfg.seed, d);
        // Open-loop states have no feedback: noise is referenced to the
        // ensemble energy E|h|^2 = 1, not the realized draw. Shaped runs
        // keep the realized shaped energy unless the caller overrode it.
        if (!optimize && !per_draw.es_reference) per_draw.es_reference = 1.0;
        const SerCurve curve = simulate_ser(simulated, per_draw);
        es_total += curve.es_used;
        if (d == 0) {
            sum = curve;
        } else {
            for (std::size_t r = 0; r < sum.rows.size(); ++r) {
                sum.rows[r].errors += curve.rows[r].errors;
                sum.rows[r].trials += curve.rows[r].trials;
            }
        }
    }
    for (auto& row : sum.rows)
        row.rate = row.trials > 0 ? static_cast<double>(row.errors) / static_cast<double>(row.trials)
                                  : 0.0;
    sum.es_used = es_total / draws;
    sum.label = to_string(cfg.channel);
    return sum;
}

}  // namespace mbm
