#include <doctest.h>

#include <cmath>
#include <vector>

#include "mbm/constellation.hpp"
#include "mbm/distance.hpp"
#include "mbm/errors.hpp"
#include "mbm/optimizer.hpp"
#include "mbm/rng.hpp"
#include "mbm/sim.hpp"
#include "support/oracles.hpp"

using namespace mbm;

namespace {

SimConfig base_config(Channel ch, std::vector<double> grid, std::int64_t trials,
                      std::uint64_t seed) {
    SimConfig cfg;
    cfg.snr_grid_db = std::move(grid);
    cfg.trials_per_point = trials;
    cfg.min_errors = 0;
    cfg.channel = ch;
    cfg.seed = seed;
    cfg.shards = 1;
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    SimConfig cfg = base_config(Channel::awgn_qam, {0.0, 2.0}, 10, 1);
    CHECK_NOTHROW(cfg.validate());
    cfg.snr_grid_db = {2.0, 2.0};
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = base_config(Channel::awgn_qam, {}, 10, 1);
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = base_config(Channel::awgn_qam, {0.0}, 0, 1);
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = base_config(Channel::awgn_qam, {0.0}, 10, 1);
    cfg.shards = 0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("QPSK over AWGN matches the closed form at 10 dB") {
    const SimConfig cfg = base_config(Channel::awgn_qam, {10.0}, 10000000, 0xA3);
    const SerCurve curve = simulate_ser(reference_qam(2), cfg);
    const double ref = oracles::qpsk_awgn_ser(std::pow(10.0, 1.0));
    CHECK(curve.rows[0].rate == doctest::Approx(ref).epsilon(0.03));
    CHECK(curve.rows[0].trials == 10000000);
}

TEST_CASE("noise-free detection is exact") {
    const Constellation c = draw_open_loop(2, 5);
    const SimConfig cfg = base_config(Channel::rayleigh_mbm_open, {100.0}, 100000, 7);
    const SerCurve curve = simulate_ser(c, cfg);
    CHECK(curve.rows[0].errors == 0);
    CHECK(curve.rows[0].trials == 100000);
}

TEST_CASE("shard count never changes results") {
    const Constellation c = draw_open_loop(3, 21);
    SimConfig cfg = base_config(Channel::rayleigh_mbm_open, {2.0, 6.0, 10.0}, 100000, 99);
    cfg.min_errors = 50;  // exercise the early-stop path too
    const SerCurve one = simulate_ser(c, cfg);
    cfg.shards = 8;
    const SerCurve eight = simulate_ser(c, cfg);
    REQUIRE(one.rows.size() == eight.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
        CHECK(one.rows[i].errors == eight.rows[i].errors);
        CHECK(one.rows[i].trials == eight.rows[i].trials);
        CHECK(one.rows[i].rate == eight.rows[i].rate);
    }
}

TEST_CASE("early stop respects the floor and the 10% rule") {
    const Constellation c = reference_qam(2);
    SimConfig cfg = base_config(Channel::awgn_qam, {0.0}, 1000000, 3);
    cfg.min_errors = 100;  // SER ~ 0.08 at 0 dB: floor reached almost immediately
    const SerCurve curve = simulate_ser(c, cfg);
    CHECK(curve.rows[0].trials < 1000000);
    CHECK(curve.rows[0].trials >= 100000);  // at least 10% must run
    CHECK(curve.rows[0].errors >= 100);

    cfg.min_errors = 0;  // disabled: the full budget runs
    const SerCurve full = simulate_ser(c, cfg);
    CHECK(full.rows[0].trials == 1000000);
}

TEST_CASE("SER is monotone in SNR once errors are plentiful") {
    const SimConfig cfg =
        base_config(Channel::awgn_qam, {0.0, 2.0, 4.0, 6.0, 8.0}, 200000, 17);
    const SerCurve curve = simulate_ser(reference_qam(2), cfg);
    for (std::size_t i = 0; i + 1 < curve.rows.size(); ++i) {
        CHECK(curve.rows[i].errors >= 100);
        CHECK(curve.rows[i + 1].rate <= curve.rows[i].rate);
    }
}

TEST_CASE("noise is referenced to the realized constellation energy") {
    const Constellation c = draw_open_loop(3, 33);
    const SimConfig cfg = base_config(Channel::rayleigh_mbm_open, {8.0}, 1000, 1);
    const SerCurve curve = simulate_ser(c, cfg);
    CHECK(std::abs(curve.es_used - c.average_energy()) <= 1e-12);

    SimConfig overridden = cfg;
    overridden.es_reference = 1.0;
    CHECK(simulate_ser(c, overridden).es_used == 1.0);
}

TEST_CASE("QPSK over Rayleigh matches the quadrature oracle") {
    const SimConfig cfg = base_config(Channel::rayleigh_qam, {10.0}, 2000000, 0x52);
    const SerCurve curve = simulate_ser(reference_qam(2), cfg);
    const double ref = oracles::qpsk_rayleigh_ser(10.0);
    // 2e6 trials at SER ~ 0.078: 3 sigma is ~0.5% relative
    CHECK(curve.rows[0].rate == doctest::Approx(ref).epsilon(0.01));
}

TEST_CASE("BPSK bit error rate matches the closed form") {
    const Constellation bpsk = reference_psk(1);
    const SimConfig cfg = base_config(Channel::awgn_qam, {4.0}, 1000000, 0xB1);
    const SerCurve curve = simulate_ber_uncoded(bpsk, BitMapping::natural(1), cfg);
    const double ref = oracles::bpsk_awgn_ber(std::pow(10.0, 0.4));
    CHECK(curve.rows[0].rate == doctest::Approx(ref).epsilon(0.03));
    CHECK(curve.rows[0].trials == 1000000);  // k=1: bits == symbols
}

TEST_CASE("bit errors bound symbol errors on the same trial stream") {
    const Constellation c = draw_open_loop(4, 0x77);
    const SimConfig cfg = base_config(Channel::rayleigh_mbm_open, {6.0, 12.0}, 50000, 0x99);
    const SerCurve ser = simulate_ser(c, cfg);
    const SerCurve ber = simulate_ber_uncoded(c, BitMapping::natural(4), cfg);
    for (std::size_t i = 0; i < ser.rows.size(); ++i) {
        CHECK(ber.rows[i].trials == 4 * ser.rows[i].trials);
        CHECK(ber.rows[i].errors >= ser.rows[i].errors);        // >= 1 bit per symbol error
        CHECK(ber.rows[i].errors <= 4 * ser.rows[i].errors);    // <= k bits per symbol error
        CHECK(ber.rows[i].rate <= ser.rows[i].rate);
        CHECK(ber.rows[i].rate >= ser.rows[i].rate / 4.0);
    }
}

TEST_CASE("mapping dimension mismatch is rejected") {
    const Constellation c = draw_open_loop(3, 1);
    const SimConfig cfg = base_config(Channel::rayleigh_mbm_open, {10.0}, 100, 1);
    CHECK_THROWS_AS(simulate_ber_uncoded(c, BitMapping::natural(2), cfg), ParameterError);
}

TEST_CASE("a single averaged draw reduces to a plain simulation") {
    SimConfig cfg = base_config(Channel::rayleigh_mbm_open, {4.0, 8.0}, 20000, 0xAB);
    const SerCurve averaged = average_over_channels(3, cfg, 1, false);

    const Constellation c = draw_open_loop(3, channel_draw_seed(cfg.seed, 0));
    SimConfig direct = cfg;
    direct.seed = simulation_draw_seed(cfg.seed, 0);
    direct.es_reference = 1.0;  // open-loop averaging uses the ensemble energy
    const SerCurve single = simulate_ser(c, direct);

    REQUIRE(averaged.rows.size() == single.rows.size());
    for (std::size_t i = 0; i < averaged.rows.size(); ++i) {
        CHECK(averaged.rows[i].errors == single.rows[i].errors);
        CHECK(averaged.rows[i].trials == single.rows[i].trials);
    }
}

TEST_CASE("averaged rows are exact sums over draws") {
    SimConfig cfg = base_config(Channel::rayleigh_mbm_open, {6.0}, 10000, 0xCD);
    const SerCurve avg = average_over_channels(2, cfg, 3, false);
    std::int64_t errors = 0;
    for (int d = 0; d < 3; ++d) {
        const Constellation c = draw_open_loop(2, channel_draw_seed(cfg.seed, d));
        SimConfig per = cfg;
        per.seed = simulation_draw_seed(cfg.seed, d);
        per.es_reference = 1.0;
        errors += simulate_ser(c, per).rows[0].errors;
    }
    CHECK(avg.rows[0].errors == errors);
    CHECK(avg.rows[0].trials == 30000);
}

TEST_CASE("closed-loop averaging beats open-loop on paired seeds") {
    SimConfig cfg = base_config(Channel::rayleigh_mbm_open, {14.0}, 20000, 0xEF);
    PerturbationSchedule sched;
    sched.max_trials = 5000;
    const SerCurve open = average_over_channels(4, cfg, 10, false, sched);
    cfg.channel = Channel::rayleigh_mbm_closed;
    const SerCurve closed = average_over_channels(4, cfg, 10, true, sched);
    CHECK(closed.rows[0].errors < open.rows[0].errors);
}

TEST_CASE("averaging rejects non-MBM channels and bad draw counts") {
    SimConfig cfg = base_config(Channel::awgn_qam, {10.0}, 100, 1);
    CHECK_THROWS_AS(average_over_channels(2, cfg, 10, false), ParameterError);
    cfg.channel = Channel::rayleigh_mbm_open;
    CHECK_THROWS_AS(average_over_channels(2, cfg, 0, false), ParameterError);
}

TEST_CASE("channel names round-trip") {
    for (Channel ch : {Channel::rayleigh_mbm_open, Channel::rayleigh_mbm_closed,
                       Channel::rayleigh_qam, Channel::awgn_qam, Channel::awgn_mbm_shaped}) {
        const auto parsed = channel_from_string(to_string(ch));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == ch);
    }
    CHECK_FALSE(channel_from_string("bogus").has_value());
}
