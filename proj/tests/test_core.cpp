#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mbm/analytic.hpp"
#include "mbm/constellation.hpp"
#include "mbm/distance.hpp"
#include "mbm/errors.hpp"
#include "mbm/rng.hpp"
#include "support/oracles.hpp"

using namespace mbm;

TEST_CASE("open-loop draw has the contracted shape") {
    const Constellation c = draw_open_loop(2, 99);
    CHECK(c.k == 2);
    CHECK(c.points.size() == 4);
    CHECK(c.provenance == Provenance::open_loop_draw);
    CHECK(c.seed == 99);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("open-loop draw is deterministic in the seed") {
    const Constellation a = draw_open_loop(4, 42);
    const Constellation b = draw_open_loop(4, 42);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i] == b.points[i]);
    const Constellation other = draw_open_loop(4, 43);
    CHECK(a.points != other.points);
}

TEST_CASE("open-loop draw rejects out-of-range k") {
    CHECK_THROWS_AS(draw_open_loop(0, 1), ParameterError);
    CHECK_THROWS_AS(draw_open_loop(17, 1), ParameterError);
    CHECK_NOTHROW(draw_open_loop(16, 1));
}

TEST_CASE("open-loop components are N(0, 1/2)") {
    std::vector<double> re;
    re.reserve(400000);
    for (std::uint64_t d = 0; d < 100000; ++d) {
        const Constellation c = draw_open_loop(2, derive_stream(0xBA5E, d));
        for (const auto& p : c.points) re.push_back(p.real());
    }
    const double var = oracles::variance(re);
    CHECK(var == doctest::Approx(0.5).epsilon(0.01));
    CHECK(oracles::mean(re) == doctest::Approx(0.0).epsilon(0.01));
}

TEST_CASE("k=1 pair distance is Rayleigh with mean sqrt(pi/2)") {
    std::vector<double> dist;
    dist.reserve(200000);
    for (std::uint64_t d = 0; d < 200000; ++d) {
        const Constellation c = draw_open_loop(1, derive_stream(0xD15, d));
        dist.push_back(std::abs(c.points[0] - c.points[1]));
    }
    CHECK(oracles::mean(dist) == doctest::Approx(std::sqrt(0.5 * std::numbers::pi)).epsilon(0.01));
}

TEST_CASE("min pairwise distance on hand cases") {
    SUBCASE("3-4-5 triangle") {
        const std::vector<cplx> pts{{0, 0}, {3, 0}, {0, 4}};
        const DistanceReport r = min_pairwise_distance(pts);
        CHECK(r.d_min == doctest::Approx(3.0));
        CHECK(r.argmin_pair == std::pair<std::size_t, std::size_t>{0, 1});
        CHECK(r.all_pairs_count == 3);
    }
    SUBCASE("duplicate points give zero") {
        const std::vector<cplx> pts{{1, 1}, {1, 1}, {5, 0}};
        const DistanceReport r = min_pairwise_distance(pts);
        CHECK(r.d_min == 0.0);
        CHECK(r.argmin_pair == std::pair<std::size_t, std::size_t>{0, 1});
    }
    SUBCASE("fewer than two points is an error") {
        const std::vector<cplx> one{{1, 0}};
        CHECK_THROWS_AS(min_pairwise_distance(std::span<const cplx>(one)), ParameterError);
    }
}

TEST_CASE("min pairwise distance matches the exhaustive oracle") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Constellation c = draw_open_loop(3, derive_stream(0xACE, seed));
        const DistanceReport r = min_pairwise_distance(c);
        CHECK(r.d_min == doctest::Approx(oracles::brute_force_dmin(c.points)).epsilon(1e-14));
        CHECK(r.all_pairs_count == 28);
    }
}

TEST_CASE("tie break picks the lexicographically lowest pair") {
    // QPSK grid: four side pairs all at distance sqrt(2).
    const DistanceReport r = min_pairwise_distance(reference_qam(2));
    CHECK(r.argmin_pair == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("identity weights reproduce the open-loop points") {
    const Constellation c = draw_open_loop(3, 7);
    const Constellation shaped = apply_weights(c, unit_weights(3));
    CHECK(shaped.provenance == Provenance::closed_loop);
    for (std::size_t i = 0; i < c.points.size(); ++i) CHECK(shaped.points[i] == c.points[i]);
}

TEST_CASE("uniform weight scaling scales every pairwise distance") {
    const Constellation c = draw_open_loop(3, 11);
    const double alpha = 1.7;
    WeightVector w = unit_weights(3);
    for (auto& x : w.weights) x *= alpha;
    const Constellation shaped = apply_weights(c, w);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        for (std::size_t j = i + 1; j < c.points.size(); ++j) {
            const double base = std::abs(c.points[i] - c.points[j]);
            const double scaled = std::abs(shaped.points[i] - shaped.points[j]);
            CHECK(scaled == doctest::Approx(alpha * base).epsilon(1e-12));
        }
    }
    CHECK(min_pairwise_distance(shaped).d_min ==
          doctest::Approx(alpha * min_pairwise_distance(c).d_min).epsilon(1e-12));
}

TEST_CASE("rotation collision drives d_min to zero") {
    Constellation c;
    c.k = 1;
    c.points = {{1, 0}, {0, 1}};  // h = (1, i)
    c.provenance = Provenance::open_loop_draw;
    WeightVector w;
    w.k = 1;
    w.weights = {{0, 1}, {1, 0}};  // w = (i, 1)
    const Constellation shaped = apply_weights(c, w);
    CHECK(shaped.points[0] == cplx{0, 1});
    CHECK(shaped.points[1] == cplx{0, 1});
    CHECK(min_pairwise_distance(shaped).d_min == 0.0);
}

TEST_CASE("apply_weights validates dimensions and provenance") {
    const Constellation c = draw_open_loop(2, 1);
    CHECK_THROWS_AS(apply_weights(c, unit_weights(3)), ParameterError);
    const Constellation qam = reference_qam(2);
    CHECK_THROWS_AS(apply_weights(qam, unit_weights(2)), ParameterError);
}

TEST_CASE("weight vector power equality validation") {
    WeightVector w = unit_weights(2);
    CHECK_NOTHROW(w.validate());
    w.weights[0] *= 1.001;
    CHECK_THROWS_AS(w.validate(), ParameterError);
    CHECK_NOTHROW(w.validate_shape());
}

TEST_CASE("constellation validation rejects broken invariants") {
    Constellation c = draw_open_loop(2, 5);
    c.points.pop_back();
    CHECK_THROWS_AS(c.validate(), ParameterError);

    Constellation nan_c = draw_open_loop(2, 5);
    nan_c.points[1] = cplx{std::nan(""), 0.0};
    CHECK_THROWS_AS(nan_c.validate(), ParameterError);

    Constellation fake_ref = draw_open_loop(2, 5);
    fake_ref.provenance = Provenance::reference_qam;
    fake_ref.seed.reset();
    CHECK_THROWS_AS(fake_ref.validate(), ParameterError);
}

TEST_CASE("mean d_min bound closed form") {
    CHECK(mean_dmin_upper_bound(2) == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(mean_dmin_upper_bound(2) == doctest::Approx(0.8862).epsilon(1e-4));
    CHECK(mean_dmin_upper_bound(4) ==
          doctest::Approx(std::sqrt(std::numbers::pi) * std::exp2(-2)).epsilon(1e-14));
    for (int k = 1; k <= 14; ++k)
        CHECK(mean_dmin_upper_bound(k + 2) == mean_dmin_upper_bound(k) / 2.0);
    CHECK_THROWS_AS(mean_dmin_upper_bound(0), ParameterError);
}

TEST_CASE("QAM-over-Rayleigh distance closed form") {
    CHECK(qam_rayleigh_min_distance(2) ==
          doctest::Approx(std::sqrt(0.5 * std::numbers::pi)).epsilon(1e-14));
    CHECK(qam_rayleigh_min_distance(2) == doctest::Approx(1.2533).epsilon(1e-4));
    CHECK(qam_rayleigh_min_distance(4) ==
          doctest::Approx(0.5 * std::sqrt(6.0 * std::numbers::pi / 15.0)).epsilon(1e-14));
}

TEST_CASE("distance ratio bound") {
    CHECK(mbm_qam_distance_ratio_bound(1) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
    CHECK(mbm_qam_distance_ratio_bound(40) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-9));
    for (int k = 1; k <= 16; ++k) {
        CHECK(mbm_qam_distance_ratio_bound(k) ==
              doctest::Approx(mean_dmin_upper_bound(k) / qam_rayleigh_min_distance(k)).epsilon(1e-12));
        CHECK(mbm_qam_distance_ratio_bound(k) < 1.0);
        if (k > 1) CHECK(mbm_qam_distance_ratio_bound(k) > mbm_qam_distance_ratio_bound(k - 1));
    }
}

TEST_CASE("paired-minimum pdf closed form") {
    SUBCASE("k=1 reduces to the Rayleigh pdf") {
        for (double d : {0.1, 0.5, 1.0, 2.0, 3.5})
            CHECK(paired_min_pdf(1, d) == doctest::Approx(d * std::exp(-0.5 * d * d)).epsilon(1e-14));
    }
    SUBCASE("pdf integrates to one") {
        for (int k = 1; k <= 6; ++k) {
            const double mass =
                oracles::simpson([k](double d) { return paired_min_pdf(k, d); }, 0.0, 20.0, 1 << 17);
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("mean by quadrature matches the closed-form bound") {
        for (int k = 1; k <= 6; ++k) {
            const double m = oracles::simpson(
                [k](double d) { return d * paired_min_pdf(k, d); }, 0.0, 20.0, 1 << 17);
            CHECK(m == doctest::Approx(mean_dmin_upper_bound(k)).epsilon(1e-9));
        }
    }
    SUBCASE("cdf is the integral of the pdf") {
        const double integrated =
            oracles::simpson([](double d) { return paired_min_pdf(3, d); }, 0.0, 0.8, 1 << 14);
        CHECK(integrated == doctest::Approx(paired_min_cdf(3, 0.8)).epsilon(1e-10));
    }
}

TEST_CASE("reference QAM constellations") {
    SUBCASE("QPSK") {
        const Constellation c = reference_qam(2);
        CHECK(c.points.size() == 4);
        CHECK(c.average_energy() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(min_pairwise_distance(c).d_min == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
        const double inv = 1.0 / std::numbers::sqrt2;
        for (const auto& p : c.points) {
            CHECK(std::abs(std::abs(p.real()) - inv) < 1e-12);
            CHECK(std::abs(std::abs(p.imag()) - inv) < 1e-12);
        }
    }
    SUBCASE("16-QAM") {
        const Constellation c = reference_qam(4);
        CHECK(c.points.size() == 16);
        CHECK(c.average_energy() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(min_pairwise_distance(c).d_min == doctest::Approx(std::sqrt(6.0 / 15.0)).epsilon(1e-12));
    }
    SUBCASE("64-QAM energy") {
        CHECK(reference_qam(6).average_energy() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("odd or oversized k rejected") {
        CHECK_THROWS_AS(reference_qam(3), ParameterError);
        CHECK_THROWS_AS(reference_qam(8), ParameterError);
    }
}

TEST_CASE("reference PSK constellations") {
    const Constellation bpsk = reference_psk(1);
    CHECK(bpsk.points[0] == cplx{1, 0});
    CHECK(bpsk.points[1] == cplx{-1, 0});
    const Constellation qpsk = reference_psk(2);
    CHECK(qpsk.average_energy() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(min_pairwise_distance(qpsk).d_min == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
}

TEST_CASE("paired minimum distance uses the disjoint pairs only") {
    // Points placed so the global minimum (0.5) crosses pair boundaries but
    // the disjoint-pair minimum is 2.
    const std::vector<cplx> pts{{0, 0}, {2, 0}, {2.5, 0}, {7, 0}};
    CHECK(min_distance(pts) == doctest::Approx(0.5));
    CHECK(paired_min_distance(pts) == doctest::Approx(2.0));
    const std::vector<cplx> odd{{0, 0}, {1, 0}, {2, 0}};
    CHECK_THROWS_AS(paired_min_distance(std::span<const cplx>(odd)), ParameterError);
}

TEST_CASE("evaluate-metric hand case") {
    const std::vector<cplx> pts{{0, 0}, {1, 0}, {0, 1}};
    CHECK(min_distance(pts) == doctest::Approx(1.0));
}

TEST_CASE("uniform01 and disk sampling live in their supports") {
    Rng rng(123);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const auto z = rng.uniform_disk(0.25);
        CHECK(std::abs(z) <= 0.25);
    }
}

TEST_CASE("derive_stream decorrelates neighboring ids") {
    CHECK(derive_stream(1, 0) != derive_stream(1, 1));
    CHECK(derive_stream(1, 0) != derive_stream(2, 0));
    CHECK(derive_stream(7, 3) == derive_stream(7, 3));
}
