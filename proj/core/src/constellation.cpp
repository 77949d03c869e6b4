#include "mbm/constellation.hpp"

#include <cmath>
#include <numbers>

#include "mbm/errors.hpp"
#include "mbm/rng.hpp"

namespace mbm {

namespace {

void check_k(int k) {
    if (k < 1 || k > k_max)
        throw ParameterError("k must be in [1, " + std::to_string(k_max) +
                             "], got " + std::to_string(k));
}

bool all_finite(const std::vector<cplx>& pts) {
    for (const auto& p : pts)
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) return false;
    return true;
}

}  // namespace

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::open_loop_draw: return "open_loop_draw";
        case Provenance::closed_loop: return "closed_loop";
        case Provenance::reference_qam: return "reference_qam";
        case Provenance::reference_psk: return "reference_psk";
    }
    return "unknown";
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
    if (s == "open_loop_draw") return Provenance::open_loop_draw;
    if (s == "closed_loop") return Provenance::closed_loop;
    if (s == "reference_qam") return Provenance::reference_qam;
    if (s == "reference_psk") return Provenance::reference_psk;
    return std::nullopt;
}

double Constellation::average_energy() const {
    double sum = 0.0;
    for (const auto& p : points) sum += std::norm(p);
    return points.empty() ? 0.0 : sum / static_cast<double>(points.size());
}

void Constellation::validate() const {
    check_k(k);
    const std::size_t expected = std::size_t{1} << k;
    if (points.size() != expected)
        throw ParameterError("constellation must have 2^k = " + std::to_string(expected) +
                             " points, got " + std::to_string(points.size()));
    if (!all_finite(points))
        throw ParameterError("constellation contains a non-finite point");
    if (provenance == Provenance::reference_qam || provenance == Provenance::reference_psk) {
        if (std::abs(average_energy() - 1.0) > 1e-12)
            throw ParameterError("reference constellation is not unit average energy");
    }
}

double WeightVector::power_sum() const {
    double sum = 0.0;
    for (const auto& w : weights) sum += std::norm(w);
    return sum;
}

void WeightVector::validate_shape() const {
    check_k(k);
    const std::size_t expected = std::size_t{1} << k;
    if (weights.size() != expected)
        throw ParameterError("weight vector must have 2^k = " + std::to_string(expected) +
                             " entries, got " + std::to_string(weights.size()));
    if (!all_finite(weights))
        throw ParameterError("weight vector contains a non-finite entry");
}

void WeightVector::validate() const {
    validate_shape();
    const double target = static_cast<double>(std::size_t{1} << k);
    if (std::abs(power_sum() - target) > 1e-9 * target)
        throw ParameterError("weight power sum violates sum(|w|^2) = 2^k");
}

WeightVector unit_weights(int k) {
    check_k(k);
    WeightVector w;
    w.k = k;
    w.weights.assign(std::size_t{1} << k, cplx{1.0, 0.0});
    return w;
}

Constellation draw_open_loop(int k, std::uint64_t seed) {
    check_k(k);
    Constellation c;
    c.k = k;
    c.provenance = Provenance::open_loop_draw;
    c.seed = seed;
    const std::size_t count = std::size_t{1} << k;
    c.points.reserve(count);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) c.points.push_back(rng.gaussian_cn01());
    return c;
}

Constellation apply_weights(const Constellation& c, const WeightVector& w) {
    c.validate();
    w.validate_shape();
    if (c.provenance != Provenance::open_loop_draw)
        throw ParameterError("weights apply to an open-loop draw, got provenance " +
                             to_string(c.provenance));
    if (c.k != w.k)
        throw ParameterError("dimension mismatch: constellation k=" + std::to_string(c.k) +
                             ", weights k=" + std::to_string(w.k));
    Constellation shaped;
    shaped.k = c.k;
    shaped.provenance = Provenance::closed_loop;
    shaped.points.reserve(c.points.size());
    for (std::size_t i = 0; i < c.points.size(); ++i)
        shaped.points.push_back(w.weights[i] * c.points[i]);
    return shaped;
}

Constellation reference_qam(int k) {
    check_k(k);
    if (k % 2 != 0 || k > 6)
        throw ParameterError("square QAM needs k in {2, 4, 6}, got " + std::to_string(k));
    const int side = 1 << (k / 2);
    const int m = 1 << k;
    // Odd-integer grid has average energy 2(M-1)/3; scale to unit energy.
    const double scale = 1.0 / std::sqrt(2.0 * (m - 1) / 3.0);
    Constellation c;
    c.k = k;
    c.provenance = Provenance::reference_qam;
    c.points.reserve(static_cast<std::size_t>(m));
    for (int a = 0; a < side; ++a)
        for (int b = 0; b < side; ++b)
            c.points.emplace_back((2 * a - side + 1) * scale, (2 * b - side + 1) * scale);
    return c;
}

Constellation reference_psk(int k) {
    check_k(k);
    const std::size_t m = std::size_t{1} << k;
    Constellation c;
    c.k = k;
    c.provenance = Provenance::reference_psk;
    c.points.reserve(m);
    if (k == 1) {
        c.points = {cplx{1.0, 0.0}, cplx{-1.0, 0.0}};  // exact antipodal pair
        return c;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
        c.points.emplace_back(std::cos(phi), std::sin(phi));
    }
    return c;
}

}  // namespace mbm
