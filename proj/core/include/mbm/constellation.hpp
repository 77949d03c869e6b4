#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mbm {

using cplx = std::complex<double>;

inline constexpr int k_max = 16;  // caps point counts at 65536, pair scans stay desk-scale

enum class Provenance {
    open_loop_draw,   // raw channel states, one per mirror activation pattern
    closed_loop,      // weights applied to an open-loop draw
    reference_qam,
    reference_psk,
};

std::string to_string(Provenance p);
std::optional<Provenance> provenance_from_string(std::string_view s);

// Ordered set of 2^k complex points. For MBM these are channel states h_i
// (open loop) or shaped points w_i * h_i (closed loop).
struct Constellation {
    int k = 0;
    std::vector<cplx> points;
    Provenance provenance = Provenance::open_loop_draw;
    std::optional<std::uint64_t> seed;  // present only for open_loop_draw

    std::size_t size() const { return points.size(); }
    double average_energy() const;

    // Throws ParameterError: k in [1, k_max], exactly 2^k finite points,
    // and unit average energy (1e-12) for the reference constellations.
    void validate() const;
};

// Per-state complex transmit weights, constrained to sum(|w_i|^2) = 2^k.
struct WeightVector {
    int k = 0;
    std::vector<cplx> weights;

    double power_sum() const;

    // k/length/finiteness only; lets callers study scaled variants.
    void validate_shape() const;

    // Shape plus the power equality within 1e-9 relative (strict
    // inequality is always dominated by scaling up).
    void validate() const;
};

WeightVector unit_weights(int k);

// 2^k i.i.d. CN(0,1) states. Deterministic in (k, seed).
Constellation draw_open_loop(int k, std::uint64_t seed);

// Point i of the result is w_i * h_i; provenance becomes closed_loop.
Constellation apply_weights(const Constellation& c, const WeightVector& w);

// Square M-QAM grid (k in {2,4,6}) at unit average symbol energy.
// Minimum distance is sqrt(6/(2^k - 1)).
Constellation reference_qam(int k);

// M-PSK on the unit circle; k=1 gives the antipodal pair {+1, -1}.
Constellation reference_psk(int k);

}  // namespace mbm
