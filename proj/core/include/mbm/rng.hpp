#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace mbm {

// SplitMix64 (Vigna). Used for seeding the main engine and for deriving
// independent substream seeds, never as the sampling engine itself.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// Substream seed for (seed, stream). Two SplitMix64 rounds decorrelate
// nearby stream ids; the result is a pure function of its inputs.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 outer(seed);
    SplitMix64 inner(outer.next() ^ (stream + 0x9E3779B97F4A7C15ULL));
    return inner.next();
}

// xoshiro256** 1.0 (Blackman/Vigna), state filled by SplitMix64.
class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : state_) word = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

// Deterministic sampling engine. Every distribution below is fixed
// arithmetic on xoshiro output words, so (seed -> draw sequence) is a pure
// function and identical across platforms. No libc or libstdc++
// distribution objects are involved.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent substream `stream` of a master seed.
    static Rng stream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(derive_stream(seed, stream));
    }

    std::uint64_t next_u64() { return engine_.next(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_.next() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform01_open() {
        return static_cast<double>((engine_.next() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Lemire multiply-shift; bias is O(n/2^64).
    std::uint64_t below(std::uint64_t n) {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(engine_.next()) * n) >> 64);
    }

    // CN(0,1): radius sqrt(-ln u) and uniform phase (polar Box-Muller).
    // Real and imaginary parts are independent N(0, 1/2).
    std::complex<double> gaussian_cn01() {
        const double r = std::sqrt(-std::log(uniform01_open()));
        const double theta = 2.0 * std::numbers::pi * uniform01();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    // Uniform by area over the complex disk |z| <= radius.
    std::complex<double> uniform_disk(double radius) {
        const double r = radius * std::sqrt(uniform01());
        const double theta = 2.0 * std::numbers::pi * uniform01();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

  private:
    Xoshiro256ss engine_;
};

}  // namespace mbm
