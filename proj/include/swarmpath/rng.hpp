#pragma once
// Deterministic per-robot random streams.
//
// Each stream is a SplitMix64 generator whose initial state is derived
// from (seed, stream_id) by two extra mixing rounds, so streams for
// different robots are decorrelated while staying reproducible across
// platforms. Uniform doubles are built directly from the top 53 bits,
// never through std:: distributions (their output is implementation
// defined and would break byte-identical traces).

#include <cstdint>

namespace swarmpath {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
}  // namespace detail

class RngStream {
public:
    RngStream() = default;

    RngStream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t s = seed;
        const std::uint64_t a = detail::splitmix64(s);
        s = stream_id + 0x632BE59BD9B4E019ull;
        const std::uint64_t b = detail::splitmix64(s);
        state_ = a ^ b;
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + (b - a) * next_unit(); }

private:
    std::uint64_t state_ = 0;
};

}  // namespace swarmpath
