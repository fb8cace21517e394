#pragma once

#include <cmath>
#include <cstdint>

namespace laeb {

// splitmix64 finalizer; the workhorse behind all randomness in the library.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t a,
                                     std::uint64_t b = 0) {
    std::uint64_t h = mix64(seed + kGolden);
    h = mix64(h ^ (a + kGolden));
    h = mix64(h ^ (b + kGolden));
    return h;
}

inline double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;  // [0, 1)
}

// Per-entry uniform keyed by (seed, i, j): order-independent, so masking
// decisions can be evaluated in any order or in parallel.
inline double entry_uniform(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    return to_unit(hash_combine(seed, i, j));
}

// Counter-based stream (splitmix64 sequence). Draws depend only on
// (seed, stream, position), never on global state.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(hash_combine(seed, stream)) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    double uniform() { return to_unit(next_u64()); }

    // Box-Muller; generates pairs, caches the spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // Uniform integer in [0, bound) without modulo bias (Lemire rejection).
    std::uint64_t below(std::uint64_t bound) {
        for (;;) {
            const std::uint64_t x = next_u64();
            const std::uint64_t r = x % bound;
            if (x - r <= ~bound + 1) return r;
        }
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace laeb
