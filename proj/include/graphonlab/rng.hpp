#pragma once

#include <cstdint>

namespace graphonlab {

// splitmix64 finalizer; full avalanche, used both as a mixer and as the
// per-stream generator step.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based RNG: the stream for (seed, index) is independent of every
// other index and of scheduling, so Monte Carlo results do not depend on the
// worker count. Each draw advances a splitmix64 state derived from the pair.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t index)
        : state_(mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Bernoulli(p) coin.
    bool next_coin(double p) { return next_double() < p; }

  private:
    std::uint64_t state_;
};

}  // namespace graphonlab
