#pragma once

#include <cstdint>
#include <initializer_list>

#include <Eigen/Dense>

namespace cmcboot {

/// SplitMix64 step; used for seed mixing and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/**
xoshiro256++ generator. Small state, fast, and seedable from a single
64-bit value, so millions of independent streams can be derived cheaply.
*/
class RngStream {
  public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed) {
        for (auto& word : state_) word = splitmix64(seed);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by rejection; exact for any bound.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
        for (;;) {
            std::uint64_t value = (*this)();
            if (value >= threshold) return value % bound;
        }
    }

    /**
    Sample an index from a probability row by inverse-CDF walk.
    The row must sum to 1; the final index absorbs any floating slack.
    */
    int categorical(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
        double u = uniform();
        double cumulative = 0.0;
        const int last = int(row.size()) - 1;
        for (int i = 0; i < last; ++i) {
            cumulative += row(i);
            if (u < cumulative) return i;
        }
        return last;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

/**
Splittable seed. A SeedSpec plus the same sequence of child(...) / stream(...)
calls yields bit-identical random streams on one platform, independent of
execution order or thread count: tasks never share a stream, they derive
their own from the task index.
*/
struct SeedSpec {
    std::uint64_t master_seed = 0;

    SeedSpec() = default;
    explicit SeedSpec(std::uint64_t seed) : master_seed(seed) {}

    bool operator==(const SeedSpec&) const = default;

    /// Derive a child seed for a sub-context (replicate, episode, purpose tag).
    SeedSpec child(std::uint64_t index) const {
        std::uint64_t state = master_seed ^ (index + 0x9e3779b97f4a7c15ull);
        splitmix64(state);
        return SeedSpec(splitmix64(state));
    }

    /// Terminal derivation: an independent generator for task `index`.
    RngStream stream(std::uint64_t index) const {
        return RngStream(child(index).master_seed);
    }
};

}  // namespace cmcboot
