// rng.hpp - deterministic random number generation (SplitMix64 + xoshiro256**)
//
// All randomized algorithms in this library draw exclusively from this
// generator so that runs reproduce bit-for-bit across platforms and
// standard-library versions. The algorithms are fixed:
//   - seeding: SplitMix64 (Steele et al.) expands a 64-bit seed into the
//     256-bit xoshiro state,
//   - stream:  xoshiro256** 1.0 (Blackman & Vigna),
//   - doubles: 53 high bits scaled by 2^-53,
//   - bounded ints: modulo reduction (bias is negligible at the ranges
//     used here and determinism matters more),
//   - permutations: Fisher-Yates, descending index,
//   - derived seeds: derive_seed(seed, i) hashes seed + golden-ratio * (i+1)
//     through the SplitMix64 finalizer.

#ifndef KSEP_RNG_HPP
#define KSEP_RNG_HPP

#include <cstdint>
#include <vector>

namespace ksep {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// One-shot avalanche of a 64-bit value (the SplitMix64 output function).
inline std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64_next(s);
}

// Child seed for trial/stream `index` of a base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + kGolden * (index + 1));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform53() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

}  // namespace ksep

#endif  // KSEP_RNG_HPP
