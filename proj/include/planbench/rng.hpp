#pragma once

// Portable deterministic randomness. Distributions are implemented here
// rather than taken from <random> so that streams are identical across
// standard library implementations.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace planbench {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for work item `index` under `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(derive(seed, index)); }
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ull));
    }

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [lo, hi] by rejection sampling.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
        const std::uint64_t span = hi - lo;
        if (span == ~std::uint64_t{0}) return next();
        const std::uint64_t range = span + 1;
        // 2^64 mod range; values below it would bias the modulus.
        const std::uint64_t threshold = (0 - range) % range;
        std::uint64_t x;
        do {
            x = next();
        } while (x < threshold);
        return lo + x % range;
    }

    int uniform_int(int lo, int hi) {
        return static_cast<int>(static_cast<std::int64_t>(lo) +
                                static_cast<std::int64_t>(uniform(0, static_cast<std::uint64_t>(hi - lo))));
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, n - 1)); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[index(v.size())];
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace planbench
