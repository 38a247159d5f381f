#pragma once

#include <cstdint>
#include <random>

namespace palab {

// splitmix64: cheap, well-mixed 64-bit stream; used to derive independent
// substream seeds from (seed, index...) tuples so replica farms are
// reproducible regardless of worker count.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed) {
    std::uint64_t s = seed;
    return splitmix64(s);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= 0x6a09e667f3bcc909ull + a;
    splitmix64(s);
    return splitmix64(s);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return derive_seed(derive_seed(seed, a, b), c);
}

/// Seedable RNG stream. Wraps mt19937_64 with the sampling helpers the
/// generators need; new independent streams come from derive().
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)), seed_(seed) {}

    Rng derive(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

    std::mt19937_64& engine() { return engine_; }
    std::uint64_t seed() const { return seed_; }

    /// Uniform on [0, 1).
    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    /// Uniform on [0, hi).
    double uniform(double hi) {
        return std::uniform_real_distribution<double>(0.0, hi)(engine_);
    }

    /// Uniform integer in [0, n).
    std::int64_t uniform_int(std::int64_t n) {
        return std::uniform_int_distribution<std::int64_t>(0, n - 1)(engine_);
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    double gamma(double shape, double scale = 1.0) {
        return std::gamma_distribution<double>(shape, scale)(engine_);
    }

    /// Beta(a,b) via the two-gamma representation.
    double beta(double a, double b) {
        double x = gamma(a);
        double y = gamma(b);
        return x / (x + y);
    }

    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<long>(mean)(engine_);
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

}  // namespace palab
