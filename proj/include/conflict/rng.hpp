#pragma once

#include <cstdint>
#include <random>

namespace conflict {

/// Named substreams split off a trial's master seed, so that each random
/// subsystem can be replayed on its own.
enum class Stream : std::uint64_t {
    truncation = 1,
    activation = 2,
    colour = 3,
    flip = 4,
    finisher = 5,
    generator = 6,
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0)
{
    return splitmix64(splitmix64(splitmix64(master) ^ static_cast<std::uint64_t>(stream)) ^ index);
}

/// mt19937_64 with hand-rolled distributions. The standard distributions are
/// implementation-defined, which would break bit-exact reproducibility of
/// transcripts across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_below(std::uint64_t n)
    {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold)
                return r % n;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

    bool bernoulli(double p)
    {
        if (p <= 0.0)
            return false;
        if (p >= 1.0)
            return true;
        return uniform01() < p;
    }

    template <typename It>
    void shuffle(It first, It last)
    {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            const auto j = uniform_below(i);
            std::swap(first[i - 1], first[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace conflict
