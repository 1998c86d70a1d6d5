#ifndef CFAL_SEEDING_HPP
#define CFAL_SEEDING_HPP

#include <cstdint>
#include <random>

namespace cfal {

/* SplitMix64 finalizer (Steele, Lea, Flood 2014). Used to derive
 * independent per-trial substreams from (master_seed, trial_index). */
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index)
{
    return mix64(mix64(master_seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

inline Rng trial_rng(std::uint64_t master_seed, std::uint64_t index)
{
    return Rng(substream_seed(master_seed, index));
}

/* Uniform double in [0, 1) from the top 53 bits. */
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/* Box-Muller; both variates of a pair are returned. */
struct NormalPair {
    double first;
    double second;
};

NormalPair box_muller(Rng& rng);

/* Standard normal stream that caches the second Box-Muller variate. */
class GaussianSource {
public:
    explicit GaussianSource(Rng& rng) : rng_(rng) {}

    double operator()();

private:
    Rng& rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cfal

#endif
