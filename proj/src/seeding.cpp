#include "cfal/seeding.hpp"

#include <cmath>
#include <numbers>

namespace cfal {

NormalPair box_muller(Rng& rng)
{
    // 1 - u keeps the log argument in (0, 1]
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

double GaussianSource::operator()()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const auto pair = box_muller(rng_);
    spare_ = pair.second;
    has_spare_ = true;
    return pair.first;
}

}  // namespace cfal
