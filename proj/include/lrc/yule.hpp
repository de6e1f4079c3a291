#pragma once

#include <cstdint>
#include <vector>

#include "lrc/rng.hpp"

namespace lrc {

// Size of a rate-sigma pure-birth process at age t: one exact geometric draw
// with success parameter exp(-sigma * t), via inverse CDF. Saturates at
// int64 max when the implied size overflows.
std::int64_t yule_size(double sigma, double t, Rng& rng);

// p (1-p)^(k-1) for k = 1, 2, ...
double geometric_pmf(double p, std::int64_t k);

struct YuleTrajectory {
    struct Event {
        double time;
        std::int64_t size;
    };
    std::vector<Event> events; // starts at (0, 1); one entry per birth
    double rate = 1.0;
    bool capped = false; // stopped because size_cap was hit
};

// Event-driven simulation: at size k, the next birth arrives after an
// exponential with rate sigma * k. Stops at t_max or size_cap.
YuleTrajectory yule_trajectory(double sigma, double t_max, std::int64_t size_cap, Rng& rng);

} // namespace lrc
