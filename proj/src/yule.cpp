#include "lrc/yule.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrc {

std::int64_t yule_size(double sigma, double t, Rng& rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("yule size: rate must be positive");
    if (!(t >= 0.0)) throw std::invalid_argument("yule size: age must be nonnegative");
    if (t == 0.0) return 1;
    const double p = std::exp(-sigma * t);
    const double u = rng.next_unit_pos();
    if (p >= 1.0) return 1;
    // inverse CDF of Geo(p) on {1, 2, ...}
    const double denom = std::log1p(-p);
    const double g = std::floor(std::log(u) / denom);
    if (!(g < 9.0e18)) return std::numeric_limits<std::int64_t>::max();
    return 1 + static_cast<std::int64_t>(g);
}

double geometric_pmf(double p, std::int64_t k) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("geometric pmf: p must lie in (0, 1]");
    if (k < 1) throw std::invalid_argument("geometric pmf: k must be >= 1");
    return p * std::pow(1.0 - p, static_cast<double>(k - 1));
}

YuleTrajectory yule_trajectory(double sigma, double t_max, std::int64_t size_cap, Rng& rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("yule trajectory: rate must be positive");
    if (size_cap < 1) throw std::invalid_argument("yule trajectory: size cap must be >= 1");
    YuleTrajectory traj;
    traj.rate = sigma;
    traj.events.push_back({0.0, 1});
    double t = 0.0;
    std::int64_t size = 1;
    while (size < size_cap) {
        t += rng.next_exponential(sigma * static_cast<double>(size));
        if (t > t_max) return traj;
        ++size;
        traj.events.push_back({t, size});
    }
    traj.capped = true;
    return traj;
}

} // namespace lrc
