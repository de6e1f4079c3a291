#pragma once

#include <cstdint>
#include <utility>

#include "lrc/rng.hpp"

namespace lrc {

// Two-color urn with replacement diag(1, z): a draw lands on the first color
// with probability proportional to its mass and adds 1 there, otherwise adds
// z to the second color. Masses are kept as exact integer draw counts so that
// b_plus / z is an integer even for fractional z.
struct UrnState {
    double z = 1.0;
    std::uint64_t picks_minus = 0; // number of draws won by the first color
    std::uint64_t picks_plus = 0;

    double b_minus() const { return 1.0 + static_cast<double>(picks_minus); }
    double b_plus() const { return z * (1.0 + static_cast<double>(picks_plus)); }
    std::uint64_t draws() const { return picks_minus + picks_plus; }
};

UrnState urn_step(UrnState state, Rng& rng);

// The alpha = 0 competition in urn form: start at masses (1, z), perform
// n - 2 draws, and report (b_minus, b_plus / z) — two positive integers
// summing to n. Requires n >= 3 and z >= 1.
std::pair<std::uint64_t, std::uint64_t> urn_run(std::uint64_t n, double z, std::uint64_t seed);

} // namespace lrc
