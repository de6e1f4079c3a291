#include "lrc/urn.hpp"

#include <stdexcept>

namespace lrc {

UrnState urn_step(UrnState state, Rng& rng) {
    if (!(state.z > 0.0)) throw std::invalid_argument("urn: z must be positive");
    const double bm = state.b_minus();
    if (rng.next_unit() < bm / (bm + state.b_plus())) {
        ++state.picks_minus;
    } else {
        ++state.picks_plus;
    }
    return state;
}

std::pair<std::uint64_t, std::uint64_t> urn_run(std::uint64_t n, double z, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("urn run: need n >= 3");
    if (!(z > 0.0)) throw std::invalid_argument("urn run: z must be positive");
    Rng rng(seed);
    UrnState state{z, 0, 0};
    for (std::uint64_t i = 0; i + 2 < n; ++i) state = urn_step(state, rng);
    return {1 + state.picks_minus, 1 + state.picks_plus};
}

} // namespace lrc
