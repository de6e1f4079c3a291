#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lrc {

// Mixes (master_seed, run_index) into a stream seed with a splitmix64-style
// finalizer. Bit-exact by definition: any reimplementation that follows these
// three xor-shift/multiply rounds reproduces the same streams.
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t run_index) {
    std::uint64_t z = master_seed + (run_index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Random stream wrapper. All variate transforms are spelled out here instead
// of going through std::*_distribution so that a stream seed plus the engine
// name ("mt19937_64") pins the exact sample sequence across implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform on [0,1), 53-bit resolution
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on (0,1]
    double next_unit_pos() { return 1.0 - next_unit(); }

    double next_exponential(double rate) { return -std::log(next_unit_pos()) / rate; }

    bool next_bernoulli(double p) { return next_unit() < p; }

    // uniform integer in [0, bound), unbiased via rejection
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t residue = (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
        const std::uint64_t zone = std::numeric_limits<std::uint64_t>::max() - residue;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r > zone);
        return r % bound;
    }

    static constexpr const char* family() { return "mt19937_64"; }

private:
    std::mt19937_64 gen_;
};

} // namespace lrc
