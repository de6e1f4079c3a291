#pragma once

#include <span>

#include "lrc/engine.hpp"

namespace lrc {

inline constexpr std::uint32_t kOracleCap = 4096;

// Exact jump-chain engine with full pairwise rates. Every susceptible vertex
// carries cached kernel sums toward the two infected sets; one step draws the
// waiting time, then the vertex, then its type, and refreshes the caches
// incrementally in O(n). Quadratic overall, meant for cross-validation at
// small n.
class GillespieEngine {
public:
    struct StepEvent {
        Vertex vertex = 0;
        Owner type = Owner::minus;
        double dt = 0.0;
    };

    // rate_scale multiplies every spreading rate; the jump chain is invariant
    // under it and times scale by its inverse.
    GillespieEngine(const RunContext& ctx, Rng& rng, double rate_scale = 1.0);

    bool covered() const { return susceptible_.empty(); }
    StepEvent step();

    const InfectionState& state() const { return state_; }
    Vertex source_minus() const { return source_minus_; }
    Vertex source_plus() const { return source_plus_; }

    // recomputes the per-vertex kernel sums from scratch and compares
    bool verify_caches(double rel_tol = 1e-9) const;

    RunResult run(std::span<const double> checkpoint_times = {});

private:
    void infect(Vertex v, Owner type);
    double weight_of(Vertex v) const { return cum_minus_[v] + cum_plus_[v]; }
    void recompute_total();

    const RunContext* ctx_;
    Rng* rng_;
    double rate_scale_;
    InfectionState state_;
    Vertex source_minus_ = 0, source_plus_ = 0;
    std::vector<double> cum_minus_, cum_plus_;
    std::vector<Vertex> susceptible_;
    std::vector<std::uint32_t> pos_; // index of each vertex in susceptible_
    double total_weight_ = 0.0;
    std::uint64_t steps_ = 0;
};

// Runs the oracle engine to cover. Throws when n exceeds the oracle cap,
// signalling that the coupled engine should be used instead.
RunResult gillespie_run(const RunContext& ctx, std::uint64_t stream_seed,
                        std::span<const double> checkpoint_times = {},
                        std::uint32_t oracle_cap = kOracleCap);

} // namespace lrc
