#pragma once

#include <span>

#include "lrc/engine.hpp"

namespace lrc {

// Birth times of artificial roots: proposals by original particles that
// landed on an occupied site. Their subtrees never affect the infection sets,
// so defect sizes can be reconstructed afterwards from these times alone.
struct DefectLog {
    std::vector<double> roots_minus;
    std::vector<double> roots_plus;
    bool capped_minus = false;
    bool capped_plus = false;
};

inline constexpr std::size_t kDefectLogCap = std::size_t{1} << 22;

// One exact sample of the defect size at time t given the root log: every
// root born at tau <= t contributes an independent pure-birth size of age
// t - tau (rate 1 for the first type, z for the second). Saturating.
std::int64_t defect_size(const DefectLog& log, double t, TypeTag type, double z, Rng& rng);

struct Proposal {
    Owner parent_type = Owner::minus;
    Vertex parent = 0;
    Vertex target = 0;
    bool accepted = false;
    double time = 0.0;
};

// Fast engine: the competition as the original particles of two marked
// branching random walks. Original particles of the first type give birth at
// rate 1 and of the second type at rate z in rescaled time; a birth draws a
// displacement and is an infection if the site is free, otherwise an
// artificial root. A rejection storm near cover triggers a single exact step
// restricted to the susceptible set.
class CoupledEngine {
public:
    // storm_constant tunes the safeguard: an exact step fires after more than
    // storm_constant * n / #susceptible consecutive rejections
    CoupledEngine(const RunContext& ctx, Rng& rng, double storm_constant = 64.0);

    bool covered() const { return state_.covered() == ctx_->n; }
    Proposal propose();

    const InfectionState& state() const { return state_; }
    const DefectLog& defect_log() const { return log_; }
    std::uint64_t proposals() const { return proposals_; }
    std::uint64_t rejections() const { return rejections_; }
    Vertex source_minus() const { return source_minus_; }
    Vertex source_plus() const { return source_plus_; }

    RunResult run(std::span<const double> checkpoint_times = {});

private:
    void infect(Vertex v, Owner type);
    void exact_step();

    const RunContext* ctx_;
    Rng* rng_;
    double storm_constant_ = 64.0;
    InfectionState state_;
    Vertex source_minus_ = 0, source_plus_ = 0;
    std::vector<Vertex> members_minus_, members_plus_;
    std::vector<Vertex> susceptible_;
    std::vector<std::uint32_t> pos_;
    DefectLog log_;
    std::uint64_t proposals_ = 0;
    std::uint64_t rejections_ = 0;
    std::uint64_t consecutive_rejections_ = 0;
};

struct CoupledRunOutput {
    RunResult result;
    DefectLog log;
};

// Runs the coupled engine to cover. If phase_time >= 0, one defect sample per
// type at that time is drawn afterwards from the same stream and stored in
// the result.
CoupledRunOutput coupled_run(const RunContext& ctx, std::uint64_t stream_seed,
                             std::span<const double> checkpoint_times = {}, double phase_time = -1.0);

} // namespace lrc
