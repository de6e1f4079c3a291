#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lrc/model.hpp"
#include "lrc/rates.hpp"
#include "lrc/rng.hpp"
#include "lrc/torus.hpp"

namespace lrc {

enum class Owner : std::uint8_t { susceptible = 0, minus = 1, plus = 2 };

inline TypeTag tag_of(Owner o) { return o == Owner::minus ? TypeTag::minus : TypeTag::plus; }

// Occupancy of the torus at some time: the two infected sets (disjoint by
// construction) plus elapsed time in rescaled units (all rates divided by the
// total rate of the first type).
struct InfectionState {
    std::vector<std::uint8_t> owner;
    std::uint32_t count_minus = 0;
    std::uint32_t count_plus = 0;
    double time = 0.0;

    Owner owner_of(Vertex v) const { return static_cast<Owner>(owner[v]); }
    std::uint32_t covered() const { return count_minus + count_plus; }
};

struct CheckpointRecord {
    double time = 0.0;
    std::uint32_t count_minus = 0;
    std::uint32_t count_plus = 0;
};

// Terminal summary of one run. defect_*_at_phase are -1 unless the run was
// asked to sample the coupling defect at a phase time (coupled engine only).
struct RunResult {
    std::uint32_t n_minus = 0;
    std::uint32_t n_plus = 0;
    std::uint32_t m_n = 0;
    double t_cov = 0.0;
    std::vector<CheckpointRecord> checkpoints;
    std::uint64_t proposals = 0;
    std::uint64_t rejections = 0;
    std::int64_t defect_minus_at_phase = -1;
    std::int64_t defect_plus_at_phase = -1;
    bool defect_capped = false;
    std::uint64_t stream_seed = 0;
    // instance echo
    int d = 1;
    int m = 2;
    std::uint64_t n = 0;
    double z = 1.0;
    double c_n = 0.0;
    EngineKind engine = EngineKind::coupled;
};

// Immutable per-instance tables shared by every run of the same parameters:
// kernel rows by displacement id (the plus kernel carries lambda), the two
// displacement samplers, total rates, and coordinate lookups.
struct RunContext {
    ModelParams params;
    std::uint32_t n = 0;
    double alpha_minus = 0.0;
    double alpha_plus = 0.0;
    double lambda = 1.0;
    RateSummary rates;
    std::vector<double> kernel_minus; // index = displacement id, [0] = 0
    std::vector<double> kernel_plus;
    DisplacementTable disp_minus;
    DisplacementTable disp_plus;
    std::vector<Coords> coords; // coords[v]

    Vertex add_displacement(Vertex from, Vertex disp) const {
        const Coords& a = coords[from];
        const Coords& b = coords[disp];
        Coords c{};
        for (int i = 0; i < params.spec.d; ++i) {
            std::int32_t s = a[i] + b[i];
            if (s >= params.spec.m) s -= params.spec.m;
            c[i] = s;
        }
        return vertex_of(c, params.spec);
    }

    // id of (to - from) mod m
    Vertex displacement_id(Vertex from, Vertex to) const {
        const Coords& a = coords[from];
        const Coords& b = coords[to];
        Coords c{};
        for (int i = 0; i < params.spec.d; ++i) {
            std::int32_t s = b[i] - a[i];
            if (s < 0) s += params.spec.m;
            c[i] = s;
        }
        return vertex_of(c, params.spec);
    }
};

RunContext make_run_context(const ModelParams& params);

// Source vertices for one run. Antipodal and explicit placements are fixed by
// the parameters; uniform-distinct placement consumes the first draws of the
// run's stream.
std::pair<Vertex, Vertex> resolve_sources(const RunContext& ctx, Rng& rng);

} // namespace lrc
