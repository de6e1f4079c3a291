#include "lrc/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace lrc {

RunContext make_run_context(const ModelParams& params) {
    params.validate();
    RunContext ctx;
    ctx.params = params;
    ctx.n = static_cast<std::uint32_t>(params.n());
    ctx.alpha_minus = params.alpha_minus.eval(ctx.n);
    ctx.alpha_plus = params.alpha_plus.eval(ctx.n);
    ctx.lambda = params.lambda.eval(ctx.n);

    NeighborDistances table(params.spec);
    ctx.rates = total_rates(params, table);

    ctx.coords.resize(ctx.n);
    for (Vertex v = 0; v < ctx.n; ++v) ctx.coords[v] = coords_of(v, params.spec);

    ctx.kernel_minus.assign(ctx.n, 0.0);
    ctx.kernel_plus.assign(ctx.n, 0.0);
    for (Vertex v = 1; v < ctx.n; ++v) {
        const double dist = origin_distance(v, params.spec);
        ctx.kernel_minus[v] = std::pow(dist, -ctx.alpha_minus);
        ctx.kernel_plus[v] = ctx.lambda * std::pow(dist, -ctx.alpha_plus);
    }

    ctx.disp_minus = displacement_table(params, TypeTag::minus);
    ctx.disp_plus = displacement_table(params, TypeTag::plus);
    return ctx;
}

std::pair<Vertex, Vertex> resolve_sources(const RunContext& ctx, Rng& rng) {
    const TorusSpec& spec = ctx.params.spec;
    switch (ctx.params.placement) {
        case Placement::antipodal: {
            Coords far{};
            for (int i = 0; i < spec.d; ++i) far[i] = spec.m / 2;
            return {vertex_of(Coords{}, spec), vertex_of(far, spec)};
        }
        case Placement::explicit_sources:
            return {vertex_of(wrap(ctx.params.source_minus, spec), spec),
                    vertex_of(wrap(ctx.params.source_plus, spec), spec)};
        case Placement::uniform_distinct: {
            const Vertex a = static_cast<Vertex>(rng.next_below(ctx.n));
            Vertex b = static_cast<Vertex>(rng.next_below(ctx.n - 1));
            if (b >= a) ++b;
            return {a, b};
        }
    }
    throw std::logic_error("unreachable placement");
}

} // namespace lrc
