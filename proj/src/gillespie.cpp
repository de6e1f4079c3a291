#include "lrc/gillespie.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace lrc {

GillespieEngine::GillespieEngine(const RunContext& ctx, Rng& rng, double rate_scale)
    : ctx_(&ctx), rng_(&rng), rate_scale_(rate_scale) {
    const std::uint32_t n = ctx.n;
    state_.owner.assign(n, static_cast<std::uint8_t>(Owner::susceptible));
    auto [sm, sp] = resolve_sources(ctx, rng);
    source_minus_ = sm;
    source_plus_ = sp;
    state_.owner[sm] = static_cast<std::uint8_t>(Owner::minus);
    state_.owner[sp] = static_cast<std::uint8_t>(Owner::plus);
    state_.count_minus = 1;
    state_.count_plus = 1;

    cum_minus_.assign(n, 0.0);
    cum_plus_.assign(n, 0.0);
    pos_.assign(n, 0);
    susceptible_.reserve(n - 2);
    for (Vertex v = 0; v < n; ++v) {
        if (state_.owner_of(v) != Owner::susceptible) continue;
        cum_minus_[v] = ctx.kernel_minus[ctx.displacement_id(sm, v)];
        cum_plus_[v] = ctx.kernel_plus[ctx.displacement_id(sp, v)];
        pos_[v] = static_cast<std::uint32_t>(susceptible_.size());
        susceptible_.push_back(v);
    }
    recompute_total();
}

void GillespieEngine::recompute_total() {
    double sum = 0.0, carry = 0.0;
    for (Vertex v : susceptible_) {
        const double y = weight_of(v) - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    total_weight_ = sum;
}

GillespieEngine::StepEvent GillespieEngine::step() {
    if (covered()) throw std::logic_error("gillespie step: no susceptible vertex remains");
    if ((steps_ & 0xffu) == 0xffu) recompute_total(); // curb incremental drift

    StepEvent ev;
    ev.dt = rng_->next_exponential(rate_scale_ * total_weight_ / ctx_->rates.r_minus);
    state_.time += ev.dt;

    // vertex proportional to its combined kernel weight
    const double x = rng_->next_unit() * total_weight_;
    double acc = 0.0;
    Vertex chosen = susceptible_.back();
    for (Vertex v : susceptible_) {
        acc += weight_of(v);
        if (acc > x) {
            chosen = v;
            break;
        }
    }
    ev.vertex = chosen;

    const double w = weight_of(chosen);
    ev.type = rng_->next_unit() < cum_minus_[chosen] / w ? Owner::minus : Owner::plus;
    infect(chosen, ev.type);
    ++steps_;
    return ev;
}

void GillespieEngine::infect(Vertex v, Owner type) {
    assert(state_.owner_of(v) == Owner::susceptible);
    state_.owner[v] = static_cast<std::uint8_t>(type);
    if (type == Owner::minus)
        ++state_.count_minus;
    else
        ++state_.count_plus;

    const std::uint32_t at = pos_[v];
    susceptible_[at] = susceptible_.back();
    pos_[susceptible_[at]] = at;
    susceptible_.pop_back();
    total_weight_ -= weight_of(v);

    const auto& kernel = type == Owner::minus ? ctx_->kernel_minus : ctx_->kernel_plus;
    auto& cum = type == Owner::minus ? cum_minus_ : cum_plus_;
    double added = 0.0;
    for (Vertex u : susceptible_) {
        const double delta = kernel[ctx_->displacement_id(v, u)];
        cum[u] += delta;
        added += delta;
    }
    total_weight_ += added;
}

bool GillespieEngine::verify_caches(double rel_tol) const {
    for (Vertex u : susceptible_) {
        double m = 0.0, p = 0.0;
        for (Vertex v = 0; v < ctx_->n; ++v) {
            if (state_.owner_of(v) == Owner::minus) m += ctx_->kernel_minus[ctx_->displacement_id(v, u)];
            if (state_.owner_of(v) == Owner::plus) p += ctx_->kernel_plus[ctx_->displacement_id(v, u)];
        }
        if (std::abs(m - cum_minus_[u]) > rel_tol * std::max(1.0, std::abs(m))) return false;
        if (std::abs(p - cum_plus_[u]) > rel_tol * std::max(1.0, std::abs(p))) return false;
    }
    return true;
}

RunResult GillespieEngine::run(std::span<const double> checkpoint_times) {
    RunResult res;
    std::size_t next_cp = 0;
    while (!covered()) {
        const std::uint32_t before_minus = state_.count_minus;
        const std::uint32_t before_plus = state_.count_plus;
        step();
        // a checkpoint at time t reports the state just before the first
        // event past t
        while (next_cp < checkpoint_times.size() && checkpoint_times[next_cp] < state_.time) {
            res.checkpoints.push_back({checkpoint_times[next_cp], before_minus, before_plus});
            ++next_cp;
        }
        ++res.proposals;
    }
    while (next_cp < checkpoint_times.size()) {
        res.checkpoints.push_back({checkpoint_times[next_cp], state_.count_minus, state_.count_plus});
        ++next_cp;
    }
    res.n_minus = state_.count_minus;
    res.n_plus = state_.count_plus;
    res.m_n = std::min(res.n_minus, res.n_plus);
    res.t_cov = state_.time;
    res.d = ctx_->params.spec.d;
    res.m = ctx_->params.spec.m;
    res.n = ctx_->n;
    res.z = ctx_->rates.z;
    res.c_n = ctx_->rates.c;
    res.engine = EngineKind::oracle;
    return res;
}

RunResult gillespie_run(const RunContext& ctx, std::uint64_t stream_seed,
                        std::span<const double> checkpoint_times, std::uint32_t oracle_cap) {
    if (ctx.n > oracle_cap)
        throw std::invalid_argument("oracle engine: n exceeds the oracle cap (" + std::to_string(oracle_cap) +
                                    "); use the coupled engine");
    Rng rng(stream_seed);
    GillespieEngine engine(ctx, rng);
    RunResult res = engine.run(checkpoint_times);
    res.stream_seed = stream_seed;
    return res;
}

} // namespace lrc
