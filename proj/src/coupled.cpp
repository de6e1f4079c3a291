#include "lrc/coupled.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lrc/yule.hpp"

namespace lrc {

std::int64_t defect_size(const DefectLog& log, double t, TypeTag type, double z, Rng& rng) {
    if (!(t >= 0.0)) throw std::invalid_argument("defect size: time must be nonnegative");
    const auto& roots = type == TypeTag::minus ? log.roots_minus : log.roots_plus;
    const double sigma = type == TypeTag::minus ? 1.0 : z;
    std::int64_t total = 0;
    for (double tau : roots) {
        if (tau > t) break; // root times are nondecreasing
        const std::int64_t s = yule_size(sigma, t - tau, rng);
        if (total > std::numeric_limits<std::int64_t>::max() - s)
            return std::numeric_limits<std::int64_t>::max();
        total += s;
    }
    return total;
}

CoupledEngine::CoupledEngine(const RunContext& ctx, Rng& rng, double storm_constant)
    : ctx_(&ctx), rng_(&rng), storm_constant_(storm_constant) {
    const std::uint32_t n = ctx.n;
    state_.owner.assign(n, static_cast<std::uint8_t>(Owner::susceptible));
    auto [sm, sp] = resolve_sources(ctx, rng);
    source_minus_ = sm;
    source_plus_ = sp;
    state_.owner[sm] = static_cast<std::uint8_t>(Owner::minus);
    state_.owner[sp] = static_cast<std::uint8_t>(Owner::plus);
    state_.count_minus = 1;
    state_.count_plus = 1;
    members_minus_.push_back(sm);
    members_plus_.push_back(sp);

    pos_.assign(n, 0);
    susceptible_.reserve(n - 2);
    for (Vertex v = 0; v < n; ++v) {
        if (state_.owner_of(v) != Owner::susceptible) continue;
        pos_[v] = static_cast<std::uint32_t>(susceptible_.size());
        susceptible_.push_back(v);
    }
}

void CoupledEngine::infect(Vertex v, Owner type) {
    assert(state_.owner_of(v) == Owner::susceptible);
    state_.owner[v] = static_cast<std::uint8_t>(type);
    if (type == Owner::minus) {
        ++state_.count_minus;
        members_minus_.push_back(v);
    } else {
        ++state_.count_plus;
        members_plus_.push_back(v);
    }
    const std::uint32_t at = pos_[v];
    susceptible_[at] = susceptible_.back();
    pos_[susceptible_[at]] = at;
    susceptible_.pop_back();
}

Proposal CoupledEngine::propose() {
    if (covered()) throw std::logic_error("propose: no susceptible vertex remains");

    const double z = ctx_->rates.z;
    const double rate = static_cast<double>(state_.count_minus) + static_cast<double>(state_.count_plus) * z;
    state_.time += rng_->next_exponential(rate);

    Proposal prop;
    prop.time = state_.time;
    const double p_plus = static_cast<double>(state_.count_plus) * z / rate;
    prop.parent_type = rng_->next_unit() < p_plus ? Owner::plus : Owner::minus;

    const auto& members = prop.parent_type == Owner::minus ? members_minus_ : members_plus_;
    prop.parent = members[rng_->next_below(members.size())];

    const auto& disp = prop.parent_type == Owner::minus ? ctx_->disp_minus : ctx_->disp_plus;
    prop.target = ctx_->add_displacement(prop.parent, disp.sample(*rng_));

    ++proposals_;
    if (state_.owner_of(prop.target) == Owner::susceptible) {
        prop.accepted = true;
        infect(prop.target, prop.parent_type);
        consecutive_rejections_ = 0;
    } else {
        prop.accepted = false;
        ++rejections_;
        ++consecutive_rejections_;
        auto& roots = prop.parent_type == Owner::minus ? log_.roots_minus : log_.roots_plus;
        auto& capped = prop.parent_type == Owner::minus ? log_.capped_minus : log_.capped_plus;
        if (roots.size() < kDefectLogCap)
            roots.push_back(state_.time);
        else
            capped = true;
    }
    return prop;
}

// One step of the exact jump chain restricted to the susceptible set: kernel
// weights are recomputed from scratch, so this stays affordable only in the
// near-cover regime where it is triggered.
void CoupledEngine::exact_step() {
    const std::size_t s = susceptible_.size();
    std::vector<double> wm(s, 0.0), wp(s, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        const Vertex u = susceptible_[i];
        double m = 0.0, p = 0.0;
        for (Vertex v : members_minus_) m += ctx_->kernel_minus[ctx_->displacement_id(v, u)];
        for (Vertex v : members_plus_) p += ctx_->kernel_plus[ctx_->displacement_id(v, u)];
        wm[i] = m;
        wp[i] = p;
        total += m + p;
    }

    state_.time += rng_->next_exponential(total / ctx_->rates.r_minus);
    const double x = rng_->next_unit() * total;
    double acc = 0.0;
    std::size_t chosen = s - 1;
    for (std::size_t i = 0; i < s; ++i) {
        acc += wm[i] + wp[i];
        if (acc > x) {
            chosen = i;
            break;
        }
    }
    const Owner type = rng_->next_unit() < wm[chosen] / (wm[chosen] + wp[chosen]) ? Owner::minus : Owner::plus;
    ++proposals_; // an infection with certainty: counts as one accepted proposal
    infect(susceptible_[chosen], type);
    consecutive_rejections_ = 0;
}

RunResult CoupledEngine::run(std::span<const double> checkpoint_times) {
    RunResult res;
    std::size_t next_cp = 0;
    while (!covered()) {
        const std::uint32_t before_minus = state_.count_minus;
        const std::uint32_t before_plus = state_.count_plus;
        const double storm_threshold =
            storm_constant_ * static_cast<double>(ctx_->n) / static_cast<double>(susceptible_.size());
        if (static_cast<double>(consecutive_rejections_) > storm_threshold) {
            exact_step();
        } else {
            propose();
        }
        while (next_cp < checkpoint_times.size() && checkpoint_times[next_cp] < state_.time) {
            res.checkpoints.push_back({checkpoint_times[next_cp], before_minus, before_plus});
            ++next_cp;
        }
    }
    while (next_cp < checkpoint_times.size()) {
        res.checkpoints.push_back({checkpoint_times[next_cp], state_.count_minus, state_.count_plus});
        ++next_cp;
    }
    res.n_minus = state_.count_minus;
    res.n_plus = state_.count_plus;
    res.m_n = std::min(res.n_minus, res.n_plus);
    res.t_cov = state_.time;
    res.proposals = proposals_;
    res.rejections = rejections_;
    res.defect_capped = log_.capped_minus || log_.capped_plus;
    res.d = ctx_->params.spec.d;
    res.m = ctx_->params.spec.m;
    res.n = ctx_->n;
    res.z = ctx_->rates.z;
    res.c_n = ctx_->rates.c;
    res.engine = EngineKind::coupled;
    return res;
}

CoupledRunOutput coupled_run(const RunContext& ctx, std::uint64_t stream_seed,
                             std::span<const double> checkpoint_times, double phase_time) {
    Rng rng(stream_seed);
    CoupledEngine engine(ctx, rng);
    CoupledRunOutput out;
    out.result = engine.run(checkpoint_times);
    out.result.stream_seed = stream_seed;
    out.log = engine.defect_log();
    if (phase_time >= 0.0) {
        out.result.defect_minus_at_phase = defect_size(out.log, phase_time, TypeTag::minus, ctx.rates.z, rng);
        out.result.defect_plus_at_phase = defect_size(out.log, phase_time, TypeTag::plus, ctx.rates.z, rng);
    }
    return out;
}

} // namespace lrc
