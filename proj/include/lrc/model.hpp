#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lrc/param_family.hpp"
#include "lrc/torus.hpp"

namespace lrc {

enum class Placement { antipodal, uniform_distinct, explicit_sources };

enum class EngineKind { coupled, oracle };

inline std::string to_string(Placement p) {
    switch (p) {
        case Placement::antipodal: return "antipodal";
        case Placement::uniform_distinct: return "uniform-distinct";
        case Placement::explicit_sources: return "explicit";
    }
    return "?";
}

inline std::string to_string(EngineKind e) {
    return e == EngineKind::coupled ? "coupled" : "oracle";
}

// One competition instance: the torus, the two long-range exponents, the
// intensity of the second type (the first type always has intensity one),
// and where the two seeds sit.
struct ModelParams {
    TorusSpec spec;
    ParamFamily alpha_minus = ParamFamily::constant(0.0);
    ParamFamily alpha_plus = ParamFamily::constant(0.0);
    ParamFamily lambda = ParamFamily::constant(1.0);
    Placement placement = Placement::antipodal;
    Coords source_minus{};
    Coords source_plus{};

    std::uint64_t n() const { return spec.volume(); }

    // Structural checks only: rate tables are well-defined for any
    // alpha >= 0.
    void validate_basic() const {
        spec.validate();
        const std::uint64_t nn = n();
        if (!(alpha_minus.eval(nn) >= 0.0)) throw std::invalid_argument("alpha_minus must be >= 0");
        if (!(alpha_plus.eval(nn) >= 0.0)) throw std::invalid_argument("alpha_plus must be >= 0");
        if (!(lambda.eval(nn) > 0.0)) throw std::invalid_argument("lambda must be positive");
        if (placement == Placement::explicit_sources && source_minus == source_plus)
            throw std::invalid_argument("source vertices must be distinct");
    }

    // Full check including the exponent assumption the competition dynamics
    // rely on. Throws when an alpha reaches d.
    void validate() const {
        validate_basic();
        const std::uint64_t nn = n();
        if (alpha_minus.eval(nn) >= spec.d) throw std::invalid_argument("alpha_minus must lie in [0, d)");
        if (alpha_plus.eval(nn) >= spec.d) throw std::invalid_argument("alpha_plus must lie in [0, d)");
    }
};

enum class Regime { coexistence, case_i, case_ii, case_iii, case_iv, indeterminate };

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::coexistence: return "coexistence";
        case Regime::case_i: return "case-i";
        case Regime::case_ii: return "case-ii";
        case Regime::case_iii: return "case-iii";
        case Regime::case_iv: return "case-iv";
        case Regime::indeterminate: return "indeterminate";
    }
    return "?";
}

// Total spreading rates of the two types and the derived quantities that
// control the phase behaviour: z = r_plus / r_minus and c = (z - 1) log n.
struct RateSummary {
    double r_minus = 0.0;
    double r_plus = 0.0;
    double z = 1.0;
    double c = 0.0;
    Regime regime = Regime::indeterminate;
};

} // namespace lrc
