#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace lrc {

// A scalar model parameter as a function of the instance volume n. The
// supported shapes cover constants, the log / log^2 / power growth families
// used by the phase scenarios, and an explicit n -> value table for anything
// else.
struct ParamFamily {
    enum class Kind { constant, affine_log, log_squared, power, table };

    Kind kind = Kind::constant;
    double a = 0.0;
    double b = 0.0;
    std::map<std::uint64_t, double> values; // kind == table

    static ParamFamily constant(double c) { return {Kind::constant, c, 0.0, {}}; }
    static ParamFamily affine_log(double a, double b) { return {Kind::affine_log, a, b, {}}; }
    static ParamFamily log_squared(double a, double b) { return {Kind::log_squared, a, b, {}}; }
    static ParamFamily power(double a, double b) { return {Kind::power, a, b, {}}; }
    static ParamFamily table(std::map<std::uint64_t, double> v) { return {Kind::table, 0.0, 0.0, std::move(v)}; }

    double eval(std::uint64_t n) const {
        const double logn = std::log(static_cast<double>(n));
        switch (kind) {
            case Kind::constant: return a;
            case Kind::affine_log: return a + b * logn;
            case Kind::log_squared: return a + b * logn * logn;
            case Kind::power: return a * std::pow(static_cast<double>(n), b);
            case Kind::table: {
                auto it = values.find(n);
                if (it == values.end())
                    throw std::invalid_argument("param family table has no entry for n=" + std::to_string(n));
                return it->second;
            }
        }
        throw std::logic_error("unreachable param family kind");
    }

    std::string kind_name() const {
        switch (kind) {
            case Kind::constant: return "constant";
            case Kind::affine_log: return "affine-log";
            case Kind::log_squared: return "log-squared";
            case Kind::power: return "power";
            case Kind::table: return "table";
        }
        return "?";
    }

    bool operator==(const ParamFamily&) const = default;
};

} // namespace lrc
