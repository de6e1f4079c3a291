#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lrc/alias_table.hpp"
#include "lrc/model.hpp"
#include "lrc/torus.hpp"

namespace lrc {

enum class TypeTag { minus, plus };

inline std::string to_string(TypeTag t) { return t == TypeTag::minus ? "minus" : "plus"; }

// Origin distances of all nonzero vertices of one ambient torus, sorted
// ascending. Immutable after construction; shareable across threads.
class NeighborDistances {
public:
    explicit NeighborDistances(const TorusSpec& spec);

    const TorusSpec& spec() const { return spec_; }
    std::uint64_t count() const { return dists_.size(); }

    // Sum of d_i^(-alpha) over the j closest nonzero vertices, accumulated in
    // nondecreasing-distance order with Kahan compensation.
    double partial_sum(std::uint64_t j, double alpha) const;

private:
    TorusSpec spec_;
    std::vector<double> dists_;
};

// Sum over the j nonzero vertices closest to the origin of the ambient torus.
// Requires 1 <= j <= m^d - 1 and alpha < d.
double partial_rate_sum(std::uint64_t j, double alpha, const TorusSpec& ambient);

// Rate sum at volume n under the nearest-vertex convention: the ambient side
// is the smallest M with M^d >= n and the sum runs over the n-1 closest
// nonzero vertices. For perfect powers this is the plain full-torus sum.
double rate_sum(std::uint64_t n, double alpha, int d, double norm_p);

// Smallest M with M^d >= n.
int ambient_side(std::uint64_t n, int d);

RateSummary total_rates(const ModelParams& params);
RateSummary total_rates(const ModelParams& params, const NeighborDistances& table);

// Limit of R_n(alpha) / n^(1 - alpha/d): 2^d times the integral of the
// inverse-alpha-powered p-norm over [0, 1/2]^d, evaluated to relative error
// 1e-4. The integrable singularity at the origin is resolved exactly by the
// self-similarity of the integrand over dyadic shells. Requires 0 <= alpha < d.
double limit_constant(double alpha, int d, double norm_p);

struct RegimePoint {
    std::uint64_t n = 0;
    double z = 1.0;
    double c = 0.0;
};

struct RegimeReport {
    Regime regime = Regime::indeterminate;
    std::vector<RegimePoint> series;
    bool approximate = false; // some z values used the large-n limit form
};

// Finite-n proxy for the asymptotic trichotomy of c_n = (Z_n - 1) log n over
// an increasing grid of at least 3 volumes. A ratio counts as "diverging" if
// it at least doubles across the grid and as "bounded" if its range stays
// within 20% of its maximum; anything else is labeled indeterminate.
RegimeReport classify_regime(const ParamFamily& alpha_minus, const ParamFamily& alpha_plus,
                             const ParamFamily& lambda, int d, double norm_p,
                             std::span<const std::uint64_t> n_grid);

// Displacement distribution of one type: probabilities over the n-1 nonzero
// displacement vectors (index = flat vertex id, entry 0 unused) plus a
// constant-time two-table sampler.
struct DisplacementTable {
    std::vector<double> probs;
    AliasTable sampler;
    double total_rate = 0.0; // unnormalized kernel sum of this type

    Vertex sample(Rng& rng) const { return static_cast<Vertex>(sampler.sample(rng) + 1); }
};

DisplacementTable displacement_table(const ModelParams& params, TypeTag type);

} // namespace lrc
