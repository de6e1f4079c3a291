#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lrc {

inline constexpr int kMaxDim = 4;
inline constexpr double kNormInf = std::numeric_limits<double>::infinity();

// Discrete torus (Z mod m)^d with a periodic l^p metric. m >= 2; p in
// [1, inf]. Volume n = m^d must fit a 32-bit vertex index.
struct TorusSpec {
    int d = 1;
    int m = 2;
    double norm_p = 2.0;

    std::uint64_t volume() const;
    void validate() const;

    bool operator==(const TorusSpec&) const = default;
};

// Canonical coordinates: each entry in [0, m); entries beyond d are zero.
using Coords = std::array<std::int32_t, kMaxDim>;

// Flat vertex index in [0, m^d), coordinate 0 varying fastest.
using Vertex = std::uint32_t;

Coords wrap(const Coords& raw, const TorusSpec& spec);
Coords wrap(const std::vector<std::int64_t>& raw, const TorusSpec& spec);

Vertex vertex_of(const Coords& c, const TorusSpec& spec);
Coords coords_of(Vertex v, const TorusSpec& spec);

// Minimal-wrap l^p distance: each coordinate difference is reduced to
// min(|delta|, m - |delta|) before aggregating.
double torus_distance(const Coords& u, const Coords& v, const TorusSpec& spec);
double torus_distance(Vertex u, Vertex v, const TorusSpec& spec);

// Distance from the origin to vertex id v (v may be 0, giving 0).
double origin_distance(Vertex v, const TorusSpec& spec);

// The k non-origin lattice points closest to the origin, sorted by
// nondecreasing distance, ties broken lexicographically on canonical
// coordinates. Requires 1 <= k <= m^d - 1.
std::vector<std::pair<Coords, double>> nearest_nonzero(const TorusSpec& spec, std::uint64_t k);

} // namespace lrc
