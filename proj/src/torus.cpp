#include "lrc/torus.hpp"

#include <algorithm>
#include <cmath>

namespace lrc {

std::uint64_t TorusSpec::volume() const {
    std::uint64_t n = 1;
    for (int i = 0; i < d; ++i) n *= static_cast<std::uint64_t>(m);
    return n;
}

void TorusSpec::validate() const {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("torus: dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    if (m < 2) throw std::invalid_argument("torus: side length must be >= 2");
    if (!(norm_p >= 1.0)) throw std::invalid_argument("torus: norm selector must satisfy p >= 1");
    double vol = std::pow(static_cast<double>(m), d);
    if (vol > 2147483647.0) throw std::invalid_argument("torus: volume m^d exceeds the 32-bit vertex index range");
}

namespace {

std::int32_t mod_reduce(std::int64_t x, std::int64_t m) {
    std::int64_t r = x % m;
    if (r < 0) r += m;
    return static_cast<std::int32_t>(r);
}

} // namespace

Coords wrap(const Coords& raw, const TorusSpec& spec) {
    Coords out{};
    for (int i = 0; i < spec.d; ++i) out[i] = mod_reduce(raw[i], spec.m);
    return out;
}

Coords wrap(const std::vector<std::int64_t>& raw, const TorusSpec& spec) {
    if (static_cast<int>(raw.size()) != spec.d)
        throw std::invalid_argument("wrap: coordinate tuple has length " + std::to_string(raw.size()) +
                                    ", expected " + std::to_string(spec.d));
    Coords out{};
    for (int i = 0; i < spec.d; ++i) out[i] = mod_reduce(raw[i], spec.m);
    return out;
}

Vertex vertex_of(const Coords& c, const TorusSpec& spec) {
    std::uint64_t id = 0;
    for (int i = spec.d - 1; i >= 0; --i) id = id * static_cast<std::uint64_t>(spec.m) + static_cast<std::uint64_t>(c[i]);
    return static_cast<Vertex>(id);
}

Coords coords_of(Vertex v, const TorusSpec& spec) {
    Coords c{};
    std::uint64_t rest = v;
    for (int i = 0; i < spec.d; ++i) {
        c[i] = static_cast<std::int32_t>(rest % static_cast<std::uint64_t>(spec.m));
        rest /= static_cast<std::uint64_t>(spec.m);
    }
    return c;
}

double torus_distance(const Coords& u, const Coords& v, const TorusSpec& spec) {
    double acc = 0.0;
    const bool sup = spec.norm_p == kNormInf;
    for (int i = 0; i < spec.d; ++i) {
        std::int32_t delta = u[i] - v[i];
        if (delta < 0) delta = -delta;
        const std::int32_t wrapped = std::min(delta, spec.m - delta);
        if (sup) {
            acc = std::max(acc, static_cast<double>(wrapped));
        } else if (spec.norm_p == 1.0) {
            acc += wrapped;
        } else if (spec.norm_p == 2.0) {
            acc += static_cast<double>(wrapped) * static_cast<double>(wrapped);
        } else {
            acc += std::pow(static_cast<double>(wrapped), spec.norm_p);
        }
    }
    if (sup || spec.norm_p == 1.0) return acc;
    if (spec.norm_p == 2.0) return std::sqrt(acc);
    return std::pow(acc, 1.0 / spec.norm_p);
}

double torus_distance(Vertex u, Vertex v, const TorusSpec& spec) {
    return torus_distance(coords_of(u, spec), coords_of(v, spec), spec);
}

double origin_distance(Vertex v, const TorusSpec& spec) {
    static const Coords origin{};
    return torus_distance(coords_of(v, spec), origin, spec);
}

std::vector<std::pair<Coords, double>> nearest_nonzero(const TorusSpec& spec, std::uint64_t k) {
    spec.validate();
    const std::uint64_t n = spec.volume();
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("nearest_nonzero: k must be in [1, m^d - 1]");

    std::vector<std::pair<Coords, double>> pts;
    pts.reserve(n - 1);
    for (Vertex v = 1; v < n; ++v) {
        Coords c = coords_of(v, spec);
        pts.emplace_back(c, origin_distance(v, spec));
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    pts.resize(k);
    return pts;
}

} // namespace lrc
