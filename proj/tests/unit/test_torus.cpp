#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lrc/torus.hpp"

using namespace lrc;

namespace {

// independent brute-force distance: wraps each coordinate difference by hand
double brute_distance(const std::vector<int>& u, const std::vector<int>& v, int m, double p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        int delta = std::abs(u[i] - v[i]);
        delta = std::min(delta, m - delta);
        if (p == kNormInf)
            acc = std::max(acc, static_cast<double>(delta));
        else
            acc += std::pow(static_cast<double>(delta), p);
    }
    return p == kNormInf ? acc : std::pow(acc, 1.0 / p);
}

// enumerates every nonzero point of (Z mod m)^d by nested counting
std::vector<std::vector<int>> all_nonzero_points(int d, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    while (true) {
        int axis = 0;
        while (axis < d && ++cur[static_cast<std::size_t>(axis)] == m) {
            cur[static_cast<std::size_t>(axis)] = 0;
            ++axis;
        }
        if (axis == d) break;
        out.push_back(cur);
    }
    return out;
}

Coords as_coords(const std::vector<int>& v) {
    Coords c{};
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i];
    return c;
}

} // namespace

TEST_CASE("wrap reduces coordinates into the canonical range") {
    TorusSpec spec1{1, 5, 2.0};
    CHECK(wrap(Coords{7}, spec1) == Coords{2});
    TorusSpec spec2{2, 5, 2.0};
    CHECK(wrap(Coords{0, 0}, spec2) == Coords{0, 0});
    CHECK(wrap(Coords{-1, 5}, spec2) == Coords{4, 0});
    // idempotent
    CHECK(wrap(wrap(Coords{-7, 13}, spec2), spec2) == wrap(Coords{-7, 13}, spec2));
    CHECK_THROWS_AS(wrap(std::vector<std::int64_t>{1, 2, 3}, spec2), std::invalid_argument);
}

TEST_CASE("flat indices and coordinates are inverse") {
    TorusSpec spec{3, 4, 2.0};
    for (Vertex v = 0; v < spec.volume(); ++v) CHECK(vertex_of(coords_of(v, spec), spec) == v);
}

TEST_CASE("minimal-wrap distances match the stated examples") {
    CHECK(torus_distance(Coords{0}, Coords{4}, TorusSpec{1, 5, 1.0}) == doctest::Approx(1.0));
    CHECK(torus_distance(Coords{0, 0}, Coords{3, 4}, TorusSpec{2, 5, 1.0}) == doctest::Approx(3.0));
    CHECK(torus_distance(Coords{0, 0}, Coords{2, 2}, TorusSpec{2, 4, kNormInf}) == doctest::Approx(2.0));
}

TEST_CASE("distance is a translation-invariant metric on small tori") {
    for (int d = 1; d <= 3; ++d) {
        for (int m : {2, 3, 5, 6}) {
            for (double p : {1.0, 2.0, 3.5, kNormInf}) {
                TorusSpec spec{d, m, p};
                const Vertex n = static_cast<Vertex>(spec.volume());
                for (Vertex a = 0; a < n; ++a) {
                    for (Vertex b = a; b < n; ++b) {
                        const double ab = torus_distance(a, b, spec);
                        CHECK(ab == torus_distance(b, a, spec));
                        if (a == b)
                            CHECK(ab == 0.0);
                        else
                            CHECK(ab > 0.0);
                        // diameter bound
                        const double diam =
                            p == kNormInf ? m / 2.0 : std::pow(d, 1.0 / p) * m / 2.0;
                        CHECK(ab <= diam + 1e-12);
                    }
                }
                // translation invariance, spot-checked shifts
                for (Vertex w : {Vertex{1}, static_cast<Vertex>(n / 2), static_cast<Vertex>(n - 1)}) {
                    const Coords wc = coords_of(w, spec);
                    for (Vertex a = 0; a < n; a += 3) {
                        for (Vertex b = 0; b < n; b += 2) {
                            Coords ac = coords_of(a, spec), bc = coords_of(b, spec);
                            Coords at{}, bt{};
                            for (int i = 0; i < d; ++i) {
                                at[i] = (ac[i] + wc[i]) % m;
                                bt[i] = (bc[i] + wc[i]) % m;
                            }
                            CHECK(torus_distance(ac, bc, spec) ==
                                  doctest::Approx(torus_distance(at, bt, spec)));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("nearest_nonzero distances match the stated examples") {
    auto d1 = nearest_nonzero(TorusSpec{1, 5, 2.0}, 4);
    REQUIRE(d1.size() == 4);
    CHECK(d1[0].second == doctest::Approx(1.0));
    CHECK(d1[1].second == doctest::Approx(1.0));
    CHECK(d1[2].second == doctest::Approx(2.0));
    CHECK(d1[3].second == doctest::Approx(2.0));

    auto d2 = nearest_nonzero(TorusSpec{2, 3, 1.0}, 4);
    for (const auto& [pt, dist] : d2) CHECK(dist == doctest::Approx(1.0));

    // sup-norm neighbors on the 5x5 torus: brute-force over all 24 nonzero
    // points says exactly eight sit at distance 1
    const TorusSpec spec{2, 5, kNormInf};
    auto pts = all_nonzero_points(2, 5);
    REQUIRE(pts.size() == 24);
    std::vector<double> brute;
    for (const auto& pt : pts) brute.push_back(brute_distance(pt, {0, 0}, 5, kNormInf));
    std::sort(brute.begin(), brute.end());
    CHECK(std::count(brute.begin(), brute.end(), 1.0) == 8);

    auto d3 = nearest_nonzero(spec, 8);
    for (const auto& [pt, dist] : d3) CHECK(dist == doctest::Approx(1.0));
}

TEST_CASE("nearest_nonzero agrees with a full brute-force sort") {
    for (int d = 1; d <= 3; ++d) {
        for (int m : {2, 4, 7}) {
            const TorusSpec spec{d, m, 2.0};
            const std::uint64_t k = spec.volume() - 1;
            auto got = nearest_nonzero(spec, k);
            auto pts = all_nonzero_points(d, m);
            std::vector<double> brute;
            std::vector<int> origin(static_cast<std::size_t>(d), 0);
            for (const auto& pt : pts) brute.push_back(brute_distance(pt, origin, m, 2.0));
            std::sort(brute.begin(), brute.end());
            REQUIRE(got.size() == brute.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].second == doctest::Approx(brute[i]));
                if (i > 0) CHECK(got[i].second >= got[i - 1].second);
            }
            // deterministic lexicographic tie-break
            for (std::size_t i = 1; i < got.size(); ++i) {
                if (got[i].second == got[i - 1].second) CHECK(got[i - 1].first < got[i].first);
            }
        }
    }
}

TEST_CASE("nearest_nonzero rejects out-of-range counts") {
    CHECK_THROWS_AS(nearest_nonzero(TorusSpec{1, 5, 2.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(nearest_nonzero(TorusSpec{1, 5, 2.0}, 5), std::invalid_argument);
}

TEST_CASE("torus spec validation") {
    CHECK_THROWS_AS((TorusSpec{0, 5, 2.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((TorusSpec{1, 1, 2.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((TorusSpec{1, 5, 0.5}.validate()), std::invalid_argument);
    CHECK_NOTHROW((TorusSpec{2, 1000, kNormInf}.validate()));
}
