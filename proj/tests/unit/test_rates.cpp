#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "lrc/rates.hpp"
#include "lrc/rng.hpp"

using namespace lrc;

namespace {

// enumeration oracle: sum of inverse-alpha-powered wrap distances over the j
// closest nonzero points, sorted by a plain full sort
double brute_partial_sum(std::uint64_t j, double alpha, const TorusSpec& spec) {
    std::vector<double> dists;
    for (Vertex v = 1; v < spec.volume(); ++v) dists.push_back(origin_distance(v, spec));
    std::sort(dists.begin(), dists.end());
    double s = 0.0;
    for (std::uint64_t i = 0; i < j; ++i) s += std::pow(dists[i], -alpha);
    return s;
}

ModelParams basic_params(int d, int m, double am, double ap, double lam, double p = 2.0) {
    ModelParams params;
    params.spec = TorusSpec{d, m, p};
    params.alpha_minus = ParamFamily::constant(am);
    params.alpha_plus = ParamFamily::constant(ap);
    params.lambda = ParamFamily::constant(lam);
    return params;
}

} // namespace

TEST_CASE("partial rate sums match enumeration oracles") {
    // d=1, m=5, alpha=1: two points at distance 1, two at distance 2
    CHECK(partial_rate_sum(4, 1.0, TorusSpec{1, 5, 2.0}) == doctest::Approx(3.0));
    // alpha=0 counts points
    for (std::uint64_t j : {1ull, 3ull, 8ull})
        CHECK(partial_rate_sum(j, 0.0, TorusSpec{2, 3, 1.0}) == doctest::Approx(static_cast<double>(j)));
    // d=2, m=5, sup norm, alpha=1: eight points at distance 1
    CHECK(partial_rate_sum(8, 1.0, TorusSpec{2, 5, kNormInf}) == doctest::Approx(8.0));

    for (double alpha : {0.3, 0.7}) {
        const TorusSpec spec{2, 6, 2.0};
        for (std::uint64_t j : {1ull, 5ull, 20ull, 35ull})
            CHECK(partial_rate_sum(j, alpha, spec) == doctest::Approx(brute_partial_sum(j, alpha, spec)));
    }

    CHECK_THROWS_AS(partial_rate_sum(25, 0.5, TorusSpec{1, 5, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(partial_rate_sum(2, -0.5, TorusSpec{1, 5, 2.0}), std::invalid_argument);
}

TEST_CASE("partial sums increase in j and do not increase in alpha") {
    for (int d = 1; d <= 2; ++d) {
        for (int m : {3, 5, 7}) {
            NeighborDistances table(TorusSpec{d, m, 2.0});
            const std::vector<double> alphas = {0.0, 0.3, 0.9 * d};
            for (double alpha : alphas) {
                double prev = 0.0;
                for (std::uint64_t j = 1; j <= table.count(); ++j) {
                    const double cur = table.partial_sum(j, alpha);
                    CHECK(cur > prev);
                    prev = cur;
                }
            }
            for (std::uint64_t j = 1; j <= table.count(); j += 3) {
                for (std::size_t a = 1; a < alphas.size(); ++a)
                    CHECK(table.partial_sum(j, alphas[a]) <= table.partial_sum(j, alphas[a - 1]) + 1e-12);
            }
        }
    }
}

TEST_CASE("scaled partial sums stay sandwiched around the limit constant") {
    // R_j / j^(1 - alpha/d) within [0.5 R, 2 R] for j >= 10
    for (double alpha : {0.0, 0.5}) {
        const int d = 1;
        NeighborDistances table(TorusSpec{d, 501, 2.0});
        const double limit = limit_constant(alpha, d, 2.0);
        for (std::uint64_t j = 10; j <= table.count(); j *= 2) {
            const double ratio = table.partial_sum(j, alpha) / std::pow(static_cast<double>(j), 1.0 - alpha / d);
            CHECK(ratio >= 0.5 * limit);
            CHECK(ratio <= 2.0 * limit);
        }
    }
    const double alpha = 1.0;
    NeighborDistances table2(TorusSpec{2, 41, kNormInf});
    const double limit2 = limit_constant(alpha, 2, kNormInf);
    for (std::uint64_t j = 10; j <= table2.count(); j *= 2) {
        const double ratio = table2.partial_sum(j, alpha) / std::pow(static_cast<double>(j), 0.5);
        CHECK(ratio >= 0.5 * limit2);
        CHECK(ratio <= 2.0 * limit2);
    }
}

TEST_CASE("pairwise kernel sums over disjoint sets obey the partial-sum bounds") {
    const TorusSpec spec{2, 7, 2.0};
    const std::uint64_t n = spec.volume();
    NeighborDistances table(spec);
    Rng rng(7);
    for (double alpha : {0.0, 0.6, 1.4}) {
        for (int rep = 0; rep < 20; ++rep) {
            // random disjoint A, B
            std::vector<Vertex> a, b;
            for (Vertex v = 0; v < n; ++v) {
                const double u = rng.next_unit();
                if (u < 0.25)
                    a.push_back(v);
                else if (u < 0.5)
                    b.push_back(v);
            }
            if (a.empty() || b.empty()) continue;
            double cross = 0.0;
            for (Vertex u : a)
                for (Vertex v : b) cross += std::pow(torus_distance(u, v, spec), -alpha);
            const double upper = std::min(static_cast<double>(a.size()) * table.partial_sum(b.size(), alpha),
                                          static_cast<double>(b.size()) * table.partial_sum(a.size(), alpha));
            CHECK(cross <= upper * (1 + 1e-12));
            const double rn = table.partial_sum(n - 1, alpha);
            const double lower =
                std::max(static_cast<double>(a.size()) * (rn - table.partial_sum(n - b.size(), alpha)),
                         static_cast<double>(b.size()) * (rn - table.partial_sum(n - a.size(), alpha)));
            CHECK(cross >= lower - 1e-9);
        }
    }
}

TEST_CASE("total rates match closed forms") {
    {
        auto s = total_rates(basic_params(1, 5, 0.0, 0.0, 2.0));
        CHECK(s.r_minus == doctest::Approx(4.0));
        CHECK(s.r_plus == doctest::Approx(8.0));
        CHECK(s.z == doctest::Approx(2.0));
        CHECK(s.c == doctest::Approx(std::log(5.0)));
    }
    {
        auto s = total_rates(basic_params(1, 7, 0.4, 0.4, 1.0));
        CHECK(s.z == doctest::Approx(1.0));
        CHECK(s.c == doctest::Approx(0.0));
        CHECK(s.regime == Regime::coexistence);
    }
    {
        auto s = total_rates(basic_params(1, 5, 1.0, 0.0, 1.0));
        CHECK(s.r_minus == doctest::Approx(3.0));
        CHECK(s.r_plus == doctest::Approx(4.0));
        CHECK(s.z == doctest::Approx(4.0 / 3.0));
    }
}

TEST_CASE("limit constant: closed forms, monotonicity, and errors") {
    CHECK(limit_constant(0.0, 1, 2.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(limit_constant(0.0, 2, kNormInf) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(limit_constant(0.0, 3, 1.0) == doctest::Approx(1.0).epsilon(1e-6));

    // one dimension: antiderivative gives 2^alpha / (1 - alpha)
    for (double alpha : {0.25, 0.5, 0.75}) {
        const double closed = std::pow(2.0, alpha) / (1.0 - alpha);
        CHECK(limit_constant(alpha, 1, 2.0) == doctest::Approx(closed).epsilon(2e-4));
    }
    CHECK(limit_constant(0.5, 1, 2.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(2e-4));

    // two dimensions, sup norm, alpha=1: the integral of 1/max(x,y) over the
    // unit square equals 2, so the constant is 2^1 * 2 = 4
    CHECK(limit_constant(1.0, 2, kNormInf) == doctest::Approx(4.0).epsilon(2e-4));

    double prev = 0.0;
    for (double alpha : {0.0, 0.4, 0.8, 1.2, 1.6}) {
        const double cur = limit_constant(alpha, 2, 2.0);
        CHECK(cur >= prev - 1e-9);
        prev = cur;
    }

    CHECK_THROWS_AS(limit_constant(1.0, 1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(limit_constant(-0.1, 1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(limit_constant(2.5, 2, 2.0), std::invalid_argument);
}

TEST_CASE("regime classification over n-grids") {
    const auto eq = ParamFamily::constant(0.5);
    const std::vector<std::uint64_t> grid = {100, 10000, 1000000};

    CHECK(classify_regime(eq, eq, ParamFamily::constant(1.0), 1, 2.0, grid).regime == Regime::coexistence);
    CHECK(classify_regime(eq, eq, ParamFamily::log_squared(0.0, 1.0), 1, 2.0, grid).regime == Regime::case_i);
    CHECK(classify_regime(eq, eq, ParamFamily::affine_log(1.0, 1.0), 1, 2.0, grid).regime == Regime::case_ii);
    CHECK(classify_regime(eq, eq, ParamFamily::constant(2.0), 1, 2.0, grid).regime == Regime::case_iii);

    // c_n = sqrt(log n) needs a wide grid before the doubling rule fires
    std::map<std::uint64_t, double> tab;
    const std::vector<std::uint64_t> wide = {100, 10000, 100000000, 10000000000000000ull};
    for (auto n : wide) tab[n] = 1.0 + 1.0 / std::sqrt(std::log(static_cast<double>(n)));
    CHECK(classify_regime(eq, eq, ParamFamily::table(tab), 1, 2.0, wide).regime == Regime::case_iv);

    // unequal exponents make the first type the fast one: z < 1, |c_n| ~ log n.
    // A narrow grid is honestly inconclusive under the doubling rule; a wide
    // grid (asymptotic z beyond the exact cap) resolves to case-iii.
    const auto narrow = classify_regime(ParamFamily::constant(0.0), ParamFamily::constant(0.5),
                                        ParamFamily::constant(1.0), 1, 2.0,
                                        std::vector<std::uint64_t>{100, 1000, 10000});
    CHECK_FALSE(narrow.approximate);
    for (const auto& pt : narrow.series) {
        CHECK(pt.z < 1.0);
        CHECK(pt.c < 0.0);
    }
    CHECK(narrow.regime == Regime::indeterminate);

    const auto wide_rep = classify_regime(ParamFamily::constant(0.0), ParamFamily::constant(0.5),
                                          ParamFamily::constant(1.0), 1, 2.0,
                                          std::vector<std::uint64_t>{10000, 100000000, 1000000000000ull});
    CHECK(wide_rep.approximate);
    CHECK(wide_rep.regime == Regime::case_iii);

    CHECK_THROWS_AS(classify_regime(eq, eq, eq, 1, 2.0, std::vector<std::uint64_t>{100, 1000}),
                    std::invalid_argument);
}

TEST_CASE("displacement tables normalize and expose the stated pmfs") {
    {
        auto t = displacement_table(basic_params(2, 5, 0.0, 0.0, 3.0), TypeTag::minus);
        for (Vertex v = 1; v < 25; ++v) CHECK(t.probs[v] == doctest::Approx(1.0 / 24.0));
    }
    {
        // d=1, m=5, alpha=1: displacements +-1 carry 1/3, +-2 carry 1/6
        auto t = displacement_table(basic_params(1, 5, 1.0, 0.5, 1.0), TypeTag::minus);
        CHECK(t.probs[1] == doctest::Approx(1.0 / 3.0));
        CHECK(t.probs[2] == doctest::Approx(1.0 / 6.0));
        CHECK(t.probs[3] == doctest::Approx(1.0 / 6.0));
        CHECK(t.probs[4] == doctest::Approx(1.0 / 3.0));
    }
    for (auto [d, m, am, ap, lam] : std::vector<std::tuple<int, int, double, double, double>>{
             {1, 100, 0.3, 0.8, 2.0}, {2, 31, 1.2, 0.1, 0.5}, {3, 9, 2.1, 0.0, 7.0}}) {
        for (TypeTag tag : {TypeTag::minus, TypeTag::plus}) {
            auto t = displacement_table(basic_params(d, m, am, ap, lam), tag);
            double sum = 0.0, carry = 0.0;
            for (double p : t.probs) {
                const double y = p - carry;
                const double tt = sum + y;
                carry = (tt - sum) - y;
                sum = tt;
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("displacement sampler draws follow the table") {
    auto params = basic_params(1, 5, 1.0, 0.0, 1.0);
    auto t = displacement_table(params, TypeTag::minus);
    Rng rng(99);
    std::vector<std::uint64_t> counts(5, 0);
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) ++counts[t.sample(rng)];
    CHECK(counts[0] == 0);
    for (Vertex v = 1; v < 5; ++v) {
        const double freq = static_cast<double>(counts[v]) / draws;
        CHECK(freq == doctest::Approx(t.probs[v]).epsilon(0.05));
    }
}

TEST_CASE("rate sums under the nearest-vertex convention") {
    CHECK(ambient_side(1000, 2) == 32);
    CHECK(ambient_side(1024, 2) == 32);
    CHECK(ambient_side(1025, 2) == 33);
    CHECK(ambient_side(10, 1) == 10);
    // alpha = 0: the sum counts the n-1 nearest nonzero vertices exactly
    CHECK(rate_sum(1000, 0.0, 2, 2.0) == doctest::Approx(999.0));
    // perfect power: agrees with the full-torus sum
    CHECK(rate_sum(25, 0.7, 2, 2.0) ==
          doctest::Approx(partial_rate_sum(24, 0.7, TorusSpec{2, 5, 2.0})));
}

TEST_CASE("one-dimensional scaled rate sums approach the closed-form limit") {
    // R_n / sqrt(n) -> 2 sqrt(2) for alpha = 1/2, within 2% at n = 1e6
    const double scaled = rate_sum(1000000, 0.5, 1, 2.0) / std::sqrt(1e6);
    CHECK(scaled == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(0.02));
}
