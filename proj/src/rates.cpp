#include "lrc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrc {

NeighborDistances::NeighborDistances(const TorusSpec& spec) : spec_(spec) {
    spec.validate();
    const std::uint64_t n = spec.volume();
    dists_.reserve(n - 1);
    for (Vertex v = 1; v < n; ++v) dists_.push_back(origin_distance(v, spec));
    std::sort(dists_.begin(), dists_.end());
}

double NeighborDistances::partial_sum(std::uint64_t j, double alpha) const {
    if (j < 1 || j > dists_.size())
        throw std::invalid_argument("partial rate sum: j must be in [1, m^d - 1]");
    if (!(alpha >= 0.0)) throw std::invalid_argument("partial rate sum: alpha must be >= 0");
    if (alpha == 0.0) return static_cast<double>(j);
    double sum = 0.0, carry = 0.0;
    for (std::uint64_t i = 0; i < j; ++i) {
        const double w = std::pow(dists_[i], -alpha);
        const double y = w - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double partial_rate_sum(std::uint64_t j, double alpha, const TorusSpec& ambient) {
    return NeighborDistances(ambient).partial_sum(j, alpha);
}

int ambient_side(std::uint64_t n, int d) {
    if (n < 2) throw std::invalid_argument("ambient side: volume must be >= 2");
    int m = std::max(2, static_cast<int>(std::floor(std::pow(static_cast<double>(n), 1.0 / d))) - 1);
    auto vol = [d](int side) {
        std::uint64_t v = 1;
        for (int i = 0; i < d; ++i) v *= static_cast<std::uint64_t>(side);
        return v;
    };
    while (vol(m) < n) ++m;
    return m;
}

double rate_sum(std::uint64_t n, double alpha, int d, double norm_p) {
    TorusSpec ambient{d, ambient_side(n, d), norm_p};
    return partial_rate_sum(n - 1, alpha, ambient);
}

RateSummary total_rates(const ModelParams& params, const NeighborDistances& table) {
    params.validate_basic();
    const std::uint64_t n = params.n();
    RateSummary out;
    out.r_minus = table.partial_sum(n - 1, params.alpha_minus.eval(n));
    out.r_plus = params.lambda.eval(n) * table.partial_sum(n - 1, params.alpha_plus.eval(n));
    out.z = out.r_plus / out.r_minus;
    out.c = (out.z - 1.0) * std::log(static_cast<double>(n));
    out.regime = out.c == 0.0 ? Regime::coexistence : Regime::indeterminate;
    return out;
}

RateSummary total_rates(const ModelParams& params) {
    return total_rates(params, NeighborDistances(params.spec));
}

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr double kGlNode[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
constexpr double kGlWeight[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double p_norm(const double* x, int d, double p) {
    if (p == kNormInf) {
        double m = 0.0;
        for (int i = 0; i < d; ++i) m = std::max(m, x[i]);
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += x[i];
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += x[i] * x[i];
        return std::sqrt(s);
    }
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += std::pow(x[i], p);
    return std::pow(s, 1.0 / p);
}

// Composite tensor Gauss-Legendre over the box [lo_i, hi_i]^d with 2^level
// panels per axis.
double box_integral(const double* lo, const double* hi, int d, double p, double alpha, int level) {
    const int panels = 1 << level;
    std::int64_t total_cells = 1;
    for (int i = 0; i < d; ++i) total_cells *= panels;

    double sum = 0.0;
    std::vector<int> cell(d, 0);
    std::vector<double> x(d);
    for (std::int64_t c = 0; c < total_cells; ++c) {
        std::int64_t rest = c;
        for (int i = 0; i < d; ++i) {
            cell[i] = static_cast<int>(rest % panels);
            rest /= panels;
        }
        std::int64_t nodes = 1;
        for (int i = 0; i < d; ++i) nodes *= 8;
        for (std::int64_t q = 0; q < nodes; ++q) {
            std::int64_t qr = q;
            double wgt = 1.0;
            for (int i = 0; i < d; ++i) {
                const int k = static_cast<int>(qr % 8);
                qr /= 8;
                const double h = (hi[i] - lo[i]) / panels;
                const double a = lo[i] + cell[i] * h;
                x[i] = a + 0.5 * h * (1.0 + kGlNode[k]);
                wgt *= 0.5 * h * kGlWeight[k];
            }
            sum += wgt * std::pow(p_norm(x.data(), d, p), -alpha);
        }
    }
    return sum;
}

} // namespace

double limit_constant(double alpha, int d, double norm_p) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("limit constant: unsupported dimension");
    if (!(norm_p >= 1.0)) throw std::invalid_argument("limit constant: norm selector must satisfy p >= 1");
    if (!(alpha >= 0.0) || alpha >= d)
        throw std::invalid_argument("limit constant: alpha must lie in [0, d), the integral diverges otherwise");

    // Integrate the shell [0,1/2]^d \ [0,1/4]^d, where the integrand is
    // smooth, then sum the geometric series of its dyadic rescalings.
    const int max_level = d <= 2 ? 6 : (d == 3 ? 4 : 3);
    double shell_prev = 0.0;
    double shell = 0.0;
    for (int level = 0; level <= max_level; ++level) {
        shell = 0.0;
        for (unsigned mask = 1; mask < (1u << d); ++mask) {
            double lo[kMaxDim], hi[kMaxDim];
            for (int i = 0; i < d; ++i) {
                if (mask & (1u << i)) {
                    lo[i] = 0.25;
                    hi[i] = 0.5;
                } else {
                    lo[i] = 0.0;
                    hi[i] = 0.25;
                }
            }
            shell += box_integral(lo, hi, d, norm_p, alpha, level);
        }
        if (level > 0 && std::abs(shell - shell_prev) <= 2e-5 * std::abs(shell)) break;
        shell_prev = shell;
    }
    const double unit_cube = shell / (1.0 - std::pow(2.0, alpha - d));
    return std::pow(2.0, d) * unit_cube;
}

namespace {

bool ratio_bounded(const std::vector<double>& x) {
    double lo = x[0], hi = x[0];
    for (double v : x) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == 0.0) return true; // identically zero
    return (hi - lo) <= 0.2 * hi;
}

bool ratio_diverging(const std::vector<double>& x) {
    return x.back() >= 2.0 * x.front() && x.back() > 0.0;
}

} // namespace

RegimeReport classify_regime(const ParamFamily& alpha_minus, const ParamFamily& alpha_plus,
                             const ParamFamily& lambda, int d, double norm_p,
                             std::span<const std::uint64_t> n_grid) {
    if (n_grid.size() < 3) throw std::invalid_argument("classify regime: need at least 3 grid points");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("classify regime: grid must be increasing");

    constexpr std::uint64_t kExactCap = 1ull << 22;
    RegimeReport report;
    for (std::uint64_t n : n_grid) {
        const double am = alpha_minus.eval(n);
        const double ap = alpha_plus.eval(n);
        const double lam = lambda.eval(n);
        if (!(am >= 0.0) || am >= d || !(ap >= 0.0) || ap >= d)
            throw std::invalid_argument("classify regime: alpha families must evaluate into [0, d)");
        double z;
        if (am == ap) {
            z = lam; // identical kernel sums cancel exactly
        } else if (n <= kExactCap) {
            const int m = ambient_side(n, d);
            NeighborDistances table(TorusSpec{d, m, norm_p});
            z = lam * table.partial_sum(n - 1, ap) / table.partial_sum(n - 1, am);
        } else {
            z = lam * (limit_constant(ap, d, norm_p) / limit_constant(am, d, norm_p)) *
                std::pow(static_cast<double>(n), (am - ap) / d);
            report.approximate = true;
        }
        report.series.push_back({n, z, (z - 1.0) * std::log(static_cast<double>(n))});
    }

    std::vector<double> c, u, v;
    for (const auto& pt : report.series) {
        const double logn = std::log(static_cast<double>(pt.n));
        c.push_back(std::abs(pt.c));
        u.push_back(std::abs(pt.c) / (logn * logn));
        v.push_back(std::abs(pt.c) / logn);
    }

    constexpr double kZero = 1e-9;
    const bool all_zero = *std::max_element(c.begin(), c.end()) < kZero;
    if (all_zero || ratio_bounded(c)) {
        report.regime = Regime::coexistence;
    } else if (ratio_diverging(c)) {
        if (ratio_diverging(u)) {
            report.regime = Regime::case_i;
        } else if (ratio_bounded(u) && u.back() > kZero) {
            report.regime = Regime::case_ii;
        } else if (ratio_bounded(v) && v.back() > kZero) {
            report.regime = Regime::case_iii;
        } else if (v.back() <= 0.5 * v.front()) {
            report.regime = Regime::case_iv;
        } else {
            report.regime = Regime::indeterminate;
        }
    } else {
        report.regime = Regime::indeterminate;
    }
    return report;
}

DisplacementTable displacement_table(const ModelParams& params, TypeTag type) {
    params.validate_basic();
    const std::uint64_t n = params.n();
    const double alpha = (type == TypeTag::minus ? params.alpha_minus : params.alpha_plus).eval(n);
    const double lam = type == TypeTag::minus ? 1.0 : params.lambda.eval(n);

    std::vector<double> weights(n - 1);
    for (Vertex v = 1; v < n; ++v)
        weights[v - 1] = lam * std::pow(origin_distance(v, params.spec), -alpha);

    DisplacementTable out;
    double sum = 0.0, carry = 0.0;
    for (double w : weights) {
        const double y = w - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    out.total_rate = sum;
    out.probs.assign(n, 0.0);
    for (Vertex v = 1; v < n; ++v) out.probs[v] = weights[v - 1] / sum;
    out.sampler = AliasTable(weights);
    return out;
}

} // namespace lrc
