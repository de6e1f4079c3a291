#include "lrc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace lrc {

void IntHistogram::add(std::int64_t value, std::uint64_t times) {
    if (counts.empty() && value != lo) lo = value;
    if (value < lo) {
        const std::int64_t shift = lo - value;
        counts.insert(counts.begin(), static_cast<std::size_t>(shift), 0);
        lo = value;
    }
    const std::int64_t idx = value - lo;
    if (idx >= static_cast<std::int64_t>(counts.size())) counts.resize(static_cast<std::size_t>(idx) + 1, 0);
    counts[static_cast<std::size_t>(idx)] += times;
}

std::uint64_t IntHistogram::total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

std::map<std::int64_t, std::uint64_t> IntHistogram::as_map() const {
    std::map<std::int64_t, std::uint64_t> out;
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] > 0) out[lo + static_cast<std::int64_t>(i)] = counts[i];
    return out;
}

ReferencePmf geometric_reference(double p, std::int64_t k_max) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("geometric reference: p must lie in (0, 1]");
    if (k_max < 1) throw std::invalid_argument("geometric reference: k_max must be >= 1");
    ReferencePmf ref;
    ref.lo = 1;
    ref.probs.resize(static_cast<std::size_t>(k_max));
    double q = 1.0;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        ref.probs[static_cast<std::size_t>(k - 1)] = p * q;
        q *= 1.0 - p;
    }
    ref.tail = q; // (1-p)^k_max
    return ref;
}

namespace {

double chi_square_tail(double statistic, int dof) {
    if (dof <= 0) return 1.0;
    return boost::math::gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

} // namespace

GofResult chi_square_gof(const IntHistogram& hist, const ReferencePmf& ref, int min_bin) {
    const std::uint64_t n = hist.total();
    if (hist.counts.empty()) throw std::invalid_argument("chi-square: empty histogram");
    if (n < 100) throw std::invalid_argument("chi-square: need at least 100 observations");
    if (hist.lo < ref.lo) throw std::invalid_argument("chi-square: observations below the reference support");

    // walk the reference support, merging bins until each expected count
    // reaches min_bin; everything past the walk joins the tail bin
    std::vector<double> expected;
    std::vector<std::uint64_t> observed;
    double exp_acc = 0.0;
    std::uint64_t obs_acc = 0;
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < ref.probs.size(); ++i) {
        exp_acc += nn * ref.probs[i];
        const std::int64_t value = ref.lo + static_cast<std::int64_t>(i);
        if (value >= hist.lo && value < hist.hi()) obs_acc += hist.counts[static_cast<std::size_t>(value - hist.lo)];
        if (exp_acc >= min_bin) {
            expected.push_back(exp_acc);
            observed.push_back(obs_acc);
            exp_acc = 0.0;
            obs_acc = 0;
        }
    }
    // tail bin: leftover accumulation, reference tail mass, observations past
    // the reference support
    double tail_exp = exp_acc + nn * ref.tail;
    std::uint64_t tail_obs = obs_acc;
    const std::int64_t ref_hi = ref.lo + static_cast<std::int64_t>(ref.probs.size());
    for (std::int64_t v = std::max(hist.lo, ref_hi); v < hist.hi(); ++v)
        tail_obs += hist.counts[static_cast<std::size_t>(v - hist.lo)];
    if (tail_exp > 0.0 || tail_obs > 0) {
        if (!expected.empty() && tail_exp < min_bin) {
            expected.back() += tail_exp;
            observed.back() += tail_obs;
        } else {
            expected.push_back(tail_exp);
            observed.push_back(tail_obs);
        }
    }

    GofResult res;
    res.bins = static_cast<int>(expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (expected[i] <= 0.0) {
            // observations where the reference puts no mass: certain rejection
            if (observed[i] > 0) res.statistic += 1e300;
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - expected[i];
        res.statistic += diff * diff / expected[i];
    }
    res.dof = std::max(1, res.bins - 1);
    res.p_value = chi_square_tail(res.statistic, res.dof);
    return res;
}

GofResult chi_square_two_sample(const IntHistogram& a, const IntHistogram& b, int min_bin) {
    const std::uint64_t na = a.total(), nb = b.total();
    if (a.counts.empty() || b.counts.empty()) throw std::invalid_argument("chi-square: empty histogram");
    if (na < 100 || nb < 100) throw std::invalid_argument("chi-square: need at least 100 observations per sample");

    const std::int64_t lo = std::min(a.lo, b.lo);
    const std::int64_t hi = std::max(a.hi(), b.hi());
    auto count_at = [](const IntHistogram& h, std::int64_t v) -> std::uint64_t {
        if (v < h.lo || v >= h.hi()) return 0;
        return h.counts[static_cast<std::size_t>(v - h.lo)];
    };

    // merge columns so that min(row marginal) * pooled column share >= min_bin
    const double total = static_cast<double>(na + nb);
    const double min_row = static_cast<double>(std::min(na, nb));
    std::vector<std::uint64_t> ca, cb;
    std::uint64_t acc_a = 0, acc_b = 0;
    for (std::int64_t v = lo; v < hi; ++v) {
        acc_a += count_at(a, v);
        acc_b += count_at(b, v);
        const double pooled = static_cast<double>(acc_a + acc_b);
        if (min_row * pooled / total >= min_bin) {
            ca.push_back(acc_a);
            cb.push_back(acc_b);
            acc_a = acc_b = 0;
        }
    }
    if (acc_a + acc_b > 0) {
        if (!ca.empty()) {
            ca.back() += acc_a;
            cb.back() += acc_b;
        } else {
            ca.push_back(acc_a);
            cb.push_back(acc_b);
        }
    }

    GofResult res;
    res.bins = static_cast<int>(ca.size());
    for (std::size_t i = 0; i < ca.size(); ++i) {
        const double col = static_cast<double>(ca[i] + cb[i]);
        const double ea = static_cast<double>(na) * col / total;
        const double eb = static_cast<double>(nb) * col / total;
        const double da = static_cast<double>(ca[i]) - ea;
        const double db = static_cast<double>(cb[i]) - eb;
        if (ea > 0.0) res.statistic += da * da / ea;
        if (eb > 0.0) res.statistic += db * db / eb;
    }
    res.dof = std::max(1, res.bins - 1);
    res.p_value = chi_square_tail(res.statistic, res.dof);
    return res;
}

double tv_distance(std::span<const double> empirical, const ReferencePmf& ref, std::int64_t empirical_lo) {
    double emp_sum = 0.0;
    for (double e : empirical) emp_sum += e;
    double ref_sum = ref.tail;
    for (double r : ref.probs) ref_sum += r;
    if (std::abs(emp_sum - 1.0) > 1e-9) throw std::invalid_argument("tv distance: empirical pmf not normalized");
    if (std::abs(ref_sum - 1.0) > 1e-9) throw std::invalid_argument("tv distance: reference pmf not normalized");

    const std::int64_t lo = std::min(empirical_lo, ref.lo);
    const std::int64_t hi = std::max(empirical_lo + static_cast<std::int64_t>(empirical.size()),
                                     ref.lo + static_cast<std::int64_t>(ref.probs.size()));
    double acc = 0.0;
    for (std::int64_t v = lo; v < hi; ++v) {
        double e = 0.0, r = 0.0;
        if (v >= empirical_lo && v - empirical_lo < static_cast<std::int64_t>(empirical.size()))
            e = empirical[static_cast<std::size_t>(v - empirical_lo)];
        if (v >= ref.lo && v - ref.lo < static_cast<std::int64_t>(ref.probs.size()))
            r = ref.probs[static_cast<std::size_t>(v - ref.lo)];
        acc += std::abs(e - r);
    }
    acc += ref.tail; // reference mass beyond everything observed
    return 0.5 * acc;
}

double tv_distance(const IntHistogram& hist, const ReferencePmf& ref) {
    const std::uint64_t n = hist.total();
    if (n == 0) throw std::invalid_argument("tv distance: empty histogram");
    std::vector<double> emp(hist.counts.size());
    for (std::size_t i = 0; i < emp.size(); ++i) emp[i] = static_cast<double>(hist.counts[i]) / static_cast<double>(n);
    // renormalize exactly to absorb division rounding
    double s = 0.0;
    for (double e : emp) s += e;
    for (double& e : emp) e /= s;
    return tv_distance(emp, ref, hist.lo);
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const std::size_t i = static_cast<std::size_t>(std::floor(h));
    if (i + 1 >= values.size()) return values.back();
    return values[i] + (h - std::floor(h)) * (values[i + 1] - values[i]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double interquartile_range(std::vector<double> values) {
    const double q1 = quantile(values, 0.25);
    const double q3 = quantile(std::move(values), 0.75);
    return q3 - q1;
}

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

} // namespace lrc
