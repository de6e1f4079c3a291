#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace lrc {

// Counts over consecutive integers starting at lo.
struct IntHistogram {
    std::int64_t lo = 1;
    std::vector<std::uint64_t> counts;

    void add(std::int64_t value, std::uint64_t times = 1);
    std::uint64_t total() const;
    std::int64_t hi() const { return lo + static_cast<std::int64_t>(counts.size()); } // exclusive
    std::map<std::int64_t, std::uint64_t> as_map() const;
};

// Reference pmf over [lo, lo + probs.size()), with tail_mass beyond.
struct ReferencePmf {
    std::int64_t lo = 1;
    std::vector<double> probs;
    double tail = 0.0;
};

// Geo(p) on {1, 2, ...} truncated after k_max, remaining mass in the tail.
ReferencePmf geometric_reference(double p, std::int64_t k_max);

struct GofResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int bins = 0;
};

// Pearson goodness of fit against a reference pmf. Bins with expected count
// below min_bin are merged into the tail; dof = bins - 1. Requires at least
// 100 observations.
GofResult chi_square_gof(const IntHistogram& hist, const ReferencePmf& ref, int min_bin = 5);

// Two-sample homogeneity test on a 2 x K table built from the two histograms,
// merging sparse columns into the tail until every cell's expected count
// reaches min_bin.
GofResult chi_square_two_sample(const IntHistogram& a, const IntHistogram& b, int min_bin = 5);

// Total variation between an empirical pmf (dense from `lo`) and a reference,
// counting the reference tail beyond the covered range. Both inputs must be
// normalized within 1e-9.
double tv_distance(std::span<const double> empirical, const ReferencePmf& ref, std::int64_t empirical_lo = 1);
double tv_distance(const IntHistogram& hist, const ReferencePmf& ref);

// Linear-interpolation quantile (the "R-7" rule); sorts a copy.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);
double interquartile_range(std::vector<double> values);
double mean(std::span<const double> values);

} // namespace lrc
