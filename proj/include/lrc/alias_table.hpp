#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lrc/rng.hpp"

namespace lrc {

// Walker/Vose two-table sampler: O(K) construction, O(1) draws.
class AliasTable {
public:
    AliasTable() = default;

    explicit AliasTable(std::span<const double> weights) {
        const std::size_t k = weights.size();
        if (k == 0) throw std::invalid_argument("alias table: empty weight vector");
        // compensated sum keeps the normalization stable for large K
        double total = 0.0, carry = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) throw std::invalid_argument("alias table: negative weight");
            const double y = w - carry;
            const double t = total + y;
            carry = (t - total) - y;
            total = t;
        }
        if (!(total > 0.0)) throw std::invalid_argument("alias table: zero total weight");

        norm_.resize(k);
        for (std::size_t i = 0; i < k; ++i) norm_[i] = weights[i] / total;

        prob_.assign(k, 0.0);
        alias_.assign(k, 0);
        std::vector<std::uint32_t> small, large;
        small.reserve(k);
        large.reserve(k);
        std::vector<double> scaled(k);
        for (std::size_t i = 0; i < k; ++i) {
            scaled[i] = norm_[i] * static_cast<double>(k);
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            const std::uint32_t s = small.back();
            const std::uint32_t l = large.back();
            small.pop_back();
            large.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        // leftovers are 1 up to rounding
        for (std::uint32_t i : large) prob_[i] = 1.0;
        for (std::uint32_t i : small) prob_[i] = 1.0;
    }

    std::size_t size() const { return prob_.size(); }

    std::size_t sample(Rng& rng) const {
        const std::size_t i = static_cast<std::size_t>(rng.next_below(prob_.size()));
        return rng.next_unit() < prob_[i] ? i : alias_[i];
    }

    // normalized weights, for inspection and exact pmf checks
    const std::vector<double>& probabilities() const { return norm_; }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
    std::vector<double> norm_;
};

} // namespace lrc
