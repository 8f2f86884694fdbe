#include "surf/samples.hpp"

#include <algorithm>
#include <cmath>

#include "surf/rng.hpp"

namespace surf {

bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

SortedSamples::SortedSamples(std::vector<double> sorted_values, index_t n)
    : values_(std::move(sorted_values)), n_(n) {
    if (!is_power_of_two(n_) || n_ < 8)
        throw std::invalid_argument("sample budget n must be a power of two with n >= 8");
    if (values_.size() != static_cast<std::size_t>(n_) - 1)
        throw std::invalid_argument("expected exactly n-1 sample values");
    for (std::size_t i = 0; i + 1 < values_.size(); ++i)
        if (values_[i] > values_[i + 1]) throw std::invalid_argument("sample values not sorted");
    log2_n_ = 0;
    while ((1u << log2_n_) < n_) ++log2_n_;
}

index_t SortedSamples::count_in_halfopen(double lo, double hi) const {
    auto first = std::lower_bound(values_.begin(), values_.end(), lo);
    auto last = std::lower_bound(values_.begin(), values_.end(), hi);
    return static_cast<index_t>(last - first);
}

index_t SortedSamples::count_in_closed(double lo, double hi) const {
    auto first = std::lower_bound(values_.begin(), values_.end(), lo);
    auto last = std::upper_bound(values_.begin(), values_.end(), hi);
    return static_cast<index_t>(last - first);
}

SortedSamples sort_samples(std::vector<double> raw, index_t n, std::uint64_t seed) {
    if (!is_power_of_two(n)) throw std::invalid_argument("n must be a power of two");
    if (raw.size() < static_cast<std::size_t>(n) - 1)
        throw std::invalid_argument("fewer than n-1 raw samples supplied");
    if (raw.size() > static_cast<std::size_t>(n) - 1) {
        // uniform random subset, seeded (Fisher-Yates prefix)
        CounterRng rng(seed, 0x5u);
        for (std::size_t i = 0; i < static_cast<std::size_t>(n) - 1; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.next_below(raw.size() - i));
            std::swap(raw[i], raw[j]);
        }
        raw.resize(static_cast<std::size_t>(n) - 1);
    }
    std::sort(raw.begin(), raw.end());
    return SortedSamples(std::move(raw), n);
}

index_t budget_for(std::size_t available_count) {
    index_t n = 8;
    while (static_cast<std::size_t>(n) * 2 - 1 <= available_count) n *= 2;
    if (static_cast<std::size_t>(n) - 1 > available_count)
        throw std::invalid_argument("need at least 7 samples");
    return n;
}

Interval make_interval(index_t a, index_t b, const SortedSamples& s) {
    if (!(a < b) || b > s.n()) throw std::invalid_argument("interval requires 0 <= a < b <= n");
    return Interval{a, b, s.boundary(a), s.boundary(b)};
}

Rational empirical_mass(index_t a, index_t b, const SortedSamples& s) {
    if (!(a < b) || b > s.n()) throw std::invalid_argument("empirical_mass requires 0 <= a < b <= n");
    return Rational{b - a, s.n()};
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<std::uint64_t> counts, std::uint64_t n)
    : counts_(std::move(counts)), n_(n), total_(0) {
    if (!is_power_of_two(n_)) throw std::invalid_argument("denominator n must be a power of two");
    if (counts_.empty()) throw std::invalid_argument("empty distribution");
    for (auto c : counts_) {
        if (c == 0) throw std::invalid_argument("each mass must be at least 1/n");
        total_ += c;
    }
    if (total_ > n_) throw std::invalid_argument("distribution mass exceeds 1");
}

EmpiricalDistribution EmpiricalDistribution::uniform(std::uint64_t n) {
    return EmpiricalDistribution(std::vector<std::uint64_t>(n, 1), n);
}

bool EmpiricalDistribution::is_binary() const {
    for (auto c : counts_)
        if (!is_power_of_two(c)) return false;
    return true;
}

double EmpiricalDistribution::sqrt_mass_sum() const {
    double acc = 0.0;
    for (auto c : counts_) acc += std::sqrt(static_cast<double>(c) / static_cast<double>(n_));
    return acc;
}

std::vector<Interval> partition_of(const EmpiricalDistribution& dist, const SortedSamples& s) {
    if (dist.n() != s.n()) throw std::invalid_argument("distribution denominator differs from n");
    if (!dist.is_full()) throw std::invalid_argument("partition_of requires a full distribution");
    std::vector<Interval> out;
    out.reserve(dist.size());
    index_t cursor = 0;
    for (auto c : dist.counts()) {
        index_t next = cursor + static_cast<index_t>(c);
        out.push_back(make_interval(cursor, next, s));
        cursor = next;
    }
    return out;
}

EmpiricalDistribution binary_decompose(const EmpiricalDistribution& dist) {
    std::vector<std::uint64_t> out;
    out.reserve(dist.size());
    for (auto c : dist.counts()) {
        // descending binary expansion: high bits first
        for (int bit = 63; bit >= 0; --bit) {
            std::uint64_t term = std::uint64_t{1} << bit;
            if (c & term) out.push_back(term);
        }
    }
    return EmpiricalDistribution(std::move(out), dist.n());
}

bool refines(const EmpiricalDistribution& fine, const EmpiricalDistribution& coarse) {
    if (!fine.is_binary() || !coarse.is_binary())
        throw std::invalid_argument("refines is defined for binary distributions");
    if (fine.total_count() != coarse.total_count() || fine.n() != coarse.n())
        throw std::invalid_argument("refines: mass totals differ");
    // every cumulative boundary of coarse must appear among fine's
    std::size_t i = 0;
    std::uint64_t fine_cum = 0, coarse_cum = 0;
    for (auto c : coarse.counts()) {
        coarse_cum += c;
        while (i < fine.size() && fine_cum < coarse_cum) fine_cum += fine.counts()[i++];
        if (fine_cum != coarse_cum) return false;
    }
    return true;
}

}  // namespace surf
