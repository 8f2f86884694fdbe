#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace surf {

using index_t = std::uint32_t;

bool is_power_of_two(std::uint64_t v);

/// The increasingly sorted sample values X_(1) <= ... <= X_(n-1) together
/// with the sample budget n (a power of two, n >= 8). All interval
/// boundaries used anywhere in the estimator come from here.
class SortedSamples {
public:
    SortedSamples(std::vector<double> sorted_values, index_t n);

    const std::vector<double>& values() const { return values_; }
    index_t n() const { return n_; }
    int log2_n() const { return log2_n_; }

    double hull_lo() const { return values_.front(); }
    double hull_hi() const { return values_.back(); }

    /// Real boundary for sample index a in [0, n]; the unbounded outer
    /// intervals of the paper are truncated to the sample hull.
    double boundary(index_t a) const {
        if (a == 0) return hull_lo();
        if (a >= n_) return hull_hi();
        return values_[a - 1];
    }

    /// Number of samples with value in [lo, hi) (half-open).
    index_t count_in_halfopen(double lo, double hi) const;
    /// Number of samples with value in [lo, hi] (closed).
    index_t count_in_closed(double lo, double hi) const;

private:
    std::vector<double> values_;
    index_t n_;
    int log2_n_;
};

/// Sorts raw draws and keeps the first n-1 of them. Rejects inputs shorter
/// than n-1 and budgets that are not a power of two. When more than n-1
/// values are supplied the subset is chosen uniformly at random (seeded).
SortedSamples sort_samples(std::vector<double> raw, index_t n,
                           std::uint64_t seed = 0);

/// Largest power of two n with n-1 <= available_count; throws if that n < 8.
index_t budget_for(std::size_t available_count);

/// Index interval I_{a,b} plus its hull-truncated real bounds. Half-open
/// [lo, hi) except when b == n, where the interval is closed at the hull.
struct Interval {
    index_t a;
    index_t b;
    double lo;
    double hi;

    bool degenerate() const { return !(lo < hi); }
};

Interval make_interval(index_t a, index_t b, const SortedSamples& s);

/// Empirical mass q_{a,b} = (b-a)/n as an exact pair (numerator, n).
struct Rational {
    std::uint64_t num;
    std::uint64_t den;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Rational empirical_mass(index_t a, index_t b, const SortedSamples& s);

/// Ordered interval masses, each an exact multiple of 1/n held as an
/// integer count of 1/n units. Immutable after construction.
class EmpiricalDistribution {
public:
    EmpiricalDistribution(std::vector<std::uint64_t> counts, std::uint64_t n);

    static EmpiricalDistribution uniform(std::uint64_t n);

    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::uint64_t n() const { return n_; }
    std::size_t size() const { return counts_.size(); }
    std::uint64_t total_count() const { return total_; }

    double mass(std::size_t i) const {
        return static_cast<double>(counts_[i]) / static_cast<double>(n_);
    }
    bool is_full() const { return total_ == n_; }
    /// True when every mass is a dyadic fraction 1/2^nu.
    bool is_binary() const;
    double sqrt_mass_sum() const;

private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t n_;
    std::uint64_t total_;
};

/// Interval partition induced by a full distribution: k contiguous
/// intervals I_{r_i n, (r_i + q_i) n} covering the sample hull.
std::vector<Interval> partition_of(const EmpiricalDistribution& dist, const SortedSamples& s);

/// Replaces every mass by the descending terms of its binary expansion.
/// The result is binary and its partition refines the input's.
EmpiricalDistribution binary_decompose(const EmpiricalDistribution& dist);

/// True iff every interval of `fine`'s partition is contained in an
/// interval of `coarse`'s. Both must be binary with equal totals.
bool refines(const EmpiricalDistribution& fine, const EmpiricalDistribution& coarse);

}  // namespace surf
