#pragma once

#include <vector>

#include "surf/polynomial.hpp"
#include "surf/samples.hpp"

namespace surf {

/// Singular moment system, i.e. a node partition with an empty subinterval.
struct degenerate_partition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed breakpoints 0 = n_0 <= ... <= n_{d+1} = 1 of the unit interval.
struct NodePartition {
    std::vector<double> nodes;
    double ratio = 0.0;  // r_d(nodes) when known, else 0

    int degree() const { return static_cast<int>(nodes.size()) - 2; }
    void validate() const;
};

/// The published node partitions and ratio constants for d = 0..8.
class NodeTable {
public:
    static const NodeTable& instance();
    const NodePartition& partition(int degree) const;
    double r(int degree) const { return partition(degree).ratio; }
    static constexpr int kMaxDegree = 8;

private:
    NodeTable();
    std::vector<NodePartition> rows_;
};

/// The unique h in P_d whose integral over each node cell [n_{i-1}, n_i]
/// equals masses[i], via the (d+1)x(d+1) moment system solved with
/// partial-pivot elimination. Throws degenerate_partition_error on
/// duplicate nodes.
Polynomial fit_on_unit(const std::vector<double>& masses, const NodePartition& nodes);

/// INT: counts samples per node cell of iv rescaled to [0,1] (half-open
/// cells, last cell closed), forms the add-one masses q_J = (n_J + 1)/n
/// (or n_J / n when add_one is false), fits on the unit interval and maps
/// the fit back onto iv as a density.
Polynomial int_fit(const Interval& iv, const SortedSamples& s, int degree,
                   bool add_one = true);
Polynomial int_fit(const Interval& iv, const SortedSamples& s, const NodePartition& nodes,
                   std::uint64_t n, bool add_one = true);

/// The ratio of eq-style interest: integral of |h| over [0,1] divided by
/// the sum of |cell areas|. Infinity when every cell area vanishes; always
/// >= 1 otherwise. Throws on the zero polynomial (callers use 1 for it).
double ratio(const NodePartition& nodes, const Polynomial& h);

/// The d+1 monic extremal polynomials: for each i, the unique monic
/// degree-d h with zero area on every cell except cell i.
std::vector<Polynomial> extremal_polys(const NodePartition& nodes);

/// sup over P_d of ratio(nodes, .), attained on the extremal set.
double ratio_sup(const NodePartition& nodes);

/// Searches symmetric node partitions (free interior nodes mirrored about
/// 0.5) for the one minimizing ratio_sup, by grid scan plus per-coordinate
/// golden-section refinement. `grid` is the scan resolution per coordinate.
NodePartition optimize_nodes(int degree, int grid = 64);

/// One row of the node-constant verification table.
struct NodeCheckRow {
    int degree;
    std::vector<double> nodes;
    double recomputed_ratio;
    double paper_ratio;
};

/// Recomputes r_d at the published partitions for d in [d_lo, d_hi].
std::vector<NodeCheckRow> verify_nodes(int d_lo, int d_hi);

}  // namespace surf
