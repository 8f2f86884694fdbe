#pragma once

#include <cstdint>
#include <optional>

#include "surf/interp.hpp"
#include "surf/polynomial.hpp"
#include "surf/samples.hpp"

namespace surf {

/// Tuning knobs for the estimator. epsilon defaults to sqrt(5 ln(1/delta)/n)
/// and gamma to alpha * r_d * epsilon * sqrt(d+1) with r_d recomputed from
/// the node table; both can be overridden.
struct SurfConfig {
    int degree = 1;
    double alpha = 0.25;
    double delta = 0.1;
    std::optional<double> epsilon;        // override for epsilon(delta)
    bool add_one_mass = true;             // q_J = (n_J + 1)/n vs n_J/n
    bool parallel = false;                // OpenMP over the per-step COMP calls
    std::optional<std::uint32_t> halt_t;  // power of two: stop after D - log2(t) steps

    static double default_epsilon(std::uint64_t n, double delta);
    double resolved_epsilon(std::uint64_t n) const;
    double gamma(std::uint64_t n) const;
    void validate() const;
};

/// gamma-weighted sum of square-root masses over a (normalized)
/// distribution: the deviation proxy lambda.
double lambda_penalty(const EmpiricalDistribution& dist, double gamma);

/// Divide-and-conquer computation of mu: the largest Lambda - lambda over
/// all dyadic binary coarsenings of `cells`. `fhat` is the single-interval
/// fit on the union of cells, `gamma` the penalty at the root. Masses are
/// taken from the index widths of the cells (which must form a dyadic
/// block); throws on a non-dyadic split point.
double comp(const Polynomial& fhat, const std::vector<Interval>& cells,
            const SortedSamples& s, int degree, double gamma, bool add_one = true);

/// Overload taking the cells' normalized binary distribution explicitly;
/// validates that the masses agree with the cell index widths.
double comp(const Polynomial& fhat, const std::vector<Interval>& cells,
            const EmpiricalDistribution& dist, const SortedSamples& s, int degree,
            double gamma, bool add_one = true);

/// The D-step bottom-up pass: returns the final binary distribution q_D.
EmpiricalDistribution merge(const SortedSamples& s, const SurfConfig& cfg);

/// Full estimator: piecewise INT fit on the partition chosen by merge.
/// Degenerate (zero-length) outer cells carry no density and are dropped.
PiecewiseEstimate surf(const SortedSamples& s, const SurfConfig& cfg);

/// Variant that stops merging after D - log2(t) steps; the output partition
/// refines the t-cell uniform distribution.
PiecewiseEstimate surf_halted(const SortedSamples& s, SurfConfig cfg, std::uint32_t t);

}  // namespace surf
