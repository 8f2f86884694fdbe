#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "surf/polynomial.hpp"

namespace surf {

enum class Family { kBeta, kGaussian, kGamma };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// One mixture component. Parameter meaning by family:
///   beta(alpha, beta), gaussian(mean, stddev), gamma(shape, scale).
struct MixtureComponent {
    double weight;
    Family family;
    double p1;
    double p2;
};

struct MixtureSpec {
    std::vector<MixtureComponent> components;

    void validate() const;
    double pdf(double x) const;
    double cdf(double x) const;
    /// Total mass outside [lo, hi] via closed-form CDFs.
    double tail_mass_outside(double lo, double hi) const;
};

/// count i.i.d. draws, deterministic per (seed, stream). Gaussian uses the
/// inverse CDF, gamma a Marsaglia-Tsang style rejection, beta the
/// gamma-ratio construction; all consume one counter-based uniform stream.
std::vector<double> sample(const MixtureSpec& spec, std::size_t count, std::uint64_t seed,
                           std::uint64_t stream = 0);

/// l1 distance between a piecewise estimate and the mixture density:
/// per-piece adaptive quadrature of |est - pdf| plus the mixture's tail
/// mass outside the estimate's hull.
double l1_error(const PiecewiseEstimate& est, const MixtureSpec& spec);

/// Same, restricted to an evaluation window: |est - pdf| over
/// [window_lo, window_hi], charging mixture mass in the window that the
/// estimate does not cover. This is the figures' protocol with window [0,1].
double l1_error(const PiecewiseEstimate& est, const MixtureSpec& spec, double window_lo,
                double window_hi);

/// Named catalog of the experiment mixtures. Throws on unknown names.
MixtureSpec builtin_spec(const std::string& name);
std::vector<std::string> builtin_spec_names();

}  // namespace surf
