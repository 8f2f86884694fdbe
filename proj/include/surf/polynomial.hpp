#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace surf {

/// Real polynomial in the monomial basis, coefficients ascending by power.
/// The leading stored coefficient may be zero; degree() is nominal.
class Polynomial {
public:
    static constexpr int kMaxDegree = 16;

    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);
    static Polynomial constant(double c) { return Polynomial({c}); }

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    /// Degree after dropping trailing coefficients below `tol` (absolute);
    /// -1 for the zero polynomial.
    int effective_degree(double tol = 0.0) const;
    double max_abs_coeff() const;
    bool is_zero(double tol = 0.0) const { return effective_degree(tol) < 0; }

    /// Horner evaluation of sum c_i x^i.
    double operator()(double x) const;

    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator*(double s) const;
    bool operator==(const Polynomial& other) const { return coeffs_ == other.coeffs_; }

    /// Derivative polynomial.
    Polynomial derivative() const;

private:
    std::vector<double> coeffs_;
};

/// Exact antiderivative difference over [a, b]. Throws if a > b.
double integrate(const Polynomial& p, double a, double b);

/// All real roots of p in [a, b], ascending, refined to absolute tolerance
/// 1e-12 and deduplicated within that tolerance. Throws on the zero
/// polynomial. Trimmed degree <= 2 is solved in closed form, higher degrees
/// by Sturm-sequence sign counting with bisection.
std::vector<double> real_roots_in(const Polynomial& p, double a, double b);

/// Integral of |p| over [a, b]: the sum of |signed area| over root-delimited
/// subintervals.
double abs_l1(const Polynomial& p, double a, double b);

/// Treat p as a density on [0,1] and map it onto [to_lo, to_hi]: returns
/// (1/L) * p((x - to_lo)/L) with L = to_hi - to_lo, so mass on any sub-range
/// is preserved under the affine map. Throws on a zero-length target.
Polynomial rescale_density(const Polynomial& p, double to_lo, double to_hi);

/// One piece of a piecewise-polynomial density estimate.
struct EstimatePiece {
    double lo;
    double hi;
    Polynomial poly;
};

/// Contiguous, non-overlapping pieces covering [hull_lo, hull_hi].
struct PiecewiseEstimate {
    std::vector<EstimatePiece> pieces;
    double hull_lo = 0.0;
    double hull_hi = 0.0;

    void validate() const;
    double operator()(double x) const;  // 0 outside the hull
    double total_mass() const;
};

/// Exact l1 distance between two piecewise estimates over [region_lo,
/// region_hi], via abs_l1 of the difference polynomial on each cell of the
/// common refinement. Both estimates must cover the region.
double l1_distance_piecewise(const PiecewiseEstimate& u, const PiecewiseEstimate& v,
                             double region_lo, double region_hi);

}  // namespace surf
