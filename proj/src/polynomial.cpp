#include "surf/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace surf {

namespace {

constexpr double kRootTol = 1e-12;

std::vector<double> trimmed(const std::vector<double>& c, double tol) {
    std::vector<double> out(c);
    while (out.size() > 1 && std::abs(out.back()) <= tol) out.pop_back();
    if (out.size() == 1 && std::abs(out[0]) <= tol) out[0] = 0.0;
    return out;
}

int sign_of(double x, double tol) {
    if (x > tol) return 1;
    if (x < -tol) return -1;
    return 0;
}

double eval(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

// Sturm chain p, p', then negated euclidean remainders, each rescaled to
// unit max coefficient so signs survive for degrees up to 16.
std::vector<std::vector<double>> sturm_chain(std::vector<double> p0) {
    std::vector<std::vector<double>> chain;
    chain.push_back(p0);
    std::vector<double> p1(p0.size() - 1);
    for (size_t i = 1; i < p0.size(); ++i) p1[i - 1] = p0[i] * static_cast<double>(i);
    chain.push_back(trimmed(p1, 0.0));
    while (chain.back().size() > 1) {
        const auto& a = chain[chain.size() - 2];
        const auto& b = chain.back();
        std::vector<double> r(a);
        while (r.size() >= b.size() && !(r.size() == 1 && r[0] == 0.0)) {
            double q = r.back() / b.back();
            size_t shift = r.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) r[i + shift] -= q * b[i];
            r.pop_back();
            r = trimmed(r, 0.0);
            if (r.size() == 1 && r[0] == 0.0) break;
        }
        if (r.size() == 1 && r[0] == 0.0) break;  // exact division: chain ends at gcd
        for (double& v : r) v = -v;
        double scale = 0.0;
        for (double v : r) scale = std::max(scale, std::abs(v));
        if (scale > 0.0)
            for (double& v : r) v /= scale;
        chain.push_back(std::move(r));
        if (chain.back().size() == 1) break;
    }
    return chain;
}

int sign_variations(const std::vector<std::vector<double>>& chain, double x) {
    int count = 0;
    int prev = 0;
    for (const auto& p : chain) {
        int s = sign_of(eval(p, x), 0.0);
        if (s != 0) {
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
    }
    return count;
}

// Distinct real roots in (lo, hi] by Sturm bisection.
void isolate(const std::vector<std::vector<double>>& chain, double lo, double hi,
             int vlo, int vhi, std::vector<double>& out) {
    int count = vlo - vhi;
    if (count <= 0) return;
    if (hi - lo <= kRootTol) {
        double mid = 0.5 * (lo + hi);
        for (int i = 0; i < count; ++i) out.push_back(mid);  // cluster within tolerance
        return;
    }
    double mid = 0.5 * (lo + hi);
    int vmid = sign_variations(chain, mid);
    isolate(chain, lo, mid, vlo, vmid, out);
    isolate(chain, mid, hi, vmid, vhi, out);
}

void push_root(std::vector<double>& roots, double r, double a, double b) {
    if (r < a - kRootTol || r > b + kRootTol) return;
    r = std::clamp(r, a, b);
    for (double e : roots)
        if (std::abs(e - r) <= kRootTol) return;
    roots.push_back(r);
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    if (static_cast<int>(coeffs_.size()) - 1 > kMaxDegree)
        throw std::invalid_argument("polynomial degree exceeds supported maximum of 16");
    for (double c : coeffs_)
        if (!std::isfinite(c)) throw std::invalid_argument("non-finite polynomial coefficient");
}

int Polynomial::effective_degree(double tol) const {
    for (size_t i = coeffs_.size(); i-- > 0;)
        if (std::abs(coeffs_[i]) > tol) return static_cast<int>(i);
    return -1;
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double Polynomial::operator()(double x) const { return eval(coeffs_, x); }

Polynomial Polynomial::operator-(const Polynomial& other) const {
    std::vector<double> out(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (size_t i = 0; i < other.coeffs_.size(); ++i) out[i] -= other.coeffs_[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    std::vector<double> out(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (size_t i = 0; i < other.coeffs_.size(); ++i) out[i] += other.coeffs_[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double s) const {
    std::vector<double> out(coeffs_);
    for (double& c : out) c *= s;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() == 1) return Polynomial();
    std::vector<double> out(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial(std::move(out));
}

double integrate(const Polynomial& p, double a, double b) {
    if (a > b) throw std::invalid_argument("integrate: a > b");
    double acc = 0.0;
    double pa = a, pb = b;
    for (size_t i = 0; i < p.coeffs().size(); ++i) {
        acc += p.coeffs()[i] * (pb - pa) / static_cast<double>(i + 1);
        pa *= a;
        pb *= b;
    }
    return acc;
}

std::vector<double> real_roots_in(const Polynomial& p, double a, double b) {
    double scale = p.max_abs_coeff();
    if (scale == 0.0) throw std::invalid_argument("real_roots_in: zero polynomial");
    std::vector<double> c = trimmed(p.coeffs(), 0.0);
    std::vector<double> roots;
    if (c.size() == 1) return roots;
    if (c.size() == 2) {
        push_root(roots, -c[0] / c[1], a, b);
        return roots;
    }
    if (c.size() == 3) {
        double disc = c[1] * c[1] - 4.0 * c[0] * c[2];
        if (disc >= 0.0) {
            double s = std::sqrt(disc);
            // classic sign trick avoids cancellation in the smaller root
            double q = -0.5 * (c[1] + (c[1] >= 0.0 ? s : -s));
            double r1 = q / c[2];
            double r2 = (q != 0.0) ? c[0] / q : -c[1] / (2.0 * c[2]);
            if (r1 > r2) std::swap(r1, r2);
            push_root(roots, r1, a, b);
            push_root(roots, r2, a, b);
        }
        return roots;
    }
    for (double& v : c) v /= scale;
    auto chain = sturm_chain(c);
    // nudge outward so roots sitting exactly on a or b are counted
    double lo = a - kRootTol, hi = b + kRootTol;
    std::vector<double> found;
    isolate(chain, lo, hi, sign_variations(chain, lo), sign_variations(chain, hi), found);
    std::sort(found.begin(), found.end());
    for (double r : found) push_root(roots, r, a, b);
    std::sort(roots.begin(), roots.end());
    return roots;
}

double abs_l1(const Polynomial& p, double a, double b) {
    if (a > b) throw std::invalid_argument("abs_l1: a > b");
    if (a == b) return 0.0;
    std::vector<double> c = trimmed(p.coeffs(), 0.0);
    if (c.size() == 1) return std::abs(c[0]) * (b - a);
    if (c.size() == 2) {
        double r = -c[0] / c[1];
        if (r <= a || r >= b) return std::abs(integrate(p, a, b));
        return std::abs(integrate(p, a, r)) + std::abs(integrate(p, r, b));
    }
    std::vector<double> cuts{a};
    for (double r : real_roots_in(p, a, b))
        if (r > cuts.back() && r < b) cuts.push_back(r);
    cuts.push_back(b);
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        total += std::abs(integrate(p, cuts[i], cuts[i + 1]));
    return total;
}

Polynomial rescale_density(const Polynomial& p, double to_lo, double to_hi) {
    double len = to_hi - to_lo;
    if (!(len > 0.0)) throw std::invalid_argument("rescale_density: zero-length target interval");
    // compose p with u = (x - to_lo)/len via Horner on the linear map
    const auto& c = p.coeffs();
    double alpha = 1.0 / len, beta = -to_lo / len;
    std::vector<double> out{c.back()};
    for (size_t k = c.size() - 1; k-- > 0;) {
        std::vector<double> next(out.size() + 1, 0.0);
        for (size_t i = 0; i < out.size(); ++i) {
            next[i] += out[i] * beta;
            next[i + 1] += out[i] * alpha;
        }
        next[0] += c[k];
        out = std::move(next);
    }
    for (double& v : out) v /= len;
    return Polynomial(std::move(out));
}

void PiecewiseEstimate::validate() const {
    if (pieces.empty()) throw std::invalid_argument("piecewise estimate with no pieces");
    if (pieces.front().lo != hull_lo || pieces.back().hi != hull_hi)
        throw std::invalid_argument("pieces do not cover the hull");
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (!(pieces[i].lo < pieces[i].hi))
            throw std::invalid_argument("empty or inverted piece interval");
        if (i > 0 && pieces[i].lo != pieces[i - 1].hi)
            throw std::invalid_argument("pieces are not contiguous");
    }
}

double PiecewiseEstimate::operator()(double x) const {
    if (x < hull_lo || x > hull_hi || pieces.empty()) return 0.0;
    // last piece is closed on the right
    auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                               [](double v, const EstimatePiece& pc) { return v < pc.hi; });
    if (it == pieces.end()) it = pieces.end() - 1;
    return it->poly(x);
}

double PiecewiseEstimate::total_mass() const {
    double m = 0.0;
    for (const auto& pc : pieces) m += integrate(pc.poly, pc.lo, pc.hi);
    return m;
}

double l1_distance_piecewise(const PiecewiseEstimate& u, const PiecewiseEstimate& v,
                             double region_lo, double region_hi) {
    if (region_lo > region_hi) throw std::invalid_argument("l1_distance_piecewise: inverted region");
    if (region_lo == region_hi) return 0.0;
    auto covers = [&](const PiecewiseEstimate& e) {
        return !e.pieces.empty() && e.pieces.front().lo <= region_lo + 1e-15 * std::abs(region_lo) &&
               e.pieces.back().hi >= region_hi - 1e-15 * std::abs(region_hi);
    };
    if (!covers(u) || !covers(v))
        throw std::invalid_argument("l1_distance_piecewise: estimate does not cover the region");
    std::vector<double> cuts{region_lo};
    for (const auto& e : {&u, &v})
        for (const auto& pc : e->pieces) {
            if (pc.lo > region_lo && pc.lo < region_hi) cuts.push_back(pc.lo);
            if (pc.hi > region_lo && pc.hi < region_hi) cuts.push_back(pc.hi);
        }
    cuts.push_back(region_hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    double scale = 0.0;
    for (const auto& pc : u.pieces) scale = std::max(scale, pc.poly.max_abs_coeff());
    for (const auto& pc : v.pieces) scale = std::max(scale, pc.poly.max_abs_coeff());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        double mid = 0.5 * (a + b);
        auto piece_at = [&](const PiecewiseEstimate& e) -> const Polynomial& {
            auto it = std::upper_bound(e.pieces.begin(), e.pieces.end(), mid,
                                       [](double x, const EstimatePiece& pc) { return x < pc.hi; });
            if (it == e.pieces.end()) it = e.pieces.end() - 1;
            return it->poly;
        };
        Polynomial diff = piece_at(u) - piece_at(v);
        // an interval compared against its own fit must give exactly 0
        if (diff.max_abs_coeff() < 1e-14 * scale) continue;
        total += abs_l1(diff, a, b);
    }
    return total;
}

}  // namespace surf
